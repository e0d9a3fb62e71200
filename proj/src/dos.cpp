#include "wpidos/dos.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>

#include "wpidos/errors.hpp"
#include "wpidos/fit.hpp"

namespace wpidos {

namespace {

void check_pair(const Symbol& sym, const SpectralField& u, const SpectralField& v) {
  if (!(u.spec() == v.spec())) throw UsageError("fields live on different grids");
  if (u.spec().d != sym.dim) throw UsageError("symbol dimension does not match the grid");
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

DosEnvelope DosEnvelope::power_law(double c1, double alpha, double r) {
  if (!(c1 > 0.0)) throw DomainError("power-law envelope needs C1 > 0");
  if (!(alpha > -1.0)) throw DomainError("power-law envelope needs alpha > -1");
  if (!(r > 0.0)) throw DomainError("envelope radius must be positive");
  return DosEnvelope{PowerLawDos{c1, alpha}, r, "L1xL1"};
}

DosEnvelope DosEnvelope::tabulated(std::vector<double> lambdas, std::vector<double> values) {
  if (lambdas.size() != values.size() || lambdas.size() < 2)
    throw UsageError("tabulated envelope needs >= 2 matching knots");
  if (lambdas.front() < 0.0) throw DomainError("tabulated envelope knots must be >= 0");
  if (!std::is_sorted(lambdas.begin(), lambdas.end()))
    throw DomainError("tabulated envelope knots must be nondecreasing");
  if (std::any_of(values.begin(), values.end(), [](double v) { return !(v >= 0.0); }))
    throw DomainError("tabulated envelope values must be >= 0");
  const double r = lambdas.back();
  if (!(r > lambdas.front())) throw DomainError("tabulated envelope has empty support");
  return DosEnvelope{TabulatedDos{std::move(lambdas), std::move(values)}, r, "L1xL1"};
}

double DosEnvelope::psi(double lambda) const {
  if (const auto* pl = std::get_if<PowerLawDos>(&form)) return pl->c1 * std::pow(lambda, pl->alpha);
  const auto& tab = std::get<TabulatedDos>(form);
  if (lambda <= tab.lambdas.front()) return tab.values.front();
  if (lambda >= tab.lambdas.back()) return tab.values.back();
  // Right-continuous at jumps: use the last knot with abscissa <= lambda.
  const auto it = std::upper_bound(tab.lambdas.begin(), tab.lambdas.end(), lambda);
  const std::size_t hi = static_cast<std::size_t>(it - tab.lambdas.begin());
  const std::size_t lo = hi - 1;
  const double x0 = tab.lambdas[lo], x1 = tab.lambdas[hi];
  const double w = (lambda - x0) / (x1 - x0);
  return (1.0 - w) * tab.values[lo] + w * tab.values[hi];
}

std::string DosEnvelope::fingerprint() const {
  std::ostringstream text;
  text.precision(17);
  if (const auto* pl = std::get_if<PowerLawDos>(&form)) {
    text << "power;" << pl->c1 << ';' << pl->alpha;
  } else {
    const auto& tab = std::get<TabulatedDos>(form);
    text << "tab";
    for (std::size_t i = 0; i < tab.lambdas.size(); ++i) text << ';' << tab.lambdas[i] << ':' << tab.values[i];
  }
  text << ";r=" << r << ";norms=" << norm_pair;
  return fnv1a_hex(text.str());
}

double spectral_mass(const Symbol& sym, const SpectralField& u, const SpectralField& v, double lambda) {
  check_pair(sym, u, v);
  if (lambda < 0.0) throw DomainError("spectral_mass: lambda must be >= 0");
  const Eigen::ArrayXd p = symbol_on_lattice(sym, u.spec());
  const Eigen::ArrayXcd prod = u.coeff() * v.coeff().conjugate();
  double re = 0.0, im = 0.0, scale = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    scale += std::abs(prod[i]);
    if (p[i] <= lambda) {
      re += prod[i].real();
      im += prod[i].imag();
    }
  }
  const double volume = std::pow(u.spec().box_len, u.spec().d);
  if (std::abs(im) > 1e-10 * std::max(scale, std::numeric_limits<double>::min()))
    throw UsageError("spectral_mass: imaginary part exceeds roundoff; fields are not real");
  return re / volume;
}

ShellEstimate shell_dos(const Symbol& sym, const SpectralField& u, const SpectralField& v,
                        double lambda, double delta) {
  check_pair(sym, u, v);
  if (!(lambda > 0.0)) throw DomainError("shell_dos: lambda must be positive");
  if (!(delta > 0.0)) throw DomainError("shell_dos: delta must be positive");
  const Eigen::ArrayXd p = symbol_on_lattice(sym, u.spec());
  const Eigen::ArrayXcd prod = u.coeff() * v.coeff().conjugate();
  ShellEstimate est{lambda, delta, std::nullopt, 0};
  double sum = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p[i] > lambda && p[i] <= lambda + delta) {
      sum += prod[i].real();
      ++est.mode_count;
    }
  }
  if (est.mode_count > 0) est.value = sum / std::pow(u.spec().box_len, u.spec().d) / delta;
  return est;
}

SpectralMeasure::SpectralMeasure(const Symbol& sym, const SpectralField& u, const SpectralField& v) {
  check_pair(sym, u, v);
  const Eigen::ArrayXd p = symbol_on_lattice(sym, u.spec());
  const Eigen::ArrayXd weight = (u.coeff() * v.coeff().conjugate()).real() /
                                std::pow(u.spec().box_len, u.spec().d);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(p.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return p[a] < p[b]; });
  sorted_.resize(order.size());
  cumulative_.assign(order.size() + 1, 0.0);
  gap_ = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < order.size(); ++i) {
    sorted_[i] = p[order[i]];
    cumulative_[i + 1] = cumulative_[i] + weight[order[i]];
    if (sorted_[i] > 0.0) gap_ = std::min(gap_, sorted_[i]);
  }
}

double SpectralMeasure::mass(double lambda) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), lambda);
  return cumulative_[static_cast<std::size_t>(it - sorted_.begin())];
}

Eigen::Index SpectralMeasure::modes_in(double lo, double hi) const {
  const auto a = std::upper_bound(sorted_.begin(), sorted_.end(), lo);
  const auto b = std::upper_bound(sorted_.begin(), sorted_.end(), hi);
  return static_cast<Eigen::Index>(b - a);
}

ShellEstimate SpectralMeasure::shell(double lambda, double delta) const {
  ShellEstimate est{lambda, delta, std::nullopt, modes_in(lambda, lambda + delta)};
  if (est.mode_count > 0) est.value = (mass(lambda + delta) - mass(lambda)) / delta;
  return est;
}

DosSamples sample_dos(const SpectralMeasure& measure, const Eigen::ArrayXd& lambdas,
                      const ShellPolicy& policy) {
  DosSamples out;
  const Eigen::Index n = lambdas.size();
  out.lambdas = lambdas;
  out.widths.resize(n);
  out.values.resize(n);
  out.mode_counts.resize(n);
  const double top = measure.max_eigenvalue();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double lambda = lambdas[i];
    if (!(lambda > 0.0)) throw DomainError("sample_dos: shell edges must be positive");
    double delta = policy.relative_width * lambda;
    ShellEstimate est = measure.shell(lambda, delta);
    while (est.mode_count < policy.min_modes && lambda + delta < top) {
      delta *= 2.0;
      est = measure.shell(lambda, delta);
    }
    out.widths[i] = delta;
    out.mode_counts[i] = est.mode_count;
    out.values[i] = (est.mode_count >= policy.min_modes && est.value)
                        ? *est.value
                        : std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

PowerLawFit fit_power_law(const DosSamples& samples, std::pair<double, double> window) {
  std::vector<double> xs, ys;
  for (Eigen::Index i = 0; i < samples.size(); ++i) {
    const double mid = samples.lambdas[i] + 0.5 * samples.widths[i];
    const double v = samples.values[i];
    if (mid < window.first || mid > window.second) continue;
    if (!(v > 0.0) || samples.mode_counts[i] == 0) continue;
    xs.push_back(mid);
    ys.push_back(v);
  }
  if (xs.size() < 5) {
    std::ostringstream msg;
    msg << "fit_power_law: " << xs.size() << " usable samples in [" << window.first << ", "
        << window.second << "], need 5";
    throw InsufficientDataError(msg.str());
  }
  const Eigen::Map<const Eigen::ArrayXd> x(xs.data(), static_cast<Eigen::Index>(xs.size()));
  const Eigen::Map<const Eigen::ArrayXd> y(ys.data(), static_cast<Eigen::Index>(ys.size()));
  const LineFit line = fit_loglog(x, y);
  return PowerLawFit{std::exp(line.intercept), line.slope, line.r2, line.points};
}

double theoretical_alpha(double gamma1, double gamma2, int d) {
  if (!(gamma1 > -1.0) || !(gamma2 > 0.0) || d < 1)
    throw DomainError("theoretical_alpha: need gamma1 > -1, gamma2 > 0, d >= 1");
  return -gamma1 / gamma2 + (d - 1) / (gamma1 + 1.0);
}

DosEnvelope envelope_from_symbol(const Symbol& sym, double r, const ValidationReport& report) {
  if (!report.passed())
    throw RefusedError("envelope_from_symbol: symbol '" + sym.name + "' failed validation");
  const int d = sym.dim;
  const double two_pi_d = std::pow(2.0 * std::numbers::pi, -d);
  const double alpha = theoretical_alpha(sym.gamma1, sym.gamma2, d);
  double c1 = 0.0;
  if (sym.radial_exponent) {
    // P = |xi|^m: level set is the sphere of radius lambda^(1/m), |grad P| = m |xi|^(m-1).
    c1 = two_pi_d * unit_sphere_area(d) / *sym.radial_exponent;
  } else {
    if (sym.gamma1 < 0.0)
      throw RefusedError("envelope_from_symbol: conservative chain needs gamma1 >= 0");
    // 1/|grad P| <= C |xi|^-g1 <= C^(1 + g1/g2) lambda^(-g1/g2); area <= C lambda^((d-1)/(g1+1)).
    const double c = report.c_struct;
    c1 = two_pi_d * std::pow(c, 2.0 + sym.gamma1 / sym.gamma2);
  }
  return DosEnvelope::power_law(c1, alpha, r);
}

DosEnvelope envelope_from_symbol(const Symbol& sym, double r) {
  return envelope_from_symbol(sym, r, validate_assumption(sym, 10000, 0));
}

void write_dos_csv(std::ostream& out, const DosSamples& samples) {
  out << "lambda,delta,value,mode_count\n";
  out.precision(17);
  for (Eigen::Index i = 0; i < samples.size(); ++i) {
    out << samples.lambdas[i] << ',' << samples.widths[i] << ',';
    if (std::isnan(samples.values[i]))
      out << "empty";
    else
      out << samples.values[i];
    out << ',' << samples.mode_counts[i] << '\n';
  }
}

}  // namespace wpidos
