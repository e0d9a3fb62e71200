#include "wpidos/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "wpidos/errors.hpp"

namespace wpidos {

namespace {

// Exact integral of the piecewise-linear table over (0, rho), continued by the
// first value below the first knot and by the last value past the last knot.
double tabulated_cumulative(const TabulatedDos& tab, double rho) {
  const auto& x = tab.lambdas;
  const auto& v = tab.values;
  double total = v.front() * std::min(rho, x.front());
  for (std::size_t i = 0; i + 1 < x.size() && rho > x[i]; ++i) {
    const double b = std::min(rho, x[i + 1]);
    const double width = x[i + 1] - x[i];
    if (width <= 0.0) continue;
    const double vb = v[i] + (v[i + 1] - v[i]) * (b - x[i]) / width;
    total += 0.5 * (v[i] + vb) * (b - x[i]);
  }
  if (rho > x.back()) total += v.back() * (rho - x.back());
  return total;
}

double extended_cumulative(const DosEnvelope& env, double rho) {
  if (const auto* pl = std::get_if<PowerLawDos>(&env.form))
    return pl->c1 * std::pow(rho, pl->alpha + 1.0) / (pl->alpha + 1.0);
  return tabulated_cumulative(std::get<TabulatedDos>(env.form), rho);
}

}  // namespace

double psi_cumulative(const DosEnvelope& env, double rho) {
  if (!(rho > 0.0) || rho > env.r) {
    std::ostringstream msg;
    msg << "psi_cumulative: rho = " << rho << " outside (0, " << env.r << "]";
    throw DomainError(msg.str());
  }
  return extended_cumulative(env, rho);
}

double psi_inverse_generalized(const DosEnvelope& env, double y) {
  if (y < 0.0) throw DomainError("psi_inverse_generalized: y must be >= 0");
  if (const auto* pl = std::get_if<PowerLawDos>(&env.form)) {
    const double x = std::pow((pl->alpha + 1.0) * y / pl->c1, 1.0 / (pl->alpha + 1.0));
    return std::min(x, env.r);
  }
  if (extended_cumulative(env, env.r) <= y) return env.r;
  // Psi is nondecreasing, so {Psi <= y} is an interval starting at 0.
  double lo = 0.0, hi = env.r;
  const double tol = 1e-10 * env.r;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (extended_cumulative(env, mid) <= y)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

WpiBound implicit_wpi_bound(const DosEnvelope& env, double k, double var, double nx, double ny) {
  if (!(k > 0.0 && k < 1.0)) throw DomainError("implicit_wpi_bound: K must lie in (0, 1)");
  if (var < 0.0) throw DomainError("implicit_wpi_bound: variance must be >= 0");
  if (!(nx > 0.0) || !(ny > 0.0)) throw DomainError("implicit_wpi_bound: norms must be positive");
  WpiBound out;
  if (var == 0.0) return out;
  if (std::isinf(nx) || std::isinf(ny)) return out;  // Phi = infinity: vacuous
  out.rho = psi_inverse_generalized(env, k * var / (nx * ny));
  out.within_validity = out.rho < env.r;
  out.value = (1.0 - k) * out.rho * var;
  return out;
}

GFunction::GFunction(DosEnvelope env) : env_(std::move(env)) {}

double GFunction::cumulative(double rho) const { return extended_cumulative(env_, rho); }

double GFunction::operator()(double rho) const {
  if (!(rho > 0.0)) return 0.0;
  return cumulative(rho) + rho * env_.psi(rho);
}

double GFunction::inverse(double y) const {
  if (!(y > 0.0)) throw DomainError("g_inverse: y must be > g(0+) = 0");
  if (const auto* pl = std::get_if<PowerLawDos>(&env_.form)) {
    const double a = pl->alpha;
    return std::pow((1.0 + a) * y / (pl->c1 * (2.0 + a)), 1.0 / (1.0 + a));
  }
  const auto& tab = std::get<TabulatedDos>(env_.form);
  if (!(tab.values.back() > 0.0) && y >= (*this)(env_.r * 1e6))
    throw DomainError("g_inverse: y beyond the range of g");
  double lo = 0.0, hi = env_.r;
  while ((*this)(hi) < y) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) throw DomainError("g_inverse: y beyond the range of g");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if ((*this)(mid) < y)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

GFunction::HypothesisCheck GFunction::check_hypotheses(double lo, double hi, int points) const {
  HypothesisCheck check;
  if (!(lo > 0.0) || !(hi > lo) || points < 2) {
    check.ok = false;
    check.diagnostic = "invalid hypothesis mesh";
    return check;
  }
  if (const auto* pl = std::get_if<PowerLawDos>(&env_.form)) {
    // g = C1 (2+a)/(1+a) rho^(1+a): monotone with limits 0 and infinity iff a > -1.
    if (!(pl->alpha > -1.0) || !(pl->c1 > 0.0)) {
      check.ok = false;
      check.diagnostic = "power law needs C1 > 0 and alpha > -1";
    }
    return check;
  }
  const double ratio = std::log(hi / lo) / (points - 1);
  double prev = (*this)(lo);
  for (int i = 1; i < points; ++i) {
    const double rho = lo * std::exp(ratio * i);
    const double g = (*this)(rho);
    if (g < prev * (1.0 - 1e-12)) {
      std::ostringstream msg;
      msg << "g decreases near rho = " << rho << " (" << prev << " -> " << g << ")";
      check.ok = false;
      check.diagnostic = msg.str();
      return check;
    }
    prev = g;
  }
  const double g_lo = (*this)(lo);
  if (g_lo > 1e-3 * prev) {
    check.ok = false;
    check.diagnostic = "g does not vanish at 0+ on the mesh";
    return check;
  }
  if (!(std::get<TabulatedDos>(env_.form).values.back() > 0.0)) {
    check.ok = false;
    check.diagnostic = "g stays bounded: tabulated psi ends at 0";
  }
  return check;
}

double g_inverse(const GFunction& gf, double y) { return gf.inverse(y); }

WpiBound explicit_wpi_bound(const DosEnvelope& env, double var, double nx, double ny,
                            std::optional<double> mesh_lo) {
  if (var < 0.0) throw DomainError("explicit_wpi_bound: variance must be >= 0");
  if (!(nx > 0.0) || !(ny > 0.0)) throw DomainError("explicit_wpi_bound: norms must be positive");
  const GFunction gf(env);
  const auto check = gf.check_hypotheses(mesh_lo.value_or(1e-6 * env.r), 10.0 * env.r);
  if (!check.ok) throw RefusedError("explicit_wpi_bound: " + check.diagnostic);
  WpiBound out;
  if (var == 0.0 || std::isinf(nx) || std::isinf(ny)) return out;
  const double b = nx * ny;
  out.rho = gf.inverse(var / b);
  out.value = out.rho * out.rho * env.psi(out.rho) * b;
  out.within_validity = out.rho < env.r;
  return out;
}

WpiBound best_wpi_bound(const DosEnvelope& env, double var, double nx, double ny) {
  try {
    return explicit_wpi_bound(env, var, nx, ny);
  } catch (const RefusedError&) {
    WpiBound best;
    for (int i = 1; i <= 99; ++i) {
      const WpiBound b = implicit_wpi_bound(env, 0.01 * i, var, nx, ny);
      if (b.value > best.value) best = b;
    }
    return best;
  }
}

WpiCertificate certificate_power_law(double c1, double alpha) {
  if (!(c1 > 0.0)) throw DomainError("certificate_power_law: C1 must be positive");
  if (!(alpha > -1.0)) throw DomainError("certificate_power_law: alpha must exceed -1");
  WpiCertificate cert;
  cert.p = (alpha + 2.0) / (alpha + 1.0);
  cert.q = alpha + 2.0;
  cert.c = std::pow(c1, 1.0 / (2.0 + alpha)) * (2.0 + alpha) / (1.0 + alpha);
  cert.phi = "L1^2";
  cert.convention = "2pi";
  return cert;
}

WpiCertificate nash_certificate(int d, NashConvention convention) {
  if (d < 1) throw DomainError("nash_certificate: d must be >= 1");
  const double half_sphere = unit_sphere_area(d) / 2.0;
  if (convention == NashConvention::TwoPi) {
    WpiCertificate cert =
        certificate_power_law(std::pow(2.0 * std::numbers::pi, -d) * half_sphere, d / 2.0 - 1.0);
    cert.source = "nash:d=" + std::to_string(d);
    return cert;
  }
  WpiCertificate cert;
  cert.p = (d + 2.0) / d;
  cert.q = (d + 2.0) / 2.0;
  cert.c = std::pow(half_sphere, 2.0 / (2.0 + d)) * (2.0 + d) / d;
  cert.phi = "L1^2";
  cert.convention = "unit-measure";
  cert.source = "nash:d=" + std::to_string(d);
  return cert;
}

void write_certificate(std::ostream& out, const WpiCertificate& cert) {
  const auto precision = out.precision(17);
  out << "p = " << cert.p << '\n'
      << "q = " << cert.q << '\n'
      << "C = " << cert.c << '\n'
      << "phi = " << cert.phi << '\n'
      << "convention = " << cert.convention << '\n'
      << "source = " << cert.source << '\n';
  out.precision(precision);
}

WpiCertificate read_certificate(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  for (const char* key : {"p", "q", "C", "phi", "convention", "source"})
    if (!kv.count(key)) throw UsageError(std::string("certificate record lacks key '") + key + "'");
  WpiCertificate cert;
  cert.p = std::stod(kv["p"]);
  cert.q = std::stod(kv["q"]);
  cert.c = std::stod(kv["C"]);
  cert.phi = kv["phi"];
  cert.convention = kv["convention"];
  cert.source = kv["source"];
  if (!(cert.p > 1.0) || !(cert.c > 0.0) || std::abs(1.0 / cert.p + 1.0 / cert.q - 1.0) > 1e-12)
    throw UsageError("certificate record violates p > 1, C > 0, 1/p + 1/q = 1");
  return cert;
}

double dirichlet_form(const Symbol& sym, const SpectralField& u) {
  const Eigen::ArrayXd p = symbol_on_lattice(sym, u.spec());
  return (p * u.coeff().abs2()).sum() / std::pow(u.spec().box_len, u.spec().d);
}

double variance(const SpectralField& u) {
  const Eigen::ArrayXd energy = u.coeff().abs2();
  return (energy.sum() - energy[0]) / std::pow(u.spec().box_len, u.spec().d);
}

CertificateCheck check_certificate(const Symbol& sym, const SpectralField& u, const WpiCertificate& cert,
                                   VarianceConvention convention) {
  const double var = convention == VarianceConvention::Torus ? variance(u) : spectral_l2sq(u);
  const double energy = dirichlet_form(sym, u);
  const double l1 = norms(u).l1;
  const double phi = l1 * l1;
  CertificateCheck out;
  if (var == 0.0 || std::isinf(phi)) return out;
  if (energy <= 0.0) {
    if (convention == VarianceConvention::Torus)
      throw std::logic_error("check_certificate: E(u) = 0 with Var(u) > 0 on the torus");
    out.ratio = std::numeric_limits<double>::infinity();
    out.holds = false;
    return out;
  }
  out.ratio = var / (cert.c * std::pow(energy, 1.0 / cert.p) * std::pow(phi, 1.0 / cert.q));
  out.holds = out.ratio <= 1.0 + 1e-6;
  return out;
}

}  // namespace wpidos
