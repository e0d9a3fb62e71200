#include "wpidos/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "wpidos/errors.hpp"

namespace wpidos {

SpectralField evolve(const Symbol& sym, const SpectralField& u, double t) {
  if (t < 0.0) throw DomainError("evolve: t must be >= 0");
  if (t == 0.0) return u;
  const Eigen::ArrayXd p = symbol_on_lattice(sym, u.spec());
  return SpectralField::from_coefficients(u.spec(), u.coeff() * (-t * p).exp().cast<std::complex<double>>());
}

ValidWindow valid_window(const GridSpec& spec, const Symbol& sym, double eta) {
  spec.validate();
  if (!(eta > 0.0 && eta <= 1.0)) throw DomainError("valid_window: eta must lie in (0, 1]");
  const Eigen::ArrayXd p = symbol_on_lattice(sym, spec);
  double gap = std::numeric_limits<double>::infinity();
  double resolved = std::numeric_limits<double>::infinity();
  std::vector<int> k(spec.d);
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) gap = std::min(gap, p[i]);
    lattice_indices(spec, i, k.data());
    int kinf = 0;
    for (int a = 0; a < spec.d; ++a) kinf = std::max(kinf, std::abs(k[a]));
    if (kinf == spec.n / 4 && p[i] > 0.0) resolved = std::min(resolved, p[i]);
  }
  ValidWindow w;
  w.gap = gap;
  w.t_max = eta / gap;
  w.t_min = 1.0 / resolved;
  w.too_narrow = !(w.t_max >= 10.0 * w.t_min);
  return w;
}

double default_eta(const Symbol& sym) {
  if (!sym.smooth_at_origin) return 0.5;
  if (sym.homogeneity && *sym.homogeneity > 2.0) return 0.1;
  return 1.0;
}

Eigen::ArrayXd log_time_grid(double lo, double hi, int per_decade) {
  if (!(lo > 0.0) || !(hi > lo)) throw DomainError("log_time_grid: need 0 < lo < hi");
  if (per_decade < 1) throw DomainError("log_time_grid: per_decade must be >= 1");
  const double decades = std::log10(hi / lo);
  const auto count = static_cast<Eigen::Index>(std::ceil(decades * per_decade - 1e-9)) + 1;
  Eigen::ArrayXd t = Eigen::ArrayXd::LinSpaced(count, std::log10(lo), std::log10(hi));
  t = Eigen::pow(10.0, t);
  t[0] = lo;
  t[count - 1] = hi;
  return t;
}

Eigen::ArrayXd Trace::column(double TracePoint::*member) const {
  Eigen::ArrayXd out(static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) out[static_cast<Eigen::Index>(i)] = points[i].*member;
  return out;
}

Trace evolve_series(const Symbol& sym, const SpectralField& u0, const Eigen::ArrayXd& times, double tail_cutoff) {
  const GridSpec& spec = u0.spec();
  if (sym.dim != spec.d) throw UsageError("evolve_series: symbol dimension does not match the grid");
  const double tail = spectral_tail(u0);
  if (tail > tail_cutoff) {
    std::ostringstream msg;
    msg << "evolve_series: spectral tail " << tail << " exceeds cutoff " << tail_cutoff
        << "; the field is not resolved on this grid";
    throw RefusedError(msg.str());
  }
  for (Eigen::Index i = 0; i < times.size(); ++i) {
    if (times[i] < 0.0) throw DomainError("evolve_series: times must be >= 0");
    if (i > 0 && !(times[i] > times[i - 1])) throw DomainError("evolve_series: times must increase");
  }

  const Eigen::ArrayXd p = symbol_on_lattice(sym, spec);
  const Eigen::ArrayXd energy0 = u0.coeff().abs2();
  const double volume = std::pow(spec.box_len, spec.d);
  const ValidWindow window = valid_window(spec, sym, default_eta(sym));

  Trace trace;
  trace.l1_initial = norms(u0).l1;
  trace.points.reserve(static_cast<std::size_t>(times.size()));
  for (Eigen::Index i = 0; i < times.size(); ++i) {
    const double t = times[i];
    const Eigen::ArrayXd damp = (-t * p).exp();
    const Eigen::ArrayXd mass = energy0 * damp.square();
    const SpectralField ut =
        SpectralField::from_coefficients(spec, u0.coeff() * damp.cast<std::complex<double>>());
    TracePoint pt;
    pt.t = t;
    pt.l2sq = mass.sum() / volume;
    pt.var = (mass.sum() - mass[0]) / volume;
    pt.energy = (p * mass).sum() / volume;
    pt.l1 = spec.cell_volume() * ut.phys().abs().sum();
    trace.points.push_back(pt);
    if (!window.contains(t)) trace.outside_window = true;
  }

  // Centered difference with its own step h = 1e-3 t at every resolved time.
  const auto variance_at = [&](double t) {
    const Eigen::ArrayXd mass = energy0 * (-2.0 * t * p).exp();
    return (mass.sum() - mass[0]) / volume;
  };
  for (const TracePoint& pt : trace.points) {
    if (!(pt.t > 0.0) || !window.contains(pt.t) || !(pt.energy > 0.0)) continue;
    const double h = 1e-3 * pt.t;
    const double slope = (variance_at(pt.t + h) - variance_at(pt.t - h)) / (2.0 * h);
    const double rel = std::abs(slope + 2.0 * pt.energy) / (2.0 * pt.energy);
    trace.dissipation.max_rel_error = std::max(trace.dissipation.max_rel_error, rel);
    ++trace.dissipation.points;
  }
  trace.dissipation.holds = trace.dissipation.max_rel_error <= 1e-3;
  return trace;
}

L1Check l1_monotonicity_check(const Trace& trace) {
  if (trace.points.empty()) throw InsufficientDataError("l1_monotonicity_check: empty trace");
  L1Check out;
  for (std::size_t i = 1; i < trace.points.size(); ++i)
    out.max_increase = std::max(out.max_increase, trace.points[i].l1 - trace.points[i - 1].l1);
  out.holds = out.max_increase <= 1e-8 * trace.l1_initial;
  return out;
}

GaussianHeatNorms heat_gaussian_oracle(double sigma, int d, double t) {
  if (!(sigma > 0.0) || d < 1 || t < 0.0) throw DomainError("heat_gaussian_oracle: invalid arguments");
  const double s2 = sigma * sigma;
  GaussianHeatNorms out;
  out.l2sq = std::pow(std::numbers::pi * s2, 0.5 * d) * std::pow(1.0 + 2.0 * t / s2, -0.5 * d);
  out.l1 = std::pow(2.0 * std::numbers::pi * s2, 0.5 * d);
  return out;
}

void write_trace_csv(std::ostream& out, const Trace& trace) {
  out << "t,var,l1,l2sq,energy\n";
  const auto precision = out.precision(17);
  for (const TracePoint& pt : trace.points)
    out << pt.t << ',' << pt.var << ',' << pt.l1 << ',' << pt.l2sq << ',' << pt.energy << '\n';
  out.precision(precision);
}

}  // namespace wpidos
