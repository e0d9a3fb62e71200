#pragma once

// Exact multiplier evolution u_t = exp(-t P(D)) u on the lattice, norm traces
// along log-spaced time grids, and the window of times on which the periodic
// box still behaves like R^d.

#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "wpidos/fields.hpp"
#include "wpidos/symbols.hpp"

namespace wpidos {

/// uhat_k -> exp(-t P(xi_k)) uhat_k. Throws DomainError for t < 0.
SpectralField evolve(const Symbol& sym, const SpectralField& u, double t);

struct ValidWindow {
  double t_min = 0.0;
  double t_max = 0.0;
  /// Smallest positive lattice eigenvalue.
  double gap = 0.0;
  /// Set when t_max / t_min < 10.
  bool too_narrow = false;

  bool contains(double t) const { return t >= t_min && t <= t_max; }
};

/// t_max = eta / gap; t_min = 1 / (min P on the shell max_i |k_i| = n/4).
ValidWindow valid_window(const GridSpec& spec, const Symbol& sym, double eta);

/// 0.5 for symbols with a kink at the origin, 0.1 for smooth symbols of
/// degree above 2, 1.0 otherwise.
double default_eta(const Symbol& sym);

/// Log-spaced times from lo to hi inclusive, per_decade points per decade.
Eigen::ArrayXd log_time_grid(double lo, double hi, int per_decade = 32);

struct TracePoint {
  double t = 0.0;
  /// Torus variance: distance to the constants.
  double var = 0.0;
  double l1 = 0.0;
  /// ||u_t||^2, the variance on R^d.
  double l2sq = 0.0;
  double energy = 0.0;
};

struct DissipationCheck {
  /// max over resolved trace times of |dVar/dt + 2E| / (2E), with dVar/dt
  /// the centered difference (Var(t + h) - Var(t - h)) / 2h, h = 1e-3 t.
  double max_rel_error = 0.0;
  std::size_t points = 0;
  bool holds = true;
};

struct Trace {
  std::vector<TracePoint> points;
  double l1_initial = 0.0;
  DissipationCheck dissipation;
  /// Some requested time lies outside the valid window.
  bool outside_window = false;

  Eigen::ArrayXd column(double TracePoint::*member) const;
};

/// Evolves u0 to every time (increasing, >= 0). Refuses fields whose
/// spectral_tail exceeds tail_cutoff. The dissipation check covers the times
/// inside the valid window for the default eta.
Trace evolve_series(const Symbol& sym, const SpectralField& u0, const Eigen::ArrayXd& times,
                    double tail_cutoff = kDefaultTailCutoff);

struct L1Check {
  double max_increase = 0.0;
  bool holds = true;
};

/// Largest increase of ||u_t||_1 between consecutive trace points; holds if
/// it stays below 1e-8 ||u0||_1.
L1Check l1_monotonicity_check(const Trace& trace);

struct GaussianHeatNorms {
  double l2sq = 0.0;
  double l1 = 0.0;
};

/// Norms of the heat flow of exp(-|x|^2 / (2 sigma^2)) on R^d.
GaussianHeatNorms heat_gaussian_oracle(double sigma, int d, double t);

/// CSV with columns t, var, l1, l2sq, energy.
void write_trace_csv(std::ostream& out, const Trace& trace);

}  // namespace wpidos
