#pragma once

// Experiment drivers. Each driver is a plain function returning its numbers;
// run_experiment resolves a config, calls one driver, and writes the manifest,
// CSV tables, certificate records and plots into the output directory.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "wpidos/certificates.hpp"
#include "wpidos/decay.hpp"
#include "wpidos/dos.hpp"
#include "wpidos/fields.hpp"
#include "wpidos/harness/config.hpp"
#include "wpidos/semigroup.hpp"
#include "wpidos/symbols.hpp"

namespace wpidos::harness {

struct DecaySetup {
  GridSpec grid;
  double sigma = 1.0;
  double eta = 1.0;
};

/// Grid, Gaussian width and window fraction used by decay runs of `sym`.
DecaySetup default_decay_setup(const Symbol& sym);

struct DecayRun {
  ValidWindow window;
  Trace trace;
  /// Top decade of the window, where the slope is fitted.
  std::pair<double, double> fit_window;
  /// Log-log slope of ||u_t||^2.
  double slope = 0.0;
  /// -(1 + alpha) with alpha from the growth exponents.
  double expected_slope = 0.0;
  L1Check l1;
  /// Present when the L1 norm is nonincreasing, so that C2 = 0 is justified.
  std::optional<DecayForecast> forecast;
  /// max over traced times in the window of ||u_t||^2 / envelope(t).
  double envelope_ratio = 0.0;
};

/// Traces u0 on log-spaced times over the valid window (or on `times`),
/// fits the decay slope and compares against the certified envelope.
DecayRun decay_run(const Symbol& sym, const SpectralField& u0, double eta, int per_decade = 32,
                   const std::optional<Eigen::ArrayXd>& times = std::nullopt);

struct DosSetup {
  GridSpec grid;
  /// Radius of the flat-spectrum test field; the DoS is a pure power law below radius^2.
  double radius = 1.0;
  /// Top of the fit window, inside the flat region.
  double hi = 0.9;
};

/// Lattices on which octave shells above hi/10 hold many modes.
DosSetup default_dos_setup(int d);

struct DosFitRun {
  DosSamples samples;
  PowerLawFit fit;
  double expected_alpha = 0.0;
  std::pair<double, double> window;
  double gap = 0.0;
};

/// Octave shells [lambda, 2 lambda] at `count` log-spaced left edges whose
/// midpoints span the window; lo = 0 selects max(hi/10, 4 gap).
DosFitRun dos_fit(const Symbol& sym, const SpectralField& u, double lo, double hi, int count);

struct WpiCheckRun {
  double variance = 0.0;
  double energy = 0.0;
  double l1 = 0.0;
  DosEnvelope envelope;
  WpiBound explicit_bound;
  std::vector<std::pair<double, WpiBound>> implicit_bounds;
  WpiCertificate certificate;
  CertificateCheck certificate_check;
  /// E(u) >= explicit bound (1 - slack).
  bool chain_holds = true;
  /// explicit bound >= every implicit bound.
  bool dominance_holds = true;
};

/// r = 0 selects the largest lattice eigenvalue.
WpiCheckRun wpi_check(const Symbol& sym, const SpectralField& u, double r, int k_count, double slack,
                      const ValidationReport& report);

struct NashRow {
  std::string field;
  double unit_measure_ratio = 0.0;
  double two_pi_ratio = 0.0;
  double whole_space_ratio = 0.0;
};

struct NashRun {
  WpiCertificate unit_measure;
  WpiCertificate two_pi;
  std::vector<NashRow> rows;
  int violations = 0;
};

/// Unit-measure Nash certificate checked on `fields` band-limited fields
/// (seeds seed, seed+1, ...) and on Gaussians of the given widths.
NashRun nash_sweep(const GridSpec& grid, int fields, int kmax, std::uint64_t seed,
                   const std::vector<double>& sigmas);

struct RegimeRow {
  double beta = 0.0;
  RegimeClass regime;
  /// Log-log slope of the envelope over the last decade before t_max.
  double fitted_exponent = 0.0;
  /// For the log regime: slope of envelope^(-1/(1+alpha)) against log t,
  /// relative to its predicted value C3 C2^(-1/(1+alpha)).
  double log_slope_ratio = 0.0;
  bool consistent = true;
};

std::vector<RegimeRow> regime_sweep(double alpha, double c1, double c2, double var0, double nx_sq,
                                    const std::vector<double>& betas, double t_max, double tolerance);

/// Runs the configured experiment. Returns 0 when every check passed, 1 when
/// a check failed, 2 when the run was refused or misconfigured; in the last
/// case diagnostic.txt explains why.
int run_experiment(ExperimentConfig cfg);

}  // namespace wpidos::harness
