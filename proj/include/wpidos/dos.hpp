#pragma once

// Density of states d/dlambda (E(lambda)u, v) for Fourier multipliers on the
// lattice, power-law fits near lambda = 0, and theoretical envelopes.

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "wpidos/fields.hpp"
#include "wpidos/symbols.hpp"

namespace wpidos {

struct PowerLawDos {
  double c1 = 1.0;
  double alpha = 0.0;
};

/// Piecewise-linear psi through (lambdas[i], values[i]). Repeated abscissae
/// encode jumps. Beyond the last knot psi is continued by its last value.
struct TabulatedDos {
  std::vector<double> lambdas;
  std::vector<double> values;
};

/// Upper envelope psi for the DoS on (0, r) with respect to a norm pair.
struct DosEnvelope {
  std::variant<PowerLawDos, TabulatedDos> form;
  double r = 1.0;
  std::string norm_pair = "L1xL1";

  static DosEnvelope power_law(double c1, double alpha, double r);
  static DosEnvelope tabulated(std::vector<double> lambdas, std::vector<double> values);

  bool is_power_law() const { return std::holds_alternative<PowerLawDos>(form); }
  double psi(double lambda) const;
  /// Stable text digest of the envelope parameters.
  std::string fingerprint() const;
};

struct ShellEstimate {
  double lambda = 0.0;
  double delta = 0.0;
  std::optional<double> value;  ///< empty when the shell holds no lattice mode
  Eigen::Index mode_count = 0;

  bool empty() const { return !value.has_value(); }
};

struct DosSamples {
  Eigen::ArrayXd lambdas;  ///< left shell edges
  Eigen::ArrayXd widths;
  Eigen::ArrayXd values;   ///< NaN where the shell is empty
  Eigen::Array<Eigen::Index, Eigen::Dynamic, 1> mode_counts;

  Eigen::Index size() const { return lambdas.size(); }
};

struct PowerLawFit {
  double c1 = 0.0;
  double alpha = 0.0;
  double r2 = 0.0;
  std::size_t points = 0;
};

/// L^-d sum_{P(xi_k) <= lambda} Re(uhat_k conj(vhat_k)).
double spectral_mass(const Symbol& sym, const SpectralField& u, const SpectralField& v, double lambda);

/// (mass(lambda + delta) - mass(lambda)) / delta, with the shell's mode count.
ShellEstimate shell_dos(const Symbol& sym, const SpectralField& u, const SpectralField& v,
                        double lambda, double delta);

/// Sorted spectral measure for repeated shell queries on one (u, v) pair.
class SpectralMeasure {
 public:
  SpectralMeasure(const Symbol& sym, const SpectralField& u, const SpectralField& v);

  double mass(double lambda) const;
  Eigen::Index modes_in(double lo, double hi) const;
  ShellEstimate shell(double lambda, double delta) const;
  /// Smallest positive lattice eigenvalue.
  double gap() const { return gap_; }
  double max_eigenvalue() const { return sorted_.size() ? sorted_.back() : 0.0; }

 private:
  std::vector<double> sorted_;
  std::vector<double> cumulative_;  // cumulative_[i] = sum of the first i weights
  double gap_ = 0.0;
};

struct ShellPolicy {
  double relative_width = 0.1;
  Eigen::Index min_modes = 32;
};

/// Shell estimates at left edges `lambdas`. Each shell starts at width
/// relative_width * lambda and doubles until it holds min_modes lattice modes;
/// shells that cannot be filled below the top of the spectrum are reported empty.
DosSamples sample_dos(const SpectralMeasure& measure, const Eigen::ArrayXd& lambdas,
                      const ShellPolicy& policy = {});

/// Log-log least squares of value against shell midpoint lambda + width/2,
/// restricted to midpoints in [lo, hi] with positive values.
PowerLawFit fit_power_law(const DosSamples& samples, std::pair<double, double> window);

/// -gamma1/gamma2 + (d-1)/(gamma1+1).
double theoretical_alpha(double gamma1, double gamma2, int d);

/// Power-law envelope C1 lambda^alpha on (0, r) with the (2 pi)^-d factor.
/// Radial symbols |xi|^m use the exact sphere constant |S^{d-1}|/m; other
/// symbols use the conservative chain constant built from report.c_struct.
DosEnvelope envelope_from_symbol(const Symbol& sym, double r, const ValidationReport& report);
/// Validates with budget 10^4, seed 0 first.
DosEnvelope envelope_from_symbol(const Symbol& sym, double r);

/// CSV with columns lambda, delta, value, mode_count.
void write_dos_csv(std::ostream& out, const DosSamples& samples);

}  // namespace wpidos
