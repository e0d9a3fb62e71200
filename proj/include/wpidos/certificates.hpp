#pragma once

// Weak Poincare certificates Var(u) <= C E(u)^(1/p) Phi(u)^(1/q) built from
// DoS envelopes, and their evaluation on lattice fields.

#include <iosfwd>
#include <optional>
#include <string>

#include "wpidos/dos.hpp"
#include "wpidos/fields.hpp"
#include "wpidos/symbols.hpp"

namespace wpidos {

/// Psi(rho) = int_0^rho psi. Closed form for power laws, exact trapezoid on
/// the piecewise-linear table otherwise. rho must lie in (0, r].
double psi_cumulative(const DosEnvelope& env, double rho);

/// sup{x in (0, r) : Psi(x) <= y}, with sup of the empty set = 0.
double psi_inverse_generalized(const DosEnvelope& env, double y);

struct WpiBound {
  double value = 0.0;
  /// Truncation radius r0 (implicit) or maximizer g^-1(a/b) (explicit).
  double rho = 0.0;
  /// False when rho reached the envelope radius r.
  bool within_validity = true;
};

/// (1 - K) Psi^-1(K var / (nx ny)) var, a lower bound on E(u).
WpiBound implicit_wpi_bound(const DosEnvelope& env, double k, double var, double nx, double ny);

/// g(rho) = Psi(rho) + rho psi(rho) on (0, R), with tabulated envelopes
/// continued past r by their last value (R = infinity in both forms).
class GFunction {
 public:
  explicit GFunction(DosEnvelope env);

  const DosEnvelope& envelope() const { return env_; }
  /// Psi on (0, infinity), including the continuation past r.
  double cumulative(double rho) const;
  double operator()(double rho) const;
  /// Inverse of g for y > 0.
  double inverse(double y) const;

  struct HypothesisCheck {
    bool ok = true;
    std::string diagnostic;
  };
  /// g nondecreasing on a log mesh over [lo, hi], g(lo) near 0 relative to g(hi),
  /// and g growing without bound past hi.
  HypothesisCheck check_hypotheses(double lo, double hi, int points = 10000) const;

 private:
  DosEnvelope env_;
};

/// Inverse of g; throws DomainError unless y > 0.
double g_inverse(const GFunction& gf, double y);

/// g^-1(a)^2 psi(g^-1(a)) nx ny with a = var / (nx ny): the maximum over rho
/// of rho (var - Psi(rho) nx ny). Refuses (RefusedError) when the g hypotheses
/// fail on the mesh [mesh_lo, 10 r]; mesh_lo defaults to 1e-6 r.
WpiBound explicit_wpi_bound(const DosEnvelope& env, double var, double nx, double ny,
                            std::optional<double> mesh_lo = std::nullopt);

/// explicit_wpi_bound, falling back to the best implicit bound on K in
/// {0.01, ..., 0.99} when the explicit hypotheses fail.
WpiBound best_wpi_bound(const DosEnvelope& env, double var, double nx, double ny);

enum class NashConvention {
  UnitMeasure,  ///< constant (|S^{d-1}|/2)^(2/(2+d)) (2+d)/d
  TwoPi,        ///< C1 = (2 pi)^-d |S^{d-1}|/2 through certificate_power_law
};

struct WpiCertificate {
  double p = 2.0;
  double q = 2.0;
  double c = 1.0;
  std::string phi = "L1^2";
  std::string convention = "2pi";
  std::string source = "none";
};

/// p = (a+2)/(a+1), q = a+2, C = C1^(1/(2+a)) (2+a)/(1+a).
WpiCertificate certificate_power_law(double c1, double alpha);
WpiCertificate nash_certificate(int d, NashConvention convention);

/// Key-value text record: one "key = value" per line.
void write_certificate(std::ostream& out, const WpiCertificate& cert);
WpiCertificate read_certificate(std::istream& in);

/// L^-d sum_k P(xi_k) |uhat_k|^2.
double dirichlet_form(const Symbol& sym, const SpectralField& u);
/// L^-d sum_{k != 0} |uhat_k|^2: distance to the constants, the kernel on the torus.
double variance(const SpectralField& u);

enum class VarianceConvention {
  Torus,       ///< mean-subtracted variance
  WholeSpace,  ///< ||u||^2, the variance on R^d where the L2 kernel is trivial
};

struct CertificateCheck {
  double ratio = 0.0;
  bool holds = true;
};

/// ratio = Var / (C E^(1/p) Phi^(1/q)) with Phi = ||u||_1^2; holds if ratio <= 1 + 1e-6.
CertificateCheck check_certificate(const Symbol& sym, const SpectralField& u, const WpiCertificate& cert,
                                   VarianceConvention convention = VarianceConvention::Torus);

}  // namespace wpidos
