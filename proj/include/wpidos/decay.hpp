#pragma once

// Certified variance-decay envelopes
//
//   Var(t) <= (Var0^(-1/(1+a)) + C3 int_0^t (|u0|_X^2 + C2 s^b)^(-1/(1+a)) ds)^-(1+a)
//
// built from a power-law DoS envelope C1 lambda^a, and the underlying ODE
// comparison bound for y' <= -A y^(1+a') (B + C s^b)^-c.

#include <iosfwd>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace wpidos {

enum class Regime {
  PolynomialFull,
  PolynomialSlow,
  Log,
  NoDecayCertified,
};

std::string regime_name(Regime regime);

struct RegimeClass {
  Regime regime = Regime::PolynomialFull;
  /// Decay exponent: t^exponent for polynomial regimes, (log t)^exponent for
  /// Log, 0 when no decay is certified.
  double exponent = 0.0;
};

/// 2 (a+2)^(-(a+2)/(a+1)) (a+1)^(1/(a+1)) C1^(-1/(a+1)).
double c3_constant(double alpha, double c1);

struct DecayForecast {
  double alpha = 0.0;
  double c1 = 1.0;
  double c3 = 0.5;
  double var0 = 0.0;
  double nx_sq = 1.0;
  double c2 = 0.0;
  double beta = 0.0;
  Regime regime = Regime::PolynomialFull;
};

/// Fills c3 and regime from the other parameters.
DecayForecast make_forecast(double alpha, double c1, double var0, double nx_sq, double c2 = 0.0,
                            double beta = 0.0);

/// Envelope at time t; closed form when C2 = 0, adaptive quadrature otherwise.
double variance_envelope(const DecayForecast& fc, double t);

/// (y0^-a + a A int_0^t (B + Cc s^b)^-c ds)^(-1/a).
double ode_comparison(double a, double A, double B, double Cc, double b, double c, double y0, double t);

/// Case table for the asymptotic rate; beta is compared to 1 + alpha with a
/// relative tolerance of 1e-12.
RegimeClass classify_regime(double alpha, double beta, double c2);

/// Log-log least-squares slope over the points with time in [lo, hi].
/// Requires at least 8 such points, all values positive.
double fit_decay_exponent(const Eigen::ArrayXd& times, const Eigen::ArrayXd& values,
                          std::pair<double, double> window);

/// CSV with columns t, envelope, regime.
void write_forecast_csv(std::ostream& out, const DecayForecast& fc, const Eigen::ArrayXd& times);

}  // namespace wpidos
