#include "wpidos/decay.hpp"

#include <cmath>
#include <ostream>
#include <sstream>
#include <vector>

#include "wpidos/errors.hpp"
#include "wpidos/fit.hpp"
#include "wpidos/quadrature.hpp"

namespace wpidos {

std::string regime_name(Regime regime) {
  switch (regime) {
    case Regime::PolynomialFull: return "polynomial-full";
    case Regime::PolynomialSlow: return "polynomial-slow";
    case Regime::Log: return "log";
    case Regime::NoDecayCertified: return "no-decay-certified";
  }
  return "unknown";
}

double c3_constant(double alpha, double c1) {
  if (!(alpha > -1.0)) throw DomainError("c3_constant: alpha must exceed -1");
  if (!(c1 > 0.0)) throw DomainError("c3_constant: C1 must be positive");
  const double a1 = alpha + 1.0;
  return 2.0 * std::pow(alpha + 2.0, -(alpha + 2.0) / a1) * std::pow(a1, 1.0 / a1) *
         std::pow(c1, -1.0 / a1);
}

RegimeClass classify_regime(double alpha, double beta, double c2) {
  const double full = 1.0 + alpha;
  if (c2 == 0.0 || beta <= 0.0) return {Regime::PolynomialFull, -full};
  if (std::abs(beta - full) <= 1e-12 * full) return {Regime::Log, -full};
  if (beta < full) return {Regime::PolynomialSlow, beta - full};
  return {Regime::NoDecayCertified, 0.0};
}

DecayForecast make_forecast(double alpha, double c1, double var0, double nx_sq, double c2, double beta) {
  if (var0 < 0.0) throw DomainError("make_forecast: Var0 must be >= 0");
  if (!(nx_sq > 0.0)) throw DomainError("make_forecast: |u0|_X^2 must be positive");
  if (c2 < 0.0) throw DomainError("make_forecast: C2 must be >= 0");
  DecayForecast fc;
  fc.alpha = alpha;
  fc.c1 = c1;
  fc.c3 = c3_constant(alpha, c1);
  fc.var0 = var0;
  fc.nx_sq = nx_sq;
  fc.c2 = c2;
  fc.beta = beta;
  fc.regime = classify_regime(alpha, beta, c2).regime;
  return fc;
}

double variance_envelope(const DecayForecast& fc, double t) {
  if (t < 0.0) throw DomainError("variance_envelope: t must be >= 0");
  if (fc.var0 == 0.0) return 0.0;
  const double a1 = 1.0 + fc.alpha;
  const double c = 1.0 / a1;
  double integral = 0.0;
  if (fc.c2 == 0.0) {
    integral = std::pow(fc.nx_sq, -c) * t;
  } else {
    const auto integrand = [&](double s) { return std::pow(fc.nx_sq + fc.c2 * std::pow(s, fc.beta), -c); };
    integral = integrate_from_origin(integrand, t, 1e-10).value;
  }
  return std::pow(std::pow(fc.var0, -c) + fc.c3 * integral, -a1);
}

double ode_comparison(double a, double A, double B, double Cc, double b, double c, double y0, double t) {
  if (!(a > 0.0) || !(A > 0.0) || !(B > 0.0))
    throw DomainError("ode_comparison: need a > 0, A > 0, B > 0");
  if (Cc < 0.0) throw DomainError("ode_comparison: C must be >= 0");
  if (!(c > 0.0 && c <= 1.0)) throw DomainError("ode_comparison: c must lie in (0, 1]");
  if (!(y0 > 0.0)) throw DomainError("ode_comparison: y0 must be positive");
  if (t < 0.0) throw DomainError("ode_comparison: t must be >= 0");
  double integral = 0.0;
  if (Cc == 0.0) {
    integral = std::pow(B, -c) * t;
  } else {
    const auto integrand = [&](double s) { return std::pow(B + Cc * std::pow(s, b), -c); };
    integral = integrate_from_origin(integrand, t, 1e-10).value;
  }
  return std::pow(std::pow(y0, -a) + a * A * integral, -1.0 / a);
}

double fit_decay_exponent(const Eigen::ArrayXd& times, const Eigen::ArrayXd& values,
                          std::pair<double, double> window) {
  if (times.size() != values.size()) throw UsageError("fit_decay_exponent: length mismatch");
  std::vector<double> xs, ys;
  for (Eigen::Index i = 0; i < times.size(); ++i) {
    if (times[i] < window.first || times[i] > window.second) continue;
    if (!(values[i] > 0.0)) throw DomainError("fit_decay_exponent: values must be positive");
    xs.push_back(times[i]);
    ys.push_back(values[i]);
  }
  if (xs.size() < 8) {
    std::ostringstream msg;
    msg << "fit_decay_exponent: " << xs.size() << " points in [" << window.first << ", " << window.second
        << "], need 8";
    throw InsufficientDataError(msg.str());
  }
  const Eigen::Map<const Eigen::ArrayXd> x(xs.data(), static_cast<Eigen::Index>(xs.size()));
  const Eigen::Map<const Eigen::ArrayXd> y(ys.data(), static_cast<Eigen::Index>(ys.size()));
  return fit_loglog(x, y).slope;
}

void write_forecast_csv(std::ostream& out, const DecayForecast& fc, const Eigen::ArrayXd& times) {
  out << "t,envelope,regime\n";
  const auto precision = out.precision(17);
  const std::string regime = regime_name(fc.regime);
  for (Eigen::Index i = 0; i < times.size(); ++i)
    out << times[i] << ',' << variance_envelope(fc, times[i]) << ',' << regime << '\n';
  out.precision(precision);
}

}  // namespace wpidos
