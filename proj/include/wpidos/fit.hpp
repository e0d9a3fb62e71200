#pragma once

// Least-squares line fits over Eigen expressions. Used for log-log exponent
// recovery in the DoS, decay, and validation code.

#include <cmath>
#include <cstddef>

#include <Eigen/Dense>

#include "wpidos/errors.hpp"

namespace wpidos {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::size_t points = 0;
};

template <typename DerivedX, typename DerivedY>
LineFit fit_line(const Eigen::DenseBase<DerivedX>& x, const Eigen::DenseBase<DerivedY>& y) {
  using Scalar = typename DerivedX::Scalar;
  const Eigen::Index n = x.size();
  if (n != y.size()) throw UsageError("fit_line: x and y differ in length");
  if (n < 2) throw InsufficientDataError("fit_line: need at least two points");

  const Eigen::Array<Scalar, Eigen::Dynamic, 1> xs = x.derived().template cast<Scalar>().array();
  const Eigen::Array<Scalar, Eigen::Dynamic, 1> ys = y.derived().template cast<Scalar>().array();
  const Scalar mx = xs.mean();
  const Scalar my = ys.mean();
  const Scalar sxx = (xs - mx).square().sum();
  const Scalar sxy = ((xs - mx) * (ys - my)).sum();
  const Scalar syy = (ys - my).square().sum();
  if (sxx <= Scalar(0)) throw InsufficientDataError("fit_line: abscissae are all equal");

  LineFit fit;
  fit.slope = static_cast<double>(sxy / sxx);
  fit.intercept = static_cast<double>(my - sxy / sxx * mx);
  const Scalar ss_res = (ys - (Scalar(fit.intercept) + Scalar(fit.slope) * xs)).square().sum();
  fit.r2 = syy > Scalar(0) ? static_cast<double>(Scalar(1) - ss_res / syy) : 1.0;
  fit.points = static_cast<std::size_t>(n);
  return fit;
}

/// Fit log(y) = intercept + slope * log(x). All entries must be positive.
template <typename DerivedX, typename DerivedY>
LineFit fit_loglog(const Eigen::DenseBase<DerivedX>& x, const Eigen::DenseBase<DerivedY>& y) {
  if ((x.derived().array() <= 0).any() || (y.derived().array() <= 0).any())
    throw DomainError("fit_loglog: non-positive entry");
  return fit_line(x.derived().array().log(), y.derived().array().log());
}

}  // namespace wpidos
