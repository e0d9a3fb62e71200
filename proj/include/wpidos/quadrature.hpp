#pragma once

// Adaptive Gauss-Kronrod (7/15) quadrature with global error control, plus a
// wrapper that pre-splits [0, t] geometrically for integrands with a power
// singularity or kink at the origin.

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

#include "wpidos/errors.hpp"

namespace wpidos {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
};

namespace detail {

inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights on the odd Kronrod nodes (indices 1, 3, 5, 7).
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <typename F>
Segment gk15(F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kronrod = kKronrodWeights[7] * fc;
  double gauss = kGaussWeights[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = h * kKronrodNodes[i];
    const double pair = f(c - dx) + f(c + dx);
    kronrod += kKronrodWeights[i] * pair;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * pair;
  }
  return {a, b, kronrod * h, std::abs((kronrod - gauss) * h)};
}

}  // namespace detail

/// Integral of f over [a, b], bisecting the worst segment until the summed
/// error estimate is below max(abs_tol, rel_tol * |value|).
template <typename F>
QuadratureResult integrate(F&& f, double a, double b, double rel_tol = 1e-10, double abs_tol = 0.0,
                           int max_segments = 4000) {
  QuadratureResult out;
  if (a == b) return out;
  std::priority_queue<detail::Segment> heap;
  const detail::Segment first = detail::gk15(f, a, b);
  heap.push(first);
  double value = first.value, error = first.error;
  int segments = 1;
  while (error > std::max(abs_tol, rel_tol * std::abs(value)) && segments < max_segments) {
    const detail::Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      heap.push(worst);
      break;
    }
    const detail::Segment left = detail::gk15(f, worst.a, mid);
    const detail::Segment right = detail::gk15(f, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++segments;
  }
  // Re-sum to shed the drift of the running update.
  value = 0.0;
  error = 0.0;
  while (!heap.empty()) {
    value += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  out.value = value;
  out.error = error;
  out.evaluations = 15 * (2 * segments - 1);
  return out;
}

/// Integral of f over [0, t], split at t 2^-j (j = 1..60) so that behavior at
/// the origin is resolved on its own scale.
template <typename F>
QuadratureResult integrate_from_origin(F&& f, double t, double rel_tol = 1e-10) {
  if (t < 0.0) throw DomainError("integrate_from_origin: t must be >= 0");
  QuadratureResult total;
  if (t == 0.0) return total;
  std::vector<double> edges{0.0};
  for (int j = 60; j >= 1; --j) edges.push_back(std::ldexp(t, -j));
  edges.push_back(t);
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const QuadratureResult piece = integrate(f, edges[i], edges[i + 1], rel_tol);
    total.value += piece.value;
    total.error += piece.error;
    total.evaluations += piece.evaluations;
  }
  return total;
}

}  // namespace wpidos
