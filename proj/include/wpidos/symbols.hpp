#pragma once

// Constant-coefficient symbols P(xi) and a sampling check of the structural
// growth conditions used to bound their density of states:
//
//   (1) P(0) = 0
//   (2) C^-1 |xi|^(g1+1) <= P(xi) <= C |xi|^g2
//   (3) C^-1 |xi|^g1 <= |grad P(xi)|               (xi != 0)
//   (4) H^{d-1}({P = lambda}) <= C lambda^((d-1)/(g1+1))

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace wpidos {

using VectorRef = Eigen::Ref<const Eigen::VectorXd>;

struct Symbol {
  std::string name;
  int dim = 1;
  std::function<double(const VectorRef&)> eval;
  std::function<Eigen::VectorXd(const VectorRef&)> grad;
  double gamma1 = 1.0;
  double gamma2 = 2.0;
  /// Declared constant for conditions (2) and (3).
  double c_struct = 1.0;
  /// Degree m when P(s xi) = s^m P(xi).
  std::optional<double> homogeneity;
  /// Set when P(xi) = |xi|^m; enables exact sphere geometry for DoS constants.
  std::optional<double> radial_exponent;
  /// False when P is not differentiable at the origin (|xi|^m with m < 2).
  bool smooth_at_origin = true;
};

double eval_symbol(const Symbol& sym, const VectorRef& xi);
Eigen::VectorXd eval_grad(const Symbol& sym, const VectorRef& xi);

Symbol laplacian_symbol(int dim);
/// |xi|^(2p), p in (0, 1].
Symbol fractional_symbol(int dim, double p);
/// sum_i xi_i^4.
Symbol quartic_symbol(int dim);
/// sum_i xi_i^2 - xi_1 xi_2, dim >= 2.
Symbol aniso_symbol(int dim);
/// xi_1^2 declared with gamma1 = 1, gamma2 = 2; vanishes on a hyperplane.
Symbol degenerate_symbol(int dim);

/// Resolve "laplacian", "fractional:p=0.5", "quartic", "aniso", "degenerate".
/// Throws UsageError naming the symbol if it is unknown.
Symbol make_symbol(const std::string& name, int dim);
std::vector<std::string> catalog_names();

/// Surface area of the unit sphere S^{d-1} (|S^0| = 2).
double unit_sphere_area(int dim);

struct ConditionResult {
  std::string name;
  bool passed = true;
  double worst_ratio = 0.0;
  /// xi (or lambda in component 0) achieving the worst ratio.
  Eigen::VectorXd witness;
};

struct AreaSample {
  double lambda = 0.0;
  double area = 0.0;
  double std_error = 0.0;
};

struct ValidationReport {
  std::string symbol;
  std::vector<ConditionResult> conditions;
  std::vector<AreaSample> areas;
  double area_exponent_fit = 0.0;
  double area_exponent_limit = 0.0;
  /// 1.1 x the largest empirical ratio over all four conditions.
  double c_struct = 0.0;
  std::int64_t sample_budget = 0;
  std::uint64_t seed = 0;

  bool passed() const;
};

ValidationReport validate_assumption(const Symbol& sym, std::int64_t budget, std::uint64_t seed);

struct AreaEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::int64_t hits = 0;
};

/// Monte Carlo coarea estimate of H^{d-1}({P = lambda}):
/// (1/delta) * integral over {lambda < P <= lambda + delta} of |grad P|.
AreaEstimate level_set_area(const Symbol& sym, double lambda, double delta, std::int64_t n,
                            std::uint64_t seed);

}  // namespace wpidos
