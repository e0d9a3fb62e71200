#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "oracles.hpp"
#include "wpidos/errors.hpp"
#include "wpidos/symbols.hpp"

using namespace wpidos;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

const ConditionResult& condition(const ValidationReport& r, const std::string& name) {
  for (const auto& c : r.conditions)
    if (c.name == name) return c;
  throw std::runtime_error("missing condition " + name);
}

std::vector<Symbol> catalog(int d) {
  std::vector<Symbol> out;
  for (const auto& name : catalog_names()) {
    if (name == "aniso" && d < 2) continue;
    out.push_back(make_symbol(name, d));
  }
  return out;
}

}  // namespace

TEST(Symbols, LaplacianValues) {
  const Symbol lap = laplacian_symbol(2);
  EXPECT_DOUBLE_EQ(eval_symbol(lap, vec({3, 4})), 25.0);
  EXPECT_TRUE(eval_grad(lap, vec({3, 4})).isApprox(vec({6, 8})));
  EXPECT_EQ(eval_symbol(lap, vec({0, 0})), 0.0);
}

TEST(Symbols, FractionalValues) {
  const Symbol frac = fractional_symbol(1, 0.5);
  EXPECT_DOUBLE_EQ(eval_symbol(frac, vec({-2})), 2.0);
  EXPECT_DOUBLE_EQ(eval_grad(frac, vec({-2}))[0], -1.0);
  EXPECT_THROW(eval_grad(frac, vec({0})), SingularPointError);
}

TEST(Symbols, QuarticAndAnisoValues) {
  EXPECT_DOUBLE_EQ(eval_symbol(quartic_symbol(2), vec({1, 2})), 17.0);
  EXPECT_TRUE(eval_grad(quartic_symbol(2), vec({1, 2})).isApprox(vec({4, 32})));
  EXPECT_DOUBLE_EQ(eval_symbol(aniso_symbol(2), vec({1, 1})), 1.0);
  EXPECT_TRUE(eval_grad(aniso_symbol(2), vec({1, 1})).isApprox(vec({1, 1})));
}

TEST(Symbols, SmoothSymbolsHaveZeroGradientAtOrigin) {
  for (const Symbol& s : {laplacian_symbol(3), quartic_symbol(2), aniso_symbol(2)})
    EXPECT_TRUE(eval_grad(s, Eigen::VectorXd::Zero(s.dim)).isZero(0.0)) << s.name;
}

TEST(Symbols, DimensionMismatchIsUsageError) {
  EXPECT_THROW(eval_symbol(laplacian_symbol(2), vec({1, 2, 3})), UsageError);
  EXPECT_THROW(eval_grad(laplacian_symbol(3), vec({1})), UsageError);
}

TEST(Symbols, UnknownNameIsReported) {
  try {
    make_symbol("nosuch", 2);
    FAIL() << "expected UsageError";
  } catch (const UsageError& e) {
    EXPECT_NE(std::string(e.what()).find("nosuch"), std::string::npos);
  }
  EXPECT_THROW(make_symbol("aniso", 1), UsageError);
}

TEST(Symbols, NamesRoundTrip) {
  for (int d = 2; d <= 3; ++d)
    for (const auto& name : catalog_names()) EXPECT_EQ(make_symbol(name, d).name, name);
  EXPECT_EQ(make_symbol("degenerate", 2).name, "degenerate");
}

TEST(Symbols, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal;
  for (int d = 1; d <= 3; ++d) {
    for (const Symbol& s : catalog(d)) {
      for (int trial = 0; trial < 50; ++trial) {
        Eigen::VectorXd xi(d);
        for (int i = 0; i < d; ++i) xi[i] = normal(rng) * 3.0;
        const double h = 1e-5 * std::max(1.0, xi.norm());
        const Eigen::VectorXd g = eval_grad(s, xi);
        for (int i = 0; i < d; ++i) {
          Eigen::VectorXd up = xi, dn = xi;
          up[i] += h;
          dn[i] -= h;
          const double fd = (eval_symbol(s, up) - eval_symbol(s, dn)) / (2 * h);
          EXPECT_NEAR(g[i], fd, 1e-6 * std::max(1.0, g.norm())) << s.name << " d=" << d;
        }
      }
    }
  }
}

TEST(Symbols, HomogeneityHolds) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> scale(0.01, 100.0);
  for (int d = 1; d <= 3; ++d) {
    for (const Symbol& s : catalog(d)) {
      ASSERT_TRUE(s.homogeneity.has_value()) << s.name;
      for (int trial = 0; trial < 100; ++trial) {
        Eigen::VectorXd xi(d);
        for (int i = 0; i < d; ++i) xi[i] = normal(rng);
        const double c = scale(rng);
        const double lhs = eval_symbol(s, Eigen::VectorXd(c * xi));
        const double rhs = std::pow(c, *s.homogeneity) * eval_symbol(s, xi);
        EXPECT_NEAR(lhs, rhs, 1e-12 * std::abs(rhs)) << s.name;
      }
    }
  }
}

TEST(Symbols, CatalogPassesValidation) {
  for (int d = 1; d <= 3; ++d) {
    for (const Symbol& s : catalog(d)) {
      const ValidationReport r = validate_assumption(s, 10000, 0);
      EXPECT_TRUE(r.passed()) << s.name << " d=" << d;
      EXPECT_EQ(r.conditions.size(), 5u);
      EXPECT_GT(r.c_struct, 0.0);
    }
  }
}

TEST(Symbols, LaplacianValidationExponents) {
  const ValidationReport r = validate_assumption(laplacian_symbol(2), 10000, 0);
  EXPECT_TRUE(r.passed());
  EXPECT_DOUBLE_EQ(r.area_exponent_limit, 0.5);
  EXPECT_NEAR(r.area_exponent_fit, 0.5, 0.05);
}

TEST(Symbols, AnisoConstantsMatchEigenvalues) {
  Eigen::Matrix2d a;
  a << 1.0, -0.5, -0.5, 1.0;
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(a);
  const double lo = eig.eigenvalues()[0];
  const double hi = eig.eigenvalues()[1];
  // lo |xi|^2 <= P <= hi |xi|^2 and |grad P| = 2 |A xi| >= 2 lo |xi|.
  const double lower_bound = 1.0 / lo;
  const double upper_bound = hi;
  const double gradient_bound = 1.0 / (2.0 * lo);

  const ValidationReport r = validate_assumption(aniso_symbol(2), 20000, 3);
  EXPECT_TRUE(r.passed());
  const auto& lower = condition(r, "lower growth");
  const auto& upper = condition(r, "upper growth");
  const auto& grad = condition(r, "gradient growth");
  EXPECT_LE(lower.worst_ratio, lower_bound * (1 + 1e-12));
  EXPECT_GE(lower.worst_ratio, 0.99 * lower_bound);
  EXPECT_LE(upper.worst_ratio, upper_bound * (1 + 1e-12));
  EXPECT_GE(upper.worst_ratio, 0.99 * upper_bound);
  EXPECT_LE(grad.worst_ratio, gradient_bound * (1 + 1e-12));
  EXPECT_GE(grad.worst_ratio, 0.99 * gradient_bound);
  EXPECT_LE(aniso_symbol(2).c_struct, 2.0);
  EXPECT_GE(aniso_symbol(2).c_struct, lower_bound * (1 - 1e-12));
}

TEST(Symbols, DegenerateSymbolFailsLowerGrowth) {
  const ValidationReport r = validate_assumption(degenerate_symbol(2), 10000, 0);
  EXPECT_FALSE(r.passed());
  const auto& lower = condition(r, "lower growth");
  EXPECT_FALSE(lower.passed);
  // The witness sits near the hyperplane xi_1 = 0.
  EXPECT_LT(std::abs(lower.witness[0]) / lower.witness.norm(), 0.1);
}

TEST(Symbols, ValidationIsDeterministic) {
  const ValidationReport a = validate_assumption(quartic_symbol(2), 5000, 42);
  const ValidationReport b = validate_assumption(quartic_symbol(2), 5000, 42);
  ASSERT_EQ(a.conditions.size(), b.conditions.size());
  for (std::size_t i = 0; i < a.conditions.size(); ++i) {
    EXPECT_EQ(a.conditions[i].worst_ratio, b.conditions[i].worst_ratio);
    EXPECT_EQ(a.conditions[i].witness, b.conditions[i].witness);
  }
  EXPECT_EQ(a.c_struct, b.c_struct);
  EXPECT_THROW(validate_assumption(quartic_symbol(2), 10, 0), DomainError);
}

TEST(Symbols, LevelSetAreaOfSpheres) {
  // |{|xi|^2 = lambda}| = |S^{d-1}| lambda^{(d-1)/2}.
  const auto d2 = level_set_area(laplacian_symbol(2), 4.0, 0.04, 1'000'000, 1);
  EXPECT_NEAR(d2.value, 4.0 * oracle::pi, 3.0 * d2.std_error + 0.01 * 4.0 * oracle::pi);
  const auto d3 = level_set_area(laplacian_symbol(3), 1.0, 0.01, 2'000'000, 2);
  EXPECT_NEAR(d3.value, 4.0 * oracle::pi, 3.0 * d3.std_error + 0.01 * 4.0 * oracle::pi);
  const auto d1 = level_set_area(laplacian_symbol(1), 1.0, 0.01, 100'000, 3);
  EXPECT_NEAR(d1.value, 2.0, 3.0 * d1.std_error + 0.02);
}

TEST(Symbols, LevelSetAreaQuarticMatchesDenseGrid) {
  const double lambda = 1.0;
  const double delta = 0.01;
  // Midpoint shell sum (1/delta) sum_{lambda < P <= lambda + delta} |grad P| h^2.
  const int n = 4096;
  const double radius = std::pow(lambda + delta, 0.25) * 1.001;
  const double h = 2.0 * radius / n;
  double dense = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = -radius + (i + 0.5) * h;
    for (int j = 0; j < n; ++j) {
      const double y = -radius + (j + 0.5) * h;
      const double p = x * x * x * x + y * y * y * y;
      if (p > lambda && p <= lambda + delta)
        dense += 4.0 * std::sqrt(x * x * x * x * x * x + y * y * y * y * y * y);
    }
  }
  dense *= h * h / delta;

  const auto mc = level_set_area(quartic_symbol(2), lambda, delta, 2'000'000, 5);
  EXPECT_NEAR(mc.value, dense, 3.0 * mc.std_error + 0.005 * dense);
}

TEST(Symbols, LevelSetAreaErrors) {
  EXPECT_THROW(level_set_area(laplacian_symbol(2), 0.0, 0.1, 100, 0), DomainError);
  EXPECT_THROW(level_set_area(laplacian_symbol(2), 1.0, 0.0, 100, 0), DomainError);
  EXPECT_THROW(level_set_area(laplacian_symbol(2), 1.0, 0.1, 0, 0), InsufficientDataError);
}

TEST(Symbols, UnitSphereArea) {
  EXPECT_DOUBLE_EQ(unit_sphere_area(1), 2.0);
  EXPECT_NEAR(unit_sphere_area(2), 2.0 * oracle::pi, 1e-14);
  EXPECT_NEAR(unit_sphere_area(3), 4.0 * oracle::pi, 1e-13);
}
