#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "wpidos/certificates.hpp"
#include "wpidos/errors.hpp"
#include "wpidos/harness/experiments.hpp"
#include "wpidos/semigroup.hpp"

using namespace wpidos;

namespace {

double max_abs_diff(const SpectralField& a, const SpectralField& b) {
  return (a.phys() - b.phys()).abs().maxCoeff();
}

harness::DecayRun default_run(const std::string& name, int d) {
  const Symbol sym = make_symbol(name, d);
  const auto setup = harness::default_decay_setup(sym);
  return harness::decay_run(sym, make_gaussian(setup.grid, setup.sigma), setup.eta);
}

}  // namespace

TEST(Semigroup, EvolveIdentityAndConstants) {
  const GridSpec g{1, 128, 20.0};
  const Symbol lap = laplacian_symbol(1);
  const auto u = make_gaussian(g, 1.0);
  EXPECT_LE(max_abs_diff(evolve(lap, u, 0.0), u), 1e-12);
  const auto cst = SpectralField::from_physical(g, Eigen::ArrayXd::Constant(g.size(), 3.0));
  EXPECT_LE((evolve(lap, cst, 7.0).phys() - 3.0).abs().maxCoeff(), 1e-12);
  EXPECT_THROW(evolve(lap, u, -1.0), DomainError);
}

TEST(Semigroup, HeatGaussianNorm) {
  const auto u = make_gaussian(GridSpec{1, 512, 40.0}, 1.0);
  const auto ut = evolve(laplacian_symbol(1), u, 4.0);
  EXPECT_NEAR(norms(ut).l2sq, std::sqrt(oracle::pi) / 3.0, 1e-6);
}

TEST(Semigroup, HeatOracle) {
  EXPECT_NEAR(heat_gaussian_oracle(1.0, 1, 0.0).l2sq, std::sqrt(oracle::pi), 1e-15);
  EXPECT_NEAR(heat_gaussian_oracle(1.0, 1, 4.0).l2sq, std::sqrt(oracle::pi) / 3.0, 1e-15);
  EXPECT_NEAR(heat_gaussian_oracle(1.0, 2, 0.0).l2sq, oracle::pi, 1e-14);
  EXPECT_NEAR(heat_gaussian_oracle(0.5, 2, 3.0).l1, oracle::gaussian_l1(0.5, 2), 1e-14);
  EXPECT_THROW(heat_gaussian_oracle(0.0, 1, 1.0), DomainError);
}

TEST(Semigroup, HeatMatchesOracleInWindow) {
  for (int d = 1; d <= 2; ++d) {
    const Symbol lap = laplacian_symbol(d);
    const auto setup = harness::default_decay_setup(lap);
    const auto u = make_gaussian(setup.grid, setup.sigma);
    const auto window = valid_window(setup.grid, lap, setup.eta);
    // Periodic images become visible once the spread nears L/6.
    const double t_hi = std::min(window.t_max, std::pow(setup.grid.box_len / 12.0, 2.0));
    for (double t : {window.t_min, std::sqrt(window.t_min * t_hi), t_hi}) {
      const double expected = heat_gaussian_oracle(setup.sigma, d, t).l2sq;
      EXPECT_NEAR(norms(evolve(lap, u, t)).l2sq, expected, 1e-6 * expected) << "d=" << d << " t=" << t;
    }
  }
}

TEST(Semigroup, SemigroupLaw) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (const auto& [name, d] : std::vector<std::pair<std::string, int>>{
           {"laplacian", 1}, {"fractional:p=0.5", 1}, {"quartic", 2}, {"aniso", 2}}) {
    const Symbol sym = make_symbol(name, d);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto u = make_band_limited(GridSpec{d, 64, 16.0}, 6, seed);
      const double s = 2.0 * unit(rng), t = 2.0 * unit(rng);
      const auto two_step = evolve(sym, evolve(sym, u, s), t);
      const auto one_step = evolve(sym, u, s + t);
      const double scale = one_step.phys().abs().maxCoeff();
      EXPECT_LE(max_abs_diff(two_step, one_step), 1e-12 * std::max(scale, 1e-3)) << name;
    }
  }
}

TEST(Semigroup, MassIsInvariant) {
  const auto u = make_gaussian(GridSpec{2, 64, 16.0}, 1.0);
  for (const char* name : {"laplacian", "quartic", "aniso", "fractional:p=0.5"}) {
    const auto ut = evolve(make_symbol(name, 2), u, 3.0);
    EXPECT_EQ(ut.coeff()[0], u.coeff()[0]) << name;
  }
}

TEST(Semigroup, EnergyDissipatesAlongTraces) {
  for (const auto& [name, d] :
       std::vector<std::pair<std::string, int>>{{"laplacian", 1}, {"quartic", 1}, {"aniso", 2}}) {
    const Symbol sym = make_symbol(name, d);
    const auto u = make_band_limited(GridSpec::defaults(d), 5, 3);
    const auto trace = evolve_series(sym, u, log_time_grid(1e-3, 1e2, 8));
    for (std::size_t i = 1; i < trace.points.size(); ++i) {
      EXPECT_LE(trace.points[i].energy, trace.points[i - 1].energy * (1 + 1e-12)) << name;
      EXPECT_LE(trace.points[i].var, trace.points[i - 1].var * (1 + 1e-12)) << name;
    }
  }
}

TEST(Semigroup, VarianceDissipationIdentity) {
  for (const auto& [name, d] :
       std::vector<std::pair<std::string, int>>{{"laplacian", 1}, {"fractional:p=0.5", 1}, {"laplacian", 2}}) {
    const auto run = default_run(name, d);
    EXPECT_GT(run.trace.dissipation.points, 10u) << name;
    EXPECT_TRUE(run.trace.dissipation.holds) << name << " " << run.trace.dissipation.max_rel_error;
  }
}

TEST(Semigroup, TraceRecordsBothVariances) {
  const GridSpec g{1, 512, 40.0};
  const auto u = make_gaussian(g, 1.0);
  Eigen::ArrayXd times(2);
  times << 0.0, 1.0;
  const auto trace = evolve_series(laplacian_symbol(1), u, times);
  EXPECT_NEAR(trace.points[0].l2sq, std::sqrt(oracle::pi), 1e-10);
  EXPECT_NEAR(trace.points[0].var, variance(u), 1e-12);
  EXPECT_NEAR(trace.points[0].l1, oracle::gaussian_l1(1.0, 1), 1e-8);
  EXPECT_NEAR(trace.points[0].energy, dirichlet_form(laplacian_symbol(1), u), 1e-12);
  EXPECT_NEAR(trace.l1_initial, oracle::gaussian_l1(1.0, 1), 1e-8);
  EXPECT_TRUE(trace.outside_window);
}

TEST(Semigroup, EvolveSeriesRefusals) {
  const GridSpec g{1, 64, 20.0};
  const auto rough = make_gaussian(GridSpec{1, 64, 200.0}, 16.0);
  Eigen::ArrayXd times(2);
  times << 0.1, 1.0;
  const auto alternating =
      SpectralField::from_physical(g, Eigen::ArrayXd::NullaryExpr(64, [](Eigen::Index i) { return i % 2 ? 1.0 : -1.0; }));
  EXPECT_THROW(evolve_series(laplacian_symbol(1), alternating, times), RefusedError);
  EXPECT_THROW(evolve_series(laplacian_symbol(2), rough, times), UsageError);
  Eigen::ArrayXd backwards(2);
  backwards << 1.0, 0.5;
  EXPECT_THROW(evolve_series(laplacian_symbol(1), rough, backwards), DomainError);
  Eigen::ArrayXd negative(1);
  negative << -1.0;
  EXPECT_THROW(evolve_series(laplacian_symbol(1), rough, negative), DomainError);
}

TEST(Semigroup, ValidWindow) {
  const GridSpec g{1, 512, 40.0};
  const double step = 2 * oracle::pi / 40.0;
  const auto heat = valid_window(g, laplacian_symbol(1), 0.1);
  EXPECT_NEAR(heat.gap, step * step, 1e-15);
  EXPECT_NEAR(heat.t_max, 0.1 / (step * step), 1e-12);
  EXPECT_NEAR(heat.t_max, 4.05, 0.01);
  EXPECT_NEAR(heat.t_min, 1.0 / std::pow(step * 128, 2.0), 1e-15);
  EXPECT_FALSE(heat.too_narrow);
  EXPECT_TRUE(heat.contains(1.0));
  EXPECT_FALSE(heat.contains(5.0));

  const auto frac = valid_window(g, make_symbol("fractional:p=0.5", 1), 0.1);
  EXPECT_NEAR(frac.gap, step, 1e-15);
  EXPECT_NEAR(frac.t_max, 0.1 / step, 1e-12);

  const auto doubled = valid_window(GridSpec{1, 1024, 80.0}, laplacian_symbol(1), 0.1);
  EXPECT_NEAR(doubled.t_max, 4.0 * heat.t_max, 1e-9);

  EXPECT_TRUE(valid_window(GridSpec{1, 8, 40.0}, laplacian_symbol(1), 0.1).too_narrow);
  EXPECT_THROW(valid_window(g, laplacian_symbol(1), 0.0), DomainError);
  EXPECT_THROW(valid_window(g, laplacian_symbol(1), 1.5), DomainError);
}

TEST(Semigroup, DefaultEta) {
  EXPECT_EQ(default_eta(laplacian_symbol(1)), 1.0);
  EXPECT_EQ(default_eta(make_symbol("fractional:p=0.5", 1)), 0.5);
  EXPECT_EQ(default_eta(make_symbol("quartic", 1)), 0.1);
  EXPECT_EQ(default_eta(make_symbol("aniso", 2)), 1.0);
}

TEST(Semigroup, LogTimeGrid) {
  const auto t = log_time_grid(0.1, 10.0, 32);
  EXPECT_EQ(t.size(), 65);
  EXPECT_DOUBLE_EQ(t[0], 0.1);
  EXPECT_DOUBLE_EQ(t[64], 10.0);
  EXPECT_NEAR(t[32], 1.0, 1e-12);
  for (Eigen::Index i = 1; i < t.size(); ++i) EXPECT_NEAR(t[i] / t[i - 1], std::pow(10.0, 1.0 / 32), 1e-12);
  EXPECT_THROW(log_time_grid(0.0, 1.0), DomainError);
  EXPECT_THROW(log_time_grid(1.0, 1.0), DomainError);
  EXPECT_THROW(log_time_grid(0.1, 1.0, 0), DomainError);
}

TEST(Semigroup, L1Monotonicity) {
  const auto heat = default_run("laplacian", 1);
  EXPECT_TRUE(heat.l1.holds) << heat.l1.max_increase;
  const auto frac = default_run("fractional:p=0.5", 1);
  EXPECT_TRUE(frac.l1.holds) << frac.l1.max_increase;

  const GridSpec g{1, 512, 40.0};
  const auto sine = make_sine_mode(g, 3);
  const auto trace = evolve_series(laplacian_symbol(1), sine, log_time_grid(0.01, 10.0, 8));
  const auto check = l1_monotonicity_check(trace);
  EXPECT_TRUE(std::isfinite(check.max_increase));
  EXPECT_THROW(l1_monotonicity_check(Trace{}), InsufficientDataError);
}

TEST(Semigroup, HeatSlopeD1) {
  const auto run = default_run("laplacian", 1);
  EXPECT_NEAR(run.slope, -0.5, 0.05);
  EXPECT_DOUBLE_EQ(run.expected_slope, -0.5);
}

TEST(Semigroup, FractionalSlopeD1) {
  const auto run = default_run("fractional:p=0.5", 1);
  EXPECT_NEAR(run.slope, -1.0, 0.1);
}

TEST(Semigroup, QuarticSlopeD1) {
  const auto run = default_run("quartic", 1);
  EXPECT_NEAR(run.slope, -0.25, 0.05);
}

TEST(Semigroup, EnvelopeDominatesMeasuredVariance) {
  for (const char* name : {"laplacian", "fractional:p=0.5"}) {
    const auto run = default_run(name, 1);
    ASSERT_TRUE(run.forecast.has_value()) << name;
    EXPECT_LE(run.envelope_ratio, 1.05) << name;
    EXPECT_GT(run.envelope_ratio, 0.0) << name;
  }
}

TEST(Semigroup, TraceCsv) {
  const auto u = make_gaussian(GridSpec{1, 128, 20.0}, 1.0);
  Eigen::ArrayXd times(3);
  times << 0.0, 0.5, 1.0;
  const auto trace = evolve_series(laplacian_symbol(1), u, times);
  std::ostringstream out;
  write_trace_csv(out, trace);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "t,var,l1,l2sq,energy");
  int rows = 0;
  while (std::getline(in, line)) {
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 4);
    ++rows;
  }
  EXPECT_EQ(rows, 3);
  EXPECT_EQ(trace.column(&TracePoint::t)[1], 0.5);
}
