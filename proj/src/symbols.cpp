#include "wpidos/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "wpidos/errors.hpp"
#include "wpidos/fit.hpp"

namespace wpidos {

namespace {

void check_dim(const Symbol& sym, const VectorRef& xi) {
  if (xi.size() != sym.dim) {
    std::ostringstream msg;
    msg << "symbol '" << sym.name << "' expects dimension " << sym.dim << ", got " << xi.size();
    throw UsageError(msg.str());
  }
}

std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

// Log-uniform radius in [1e-3, 1e3], uniform direction.
Eigen::VectorXd sample_frequency(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> log_radius(std::log(1e-3), std::log(1e3));
  Eigen::VectorXd dir(dim);
  double norm = 0.0;
  do {
    for (int i = 0; i < dim; ++i) dir[i] = normal(rng);
    norm = dir.norm();
  } while (norm < 1e-12);
  return dir * (std::exp(log_radius(rng)) / norm);
}

}  // namespace

double eval_symbol(const Symbol& sym, const VectorRef& xi) {
  check_dim(sym, xi);
  if (xi.isZero(0.0)) return 0.0;
  return sym.eval(xi);
}

Eigen::VectorXd eval_grad(const Symbol& sym, const VectorRef& xi) {
  check_dim(sym, xi);
  if (xi.isZero(0.0)) {
    if (!sym.smooth_at_origin)
      throw SingularPointError("symbol '" + sym.name + "' is not differentiable at xi = 0");
    return Eigen::VectorXd::Zero(sym.dim);
  }
  return sym.grad(xi);
}

double unit_sphere_area(int dim) {
  const double half = 0.5 * dim;
  return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

Symbol laplacian_symbol(int dim) {
  Symbol s;
  s.name = "laplacian";
  s.dim = dim;
  s.eval = [](const VectorRef& xi) { return xi.squaredNorm(); };
  s.grad = [](const VectorRef& xi) -> Eigen::VectorXd { return 2.0 * xi; };
  s.gamma1 = 1.0;
  s.gamma2 = 2.0;
  s.c_struct = 1.0;
  s.homogeneity = 2.0;
  s.radial_exponent = 2.0;
  return s;
}

Symbol fractional_symbol(int dim, double p) {
  if (!(p > 0.0 && p <= 1.0)) throw DomainError("fractional symbol needs p in (0, 1]");
  Symbol s;
  std::ostringstream name;
  name << "fractional:p=" << p;
  s.name = name.str();
  s.dim = dim;
  const double m = 2.0 * p;
  s.eval = [m](const VectorRef& xi) { return std::pow(xi.norm(), m); };
  s.grad = [m](const VectorRef& xi) -> Eigen::VectorXd {
    const double r = xi.norm();
    return (m * std::pow(r, m - 2.0)) * xi;
  };
  s.gamma1 = m - 1.0;
  s.gamma2 = m;
  // |grad P| = 2p |xi|^(2p-1)
  s.c_struct = std::max(1.0, 1.0 / m);
  s.homogeneity = m;
  s.radial_exponent = m;
  s.smooth_at_origin = p >= 1.0;
  return s;
}

Symbol quartic_symbol(int dim) {
  Symbol s;
  s.name = "quartic";
  s.dim = dim;
  s.eval = [](const VectorRef& xi) { return xi.array().pow(4).sum(); };
  s.grad = [](const VectorRef& xi) -> Eigen::VectorXd { return 4.0 * xi.array().cube().matrix(); };
  s.gamma1 = 3.0;
  s.gamma2 = 4.0;
  // |xi|^4 <= d * sum xi^4 and |xi|^3 <= (d/4) |grad P|
  s.c_struct = static_cast<double>(dim);
  s.homogeneity = 4.0;
  return s;
}

Symbol aniso_symbol(int dim) {
  if (dim < 2) throw UsageError("symbol 'aniso' needs dimension >= 2");
  Symbol s;
  s.name = "aniso";
  s.dim = dim;
  s.eval = [](const VectorRef& xi) { return xi.squaredNorm() - xi[0] * xi[1]; };
  s.grad = [](const VectorRef& xi) -> Eigen::VectorXd {
    Eigen::VectorXd g = 2.0 * xi;
    g[0] -= xi[1];
    g[1] -= xi[0];
    return g;
  };
  s.gamma1 = 1.0;
  s.gamma2 = 2.0;
  // quadratic form eigenvalues lie in [1/2, 3/2]
  s.c_struct = 2.0;
  s.homogeneity = 2.0;
  return s;
}

Symbol degenerate_symbol(int dim) {
  Symbol s;
  s.name = "degenerate";
  s.dim = dim;
  s.eval = [](const VectorRef& xi) { return xi[0] * xi[0]; };
  s.grad = [dim](const VectorRef& xi) -> Eigen::VectorXd {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(dim);
    g[0] = 2.0 * xi[0];
    return g;
  };
  s.gamma1 = 1.0;
  s.gamma2 = 2.0;
  s.c_struct = 1.0;
  s.homogeneity = 2.0;
  return s;
}

Symbol make_symbol(const std::string& name, int dim) {
  if (dim < 1) throw UsageError("dimension must be >= 1");
  if (name == "laplacian") return laplacian_symbol(dim);
  if (name == "quartic") return quartic_symbol(dim);
  if (name == "aniso") return aniso_symbol(dim);
  if (name == "degenerate") return degenerate_symbol(dim);
  const std::string prefix = "fractional:p=";
  if (name.rfind(prefix, 0) == 0) {
    const std::string value = name.substr(prefix.size());
    std::size_t used = 0;
    double p = 0.0;
    try {
      p = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != value.size())
      throw UsageError("unknown symbol '" + name + "': cannot parse p");
    return fractional_symbol(dim, p);
  }
  throw UsageError("unknown symbol '" + name + "'");
}

std::vector<std::string> catalog_names() {
  return {"laplacian", "fractional:p=0.5", "quartic", "aniso"};
}

bool ValidationReport::passed() const {
  return std::all_of(conditions.begin(), conditions.end(),
                     [](const ConditionResult& c) { return c.passed; });
}

AreaEstimate level_set_area(const Symbol& sym, double lambda, double delta, std::int64_t n,
                            std::uint64_t seed) {
  if (!(lambda > 0.0)) throw DomainError("level_set_area: lambda must be positive");
  if (!(delta > 0.0)) throw DomainError("level_set_area: delta must be positive");
  if (n <= 0) throw InsufficientDataError("level_set_area: no samples requested");

  // C^-1 |xi|^(g1+1) <= P <= lambda + delta bounds the shell.
  const double radius = std::pow(sym.c_struct * (lambda + delta), 1.0 / (sym.gamma1 + 1.0));
  const double box_volume = std::pow(2.0 * radius, sym.dim);

  constexpr std::int64_t kBatch = 1 << 16;
  double sum = 0.0;
  double sum_sq = 0.0;
  std::int64_t hits = 0;
  Eigen::VectorXd xi(sym.dim);
  std::uniform_real_distribution<double> coord(-radius, radius);
  for (std::int64_t start = 0, batch = 0; start < n; start += kBatch, ++batch) {
    auto rng = stream_rng(seed, static_cast<std::uint64_t>(batch));
    const std::int64_t count = std::min(kBatch, n - start);
    for (std::int64_t i = 0; i < count; ++i) {
      for (int k = 0; k < sym.dim; ++k) xi[k] = coord(rng);
      const double p = eval_symbol(sym, xi);
      if (p > lambda && p <= lambda + delta) {
        const double g = eval_grad(sym, xi).norm();
        sum += g;
        sum_sq += g * g;
        ++hits;
      }
    }
  }
  if (hits == 0) throw InsufficientDataError("level_set_area: no samples landed in the shell");

  const double scale = box_volume / delta;
  const double nn = static_cast<double>(n);
  const double mean = sum / nn;
  const double var = std::max(0.0, sum_sq / nn - mean * mean);
  AreaEstimate est;
  est.value = scale * mean;
  est.std_error = scale * std::sqrt(var / nn);
  est.hits = hits;
  return est;
}

ValidationReport validate_assumption(const Symbol& sym, std::int64_t budget, std::uint64_t seed) {
  if (budget < 1000) throw DomainError("validate_assumption: budget must be >= 1000");

  ValidationReport report;
  report.symbol = sym.name;
  report.sample_budget = budget;
  report.seed = seed;
  const double tol = 1.0 + 1e-12;

  ConditionResult origin{"P(0)=0", true, 0.0, Eigen::VectorXd::Zero(sym.dim)};
  origin.worst_ratio = std::abs(sym.eval(Eigen::VectorXd::Zero(sym.dim)));
  origin.passed = origin.worst_ratio == 0.0;

  ConditionResult lower{"lower growth", true, 0.0, Eigen::VectorXd::Zero(sym.dim)};
  ConditionResult upper{"upper growth", true, 0.0, Eigen::VectorXd::Zero(sym.dim)};
  ConditionResult gradient{"gradient growth", true, 0.0, Eigen::VectorXd::Zero(sym.dim)};

  auto rng = stream_rng(seed, 0x5eedULL);
  auto record = [](ConditionResult& c, double ratio, const Eigen::VectorXd& xi) {
    if (!(ratio <= c.worst_ratio)) {  // also catches NaN / inf
      c.worst_ratio = std::isnan(ratio) ? std::numeric_limits<double>::infinity() : ratio;
      c.witness = xi;
    }
  };
  for (std::int64_t i = 0; i < budget; ++i) {
    const Eigen::VectorXd xi = sample_frequency(sym.dim, rng);
    const double r = xi.norm();
    if (r < 1e-9) continue;
    const double p = sym.eval(xi);
    const double g = sym.grad(xi).norm();
    record(lower, std::pow(r, sym.gamma1 + 1.0) / p, xi);
    record(upper, p / std::pow(r, sym.gamma2), xi);
    record(gradient, std::pow(r, sym.gamma1) / g, xi);
  }
  for (auto* c : {&lower, &upper, &gradient}) c->passed = c->worst_ratio <= sym.c_struct * tol;

  // Level-set areas on a log-spaced lambda grid, exponent fitted in log-log.
  ConditionResult area{"level-set area", true, 0.0, Eigen::VectorXd::Zero(1)};
  report.area_exponent_limit = (sym.dim - 1) / (sym.gamma1 + 1.0);
  constexpr int kLambdas = 9;
  Eigen::ArrayXd lambdas(kLambdas), values(kLambdas);
  int usable = 0;
  for (int i = 0; i < kLambdas; ++i) {
    const double lambda = std::pow(10.0, -2.0 + 4.0 * i / (kLambdas - 1));
    AreaSample sample{lambda, 0.0, 0.0};
    try {
      const auto est = level_set_area(sym, lambda, lambda / 100.0, 16 * budget,
                                      seed + 0x9e3779b97f4a7c15ULL * (i + 1));
      sample.area = est.value;
      sample.std_error = est.std_error;
    } catch (const InsufficientDataError&) {
      sample.area = 0.0;
    }
    report.areas.push_back(sample);
    if (sample.area > 0.0) {
      lambdas[usable] = lambda;
      values[usable] = sample.area;
      ++usable;
      const double ratio = sample.area / std::pow(lambda, report.area_exponent_limit);
      if (ratio > area.worst_ratio) {
        area.worst_ratio = ratio;
        area.witness = Eigen::VectorXd::Constant(1, lambda);
      }
    }
  }
  if (usable >= 3) {
    report.area_exponent_fit = fit_loglog(lambdas.head(usable), values.head(usable)).slope;
    area.passed = report.area_exponent_fit <= report.area_exponent_limit + 0.05;
    if (!area.passed) area.witness = Eigen::VectorXd::Constant(1, lambdas[usable - 1]);
  } else {
    report.area_exponent_fit = std::numeric_limits<double>::quiet_NaN();
    area.passed = false;
  }

  double worst = 0.0;
  for (const auto* c : {&lower, &upper, &gradient, &area}) worst = std::max(worst, c->worst_ratio);
  report.c_struct = 1.1 * worst;
  report.conditions = {origin, lower, upper, gradient, area};
  return report;
}

}  // namespace wpidos
