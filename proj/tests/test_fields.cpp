#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "wpidos/errors.hpp"
#include "wpidos/fields.hpp"

using namespace wpidos;

namespace {

SpectralField random_field(const GridSpec& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::ArrayXd phys(g.size());
  for (auto& x : phys) x = normal(rng);
  return SpectralField::from_physical(g, phys);
}

}  // namespace

TEST(Fields, GridValidation) {
  EXPECT_NO_THROW((GridSpec{1, 8, 1.0}).validate());
  EXPECT_THROW((GridSpec{1, 7, 1.0}).validate(), UsageError);
  EXPECT_THROW((GridSpec{1, 6, 1.0}).validate(), UsageError);
  EXPECT_THROW((GridSpec{4, 8, 1.0}).validate(), UsageError);
  EXPECT_THROW((GridSpec{0, 8, 1.0}).validate(), UsageError);
  EXPECT_THROW((GridSpec{1, 8, 0.0}).validate(), UsageError);
  EXPECT_EQ(GridSpec::defaults(1), (GridSpec{1, 512, 40.0}));
  EXPECT_EQ(GridSpec::defaults(2), (GridSpec{2, 256, 30.0}));
  EXPECT_EQ(GridSpec::defaults(3), (GridSpec{3, 96, 24.0}));
  EXPECT_EQ((GridSpec{3, 16, 2.0}).size(), 4096);
  EXPECT_DOUBLE_EQ((GridSpec{2, 16, 2.0}).cell_volume(), 1.0 / 64.0);
  EXPECT_DOUBLE_EQ((GridSpec{1, 16, 2.0}).frequency_step(), oracle::pi);
}

TEST(Fields, FrequencyIndexOrder) {
  EXPECT_EQ(frequency_index(0, 8), 0);
  EXPECT_EQ(frequency_index(3, 8), 3);
  EXPECT_EQ(frequency_index(4, 8), -4);
  EXPECT_EQ(frequency_index(7, 8), -1);
  int k[3];
  lattice_indices(GridSpec{3, 8, 1.0}, 7 * 64 + 1 * 8 + 5, k);
  EXPECT_EQ(k[0], -1);
  EXPECT_EQ(k[1], 1);
  EXPECT_EQ(k[2], -3);
}

TEST(Fields, GaussianNormsMatchClosedForms) {
  const auto f = make_gaussian(GridSpec{1, 256, 20.0}, 1.0);
  const auto nrm = norms(f);
  EXPECT_NEAR(nrm.l1, std::sqrt(2 * oracle::pi), 1e-8);
  EXPECT_NEAR(nrm.l2sq, std::sqrt(oracle::pi), 1e-8);
  EXPECT_NEAR(nrm.linf_spectral, std::sqrt(2 * oracle::pi), 1e-8);

  for (int d = 2; d <= 3; ++d) {
    const auto g = make_gaussian(GridSpec{d, 64, 16.0}, 1.0);
    const auto m = norms(g);
    EXPECT_NEAR(m.l1, oracle::gaussian_l1(1.0, d), 1e-8 * oracle::gaussian_l1(1.0, d));
    EXPECT_NEAR(m.l2sq, oracle::gaussian_l2sq(1.0, d), 1e-8 * oracle::gaussian_l2sq(1.0, d));
  }
}

TEST(Fields, TruncatedGaussianIsRefused) {
  EXPECT_THROW(make_gaussian(GridSpec{1, 256, 4.0}, 1.0), RefusedError);
  EXPECT_THROW(make_gaussian(GridSpec{1, 256, 40.0}, 0.0), DomainError);
}

TEST(Fields, ZeroAndConstantFields) {
  const GridSpec g{2, 16, 3.0};
  const auto zero = SpectralField::from_physical(g, Eigen::ArrayXd::Zero(g.size()));
  const auto zn = norms(zero);
  EXPECT_EQ(zn.l1, 0.0);
  EXPECT_EQ(zn.l2sq, 0.0);
  EXPECT_EQ(zn.linf_spectral, 0.0);

  const double c = -2.5;
  const auto cst = SpectralField::from_physical(g, Eigen::ArrayXd::Constant(g.size(), c));
  const auto cn = norms(cst);
  EXPECT_NEAR(cn.l1, std::abs(c) * 9.0, 1e-12);
  EXPECT_NEAR(cn.l2sq, c * c * 9.0, 1e-12);
  EXPECT_NEAR(cn.linf_spectral, std::abs(c) * 9.0, 1e-12);
  EXPECT_NEAR(spectral_tail(cst), 0.0, 1e-30);
}

TEST(Fields, SpectralTail) {
  EXPECT_LT(spectral_tail(make_gaussian(GridSpec::defaults(1), 1.0)), 1e-10);
  // (-1)^j is the single mode k = -n/2.
  const GridSpec g{1, 64, 10.0};
  Eigen::ArrayXd alt(g.size());
  for (Eigen::Index j = 0; j < alt.size(); ++j) alt[j] = j % 2 ? -1.0 : 1.0;
  EXPECT_NEAR(spectral_tail(SpectralField::from_physical(g, alt)), 1.0, 1e-12);
}

TEST(Fields, RoundTripIsExact) {
  for (int d = 1; d <= 3; ++d) {
    const GridSpec g{d, d == 3 ? 16 : 64, 7.0};
    const auto f = random_field(g, 100 + d);
    const auto back = SpectralField::from_coefficients(g, f.coeff());
    const double scale = f.phys().abs().maxCoeff();
    EXPECT_LT((back.phys() - f.phys()).abs().maxCoeff(), 1e-12 * scale) << "d=" << d;
  }
}

TEST(Fields, PlancherelHolds) {
  for (int d = 1; d <= 3; ++d) {
    const GridSpec g{d, d == 3 ? 16 : 64, 5.0};
    const auto f = random_field(g, 200 + d);
    EXPECT_NEAR(spectral_l2sq(f), norms(f).l2sq, 1e-10 * norms(f).l2sq) << "d=" << d;
  }
}

TEST(Fields, RealFieldsHaveConjugateSymmetricCoefficients) {
  const GridSpec g{2, 16, 4.0};
  const auto f = random_field(g, 5);
  const auto& c = f.coeff();
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) {
      const int mi = (g.n - i) % g.n;
      const int mj = (g.n - j) % g.n;
      EXPECT_LT(std::abs(c[i * g.n + j] - std::conj(c[mi * g.n + mj])), 1e-12 * c.abs().maxCoeff());
    }
}

TEST(Fields, SpectralSupBoundedByL1) {
  for (int d = 1; d <= 2; ++d)
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto f = random_field(GridSpec{d, 32, 6.0}, seed);
      const auto n = norms(f);
      EXPECT_LE(n.linf_spectral, n.l1 * (1 + 1e-8));
    }
}

TEST(Fields, GaussianRiemannSumsConvergeSpectrally) {
  const double exact = std::sqrt(2 * oracle::pi);
  const double e8 = std::abs(norms(make_gaussian(GridSpec{1, 16, 20.0}, 1.0)).l1 - exact);
  const double e16 = std::abs(norms(make_gaussian(GridSpec{1, 32, 20.0}, 1.0)).l1 - exact);
  EXPECT_GT(e8, 1e-8);
  EXPECT_LT(e16, 1e-13);
  // Faster than any fixed algebraic order.
  EXPECT_GT(std::log2(e8 / std::max(e16, 1e-300)), 10.0);
}

TEST(Fields, BandLimitedFields) {
  const GridSpec g{2, 32, 8.0};
  const auto a = make_band_limited(g, 3, 9);
  const auto b = make_band_limited(g, 3, 9);
  EXPECT_EQ(a.phys().matrix(), b.phys().matrix());
  EXPECT_NEAR(std::abs(a.coeff()[0]), 0.0, 1e-12);
  EXPECT_LT(spectral_tail(a), 1e-20);
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    int k[2];
    lattice_indices(g, i, k);
    if (std::max(std::abs(k[0]), std::abs(k[1])) > 3) EXPECT_LT(std::abs(a.coeff()[i]), 1e-12);
  }
  EXPECT_NE(make_band_limited(g, 3, 10).phys().matrix(), a.phys().matrix());
  EXPECT_THROW(make_band_limited(g, 8, 0), DomainError);
  EXPECT_THROW(make_band_limited(g, 0, 0), DomainError);
}

TEST(Fields, FlatSpectrumField) {
  const GridSpec g{2, 128, 32.0};
  const auto f = make_flat_spectrum(g, 1.0);
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    int k[2];
    lattice_indices(g, i, k);
    const double r = g.frequency_step() * std::hypot(k[0], k[1]);
    const auto c = f.coeff()[i];
    EXPECT_LT(std::abs(c.imag()), 1e-12);
    if (r <= 1.0) EXPECT_NEAR(c.real(), 1.0, 1e-12);
    if (r >= 2.0) EXPECT_NEAR(c.real(), 0.0, 1e-12);
    if (r > 1.0 && r < 2.0) {
      EXPECT_GE(c.real(), -1e-12);
      EXPECT_LE(c.real(), 1.0 + 1e-12);
    }
  }
  EXPECT_EQ(spectral_tail(f), 0.0);
  // The field is centered: u(x) = u(-x) about the grid point x = 0.
  const Eigen::Index center = (g.n / 2) * g.n + g.n / 2;
  EXPECT_NEAR(f.phys()[center], f.phys().maxCoeff(), 1e-12);
  EXPECT_THROW(make_flat_spectrum(g, 4.0), DomainError);
  EXPECT_THROW(make_flat_spectrum(g, 0.0), DomainError);
}

TEST(Fields, SineModeOccupiesOneFrequencyPair) {
  const GridSpec g{1, 64, 10.0};
  const auto s = make_sine_mode(g, 3);
  for (int i = 0; i < g.n; ++i) {
    const int k = frequency_index(i, g.n);
    if (std::abs(k) == 3)
      EXPECT_NEAR(std::abs(s.coeff()[i]), 5.0, 1e-12);
    else
      EXPECT_LT(std::abs(s.coeff()[i]), 1e-12);
  }
}

TEST(Fields, BinaryContainerRoundTrip) {
  const auto f = random_field(GridSpec{2, 16, 3.5}, 1);
  std::stringstream buf;
  write_field(buf, f);
  const std::string bytes = buf.str();
  ASSERT_EQ(bytes.size(), 8u + 8u + 8u + 8u * 256u);
  std::uint64_t d = 0, n = 0;
  double len = 0.0;
  std::memcpy(&d, bytes.data(), 8);
  std::memcpy(&n, bytes.data() + 8, 8);
  std::memcpy(&len, bytes.data() + 16, 8);
  EXPECT_EQ(d, 2u);
  EXPECT_EQ(n, 16u);
  EXPECT_EQ(len, 3.5);

  const auto back = read_field(buf);
  EXPECT_EQ(back.spec(), f.spec());
  EXPECT_EQ(std::memcmp(back.phys().data(), f.phys().data(), 8 * 256), 0);

  std::stringstream truncated(bytes.substr(0, bytes.size() - 3));
  EXPECT_THROW(read_field(truncated), UsageError);
}

TEST(Fields, CsvExport) {
  const auto f = make_gaussian(GridSpec{1, 16, 20.0}, 1.0);
  std::ostringstream out;
  write_field_csv(out, f);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "x,u");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 16);
  std::ostringstream bad;
  EXPECT_THROW(write_field_csv(bad, make_gaussian(GridSpec{2, 16, 20.0}, 1.0)), UsageError);
}

TEST(Fields, SymbolOnLatticeMatchesFrequencies) {
  const GridSpec g{2, 8, 2.0 * oracle::pi};
  const auto p = symbol_on_lattice(laplacian_symbol(2), g);
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    int k[2];
    lattice_indices(g, i, k);
    EXPECT_NEAR(p[i], k[0] * k[0] + k[1] * k[1], 1e-12);
  }
  EXPECT_THROW(symbol_on_lattice(laplacian_symbol(1), g), UsageError);
}
