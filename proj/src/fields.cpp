#include "wpidos/fields.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <utility>

#include <unsupported/Eigen/FFT>

#include "wpidos/errors.hpp"

namespace wpidos {

namespace {

using Complex = std::complex<double>;

Eigen::Index ipow(int base, int exp) {
  Eigen::Index r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

// Unscaled DFT along every axis, in place. inverse selects exp(+i...).
void transform_axes(const GridSpec& spec, Eigen::ArrayXcd& data, bool inverse) {
  const int n = spec.n;
  const Eigen::Index total = data.size();
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::Unscaled);
  std::vector<Complex> line(n), out(n);
  for (int axis = 0; axis < spec.d; ++axis) {
    const Eigen::Index stride = ipow(n, spec.d - 1 - axis);
    const Eigen::Index block = stride * n;
    for (Eigen::Index outer = 0; outer < total; outer += block) {
      for (Eigen::Index inner = 0; inner < stride; ++inner) {
        const Eigen::Index base = outer + inner;
        for (int j = 0; j < n; ++j) line[j] = data[base + j * stride];
        if (inverse)
          fft.inv(out, line);
        else
          fft.fwd(out, line);
        for (int j = 0; j < n; ++j) data[base + j * stride] = out[j];
      }
    }
  }
}

// (-1)^(sum_i k_i): the phase exp(-i xi_k . x_0) for x_0 = (-L/2, ..., -L/2).
Eigen::ArrayXd corner_phase(const GridSpec& spec) {
  Eigen::ArrayXd phase(spec.size());
  std::vector<int> k(spec.d);
  for (Eigen::Index i = 0; i < phase.size(); ++i) {
    lattice_indices(spec, i, k.data());
    int parity = 0;
    for (int a = 0; a < spec.d; ++a) parity += std::abs(k[a]);
    phase[i] = (parity % 2 == 0) ? 1.0 : -1.0;
  }
  return phase;
}

void write_u64(std::ostream& out, std::uint64_t v) {
  char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xffU);
  out.write(bytes, 8);
}

std::uint64_t read_u64(std::istream& in) {
  unsigned char bytes[8];
  in.read(reinterpret_cast<char*>(bytes), 8);
  if (!in) throw UsageError("field container: truncated input");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return v;
}

}  // namespace

Eigen::Index GridSpec::size() const { return ipow(n, d); }

double GridSpec::cell_volume() const { return std::pow(step(), d); }

double GridSpec::frequency_step() const { return 2.0 * std::numbers::pi / box_len; }

void GridSpec::validate() const {
  if (d < 1 || d > 3) throw UsageError("grid: d must be 1, 2 or 3");
  if (n < 8 || n % 2 != 0) throw UsageError("grid: n must be even and >= 8");
  if (!(box_len > 0.0)) throw UsageError("grid: box length must be positive");
}

GridSpec GridSpec::defaults(int d) {
  switch (d) {
    case 1: return {1, 512, 40.0};
    case 2: return {2, 256, 30.0};
    case 3: return {3, 96, 24.0};
    default: throw UsageError("grid: no defaults for d = " + std::to_string(d));
  }
}

void lattice_indices(const GridSpec& spec, Eigen::Index flat, int* k) {
  for (int a = spec.d - 1; a >= 0; --a) {
    k[a] = frequency_index(static_cast<int>(flat % spec.n), spec.n);
    flat /= spec.n;
  }
}

Eigen::ArrayXd symbol_on_lattice(const Symbol& sym, const GridSpec& spec) {
  if (sym.dim != spec.d) throw UsageError("symbol dimension does not match grid");
  const double dxi = spec.frequency_step();
  Eigen::ArrayXd values(spec.size());
  std::vector<int> k(spec.d);
  Eigen::VectorXd xi(spec.d);
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    lattice_indices(spec, i, k.data());
    for (int a = 0; a < spec.d; ++a) xi[a] = dxi * k[a];
    values[i] = eval_symbol(sym, xi);
  }
  return values;
}

Eigen::ArrayXcd forward_transform(const GridSpec& spec, const Eigen::ArrayXd& phys) {
  if (phys.size() != spec.size()) throw UsageError("forward_transform: size mismatch");
  Eigen::ArrayXcd data = phys.cast<Complex>();
  transform_axes(spec, data, false);
  data *= (corner_phase(spec) * spec.cell_volume()).cast<Complex>();
  return data;
}

Eigen::ArrayXcd inverse_transform(const GridSpec& spec, const Eigen::ArrayXcd& coeff) {
  if (coeff.size() != spec.size()) throw UsageError("inverse_transform: size mismatch");
  Eigen::ArrayXcd data = coeff * (corner_phase(spec) / std::pow(spec.box_len, spec.d)).cast<Complex>();
  transform_axes(spec, data, true);
  return data;
}

SpectralField SpectralField::from_physical(const GridSpec& spec, Eigen::ArrayXd phys) {
  spec.validate();
  Eigen::ArrayXcd coeff = forward_transform(spec, phys);
  return SpectralField(spec, std::move(phys), std::move(coeff));
}

SpectralField SpectralField::from_coefficients(const GridSpec& spec, Eigen::ArrayXcd coeff) {
  spec.validate();
  Eigen::ArrayXd phys = inverse_transform(spec, coeff).real();
  return SpectralField(spec, std::move(phys), std::move(coeff));
}

SpectralField make_gaussian(const GridSpec& spec, double sigma) {
  spec.validate();
  if (!(sigma > 0.0)) throw DomainError("make_gaussian: sigma must be positive");
  if (spec.box_len < 12.0 * sigma) {
    std::ostringstream msg;
    msg << "make_gaussian: box length " << spec.box_len << " < 12 sigma = " << 12.0 * sigma
        << " would truncate the Gaussian";
    throw RefusedError(msg.str());
  }
  const double h = spec.step();
  const double half = 0.5 * spec.box_len;
  Eigen::ArrayXd axis_sq(spec.n);
  for (int j = 0; j < spec.n; ++j) {
    const double x = -half + h * j;
    axis_sq[j] = x * x;
  }
  Eigen::ArrayXd phys(spec.size());
  for (Eigen::Index i = 0; i < phys.size(); ++i) {
    Eigen::Index rest = i;
    double r2 = 0.0;
    for (int a = 0; a < spec.d; ++a) {
      r2 += axis_sq[rest % spec.n];
      rest /= spec.n;
    }
    phys[i] = std::exp(-r2 / (2.0 * sigma * sigma));
  }
  return SpectralField::from_physical(spec, std::move(phys));
}

SpectralField make_band_limited(const GridSpec& spec, int kmax, std::uint64_t seed) {
  spec.validate();
  if (kmax < 1 || kmax >= spec.n / 4) throw DomainError("make_band_limited: need 1 <= kmax < n/4");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::ArrayXcd coeff = Eigen::ArrayXcd::Zero(spec.size());
  std::vector<int> k(spec.d);
  for (Eigen::Index i = 0; i < coeff.size(); ++i) {
    lattice_indices(spec, i, k.data());
    int kinf = 0;
    for (int a = 0; a < spec.d; ++a) kinf = std::max(kinf, std::abs(k[a]));
    if (kinf == 0 || kinf > kmax) continue;
    const double re = normal(rng);
    const double im = normal(rng);
    coeff[i] = Complex(re, im);
  }
  // Real part of the synthesized signal has Hermitian-symmetric coefficients.
  return SpectralField::from_physical(spec, inverse_transform(spec, coeff).real());
}

SpectralField make_flat_spectrum(const GridSpec& spec, double radius) {
  spec.validate();
  if (!(radius > 0.0)) throw DomainError("make_flat_spectrum: radius must be positive");
  const double resolved = std::numbers::pi * spec.n / (2.0 * spec.box_len);
  if (2.0 * radius >= resolved) {
    std::ostringstream msg;
    msg << "make_flat_spectrum: roll-off edge " << 2.0 * radius << " reaches the unresolved shell at |xi| = "
        << resolved;
    throw DomainError(msg.str());
  }
  // C-infinity step: 1 for s <= 0, 0 for s >= 1.
  auto bump = [](double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; };
  auto step = [&](double s) {
    if (s <= 0.0) return 1.0;
    if (s >= 1.0) return 0.0;
    return bump(1.0 - s) / (bump(1.0 - s) + bump(s));
  };
  const double dxi = spec.frequency_step();
  Eigen::ArrayXcd coeff(spec.size());
  std::vector<int> k(spec.d);
  for (Eigen::Index i = 0; i < coeff.size(); ++i) {
    lattice_indices(spec, i, k.data());
    double r2 = 0.0;
    for (int a = 0; a < spec.d; ++a) r2 += (k[a] * dxi) * (k[a] * dxi);
    coeff[i] = step(std::sqrt(r2) / radius - 1.0);
  }
  return SpectralField::from_coefficients(spec, std::move(coeff));
}

SpectralField make_sine_mode(const GridSpec& spec, int m) {
  spec.validate();
  const double h = spec.step();
  const double half = 0.5 * spec.box_len;
  Eigen::ArrayXd phys(spec.size());
  const Eigen::Index inner = spec.size() / spec.n;
  for (Eigen::Index i = 0; i < phys.size(); ++i) {
    const double x = -half + h * static_cast<double>(i / inner);
    phys[i] = std::sin(2.0 * std::numbers::pi * m * x / spec.box_len);
  }
  return SpectralField::from_physical(spec, std::move(phys));
}

FieldNorms norms(const SpectralField& f) {
  const double cell = f.spec().cell_volume();
  FieldNorms out;
  out.l1 = cell * f.phys().abs().sum();
  out.l2sq = cell * f.phys().square().sum();
  out.linf_spectral = f.coeff().abs().maxCoeff();
  return out;
}

double spectral_l2sq(const SpectralField& f) {
  return f.coeff().abs2().sum() / std::pow(f.spec().box_len, f.spec().d);
}

double spectral_tail(const SpectralField& f) {
  const GridSpec& spec = f.spec();
  const Eigen::ArrayXd energy = f.coeff().abs2();
  const double total = energy.sum();
  if (total == 0.0) return 0.0;
  double tail = 0.0;
  std::vector<int> k(spec.d);
  for (Eigen::Index i = 0; i < energy.size(); ++i) {
    lattice_indices(spec, i, k.data());
    int kinf = 0;
    for (int a = 0; a < spec.d; ++a) kinf = std::max(kinf, std::abs(k[a]));
    if (kinf >= spec.n / 4) tail += energy[i];
  }
  return tail / total;
}

void write_field(std::ostream& out, const SpectralField& f) {
  const GridSpec& spec = f.spec();
  write_u64(out, static_cast<std::uint64_t>(spec.d));
  write_u64(out, static_cast<std::uint64_t>(spec.n));
  write_u64(out, std::bit_cast<std::uint64_t>(spec.box_len));
  for (Eigen::Index i = 0; i < f.phys().size(); ++i)
    write_u64(out, std::bit_cast<std::uint64_t>(f.phys()[i]));
}

SpectralField read_field(std::istream& in) {
  GridSpec spec;
  spec.d = static_cast<int>(read_u64(in));
  spec.n = static_cast<int>(read_u64(in));
  spec.box_len = std::bit_cast<double>(read_u64(in));
  spec.validate();
  Eigen::ArrayXd phys(spec.size());
  for (Eigen::Index i = 0; i < phys.size(); ++i) phys[i] = std::bit_cast<double>(read_u64(in));
  return SpectralField::from_physical(spec, std::move(phys));
}

void save_field(const std::filesystem::path& path, const SpectralField& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot open " + path.string() + " for writing");
  write_field(out, f);
}

SpectralField load_field(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path.string());
  return read_field(in);
}

void write_field_csv(std::ostream& out, const SpectralField& f) {
  if (f.spec().d != 1) throw UsageError("CSV export is only defined for d = 1");
  const double h = f.spec().step();
  const double half = 0.5 * f.spec().box_len;
  out << "x,u\n";
  out.precision(17);
  for (int j = 0; j < f.spec().n; ++j) out << (-half + h * j) << ',' << f.phys()[j] << '\n';
}

}  // namespace wpidos
