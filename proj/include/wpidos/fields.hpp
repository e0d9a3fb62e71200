#pragma once

// Real fields on a periodic box [-L/2, L/2)^d standing in for R^d.
//
// Fourier convention: uhat(xi) = int u(x) exp(-i xi.x) dx, discretized as
//   uhat_k = h^d sum_j u(x_j) exp(-i xi_k . x_j),  xi_k = 2 pi k / L,
// with inverse u(x_j) = L^-d sum_k uhat_k exp(i xi_k . x_j). Frequency
// integrals int . dxi / (2 pi)^d become L^-d sum_k.
//
// Coefficients are stored in FFT order per axis (k = 0..n/2-1, -n/2..-1),
// row-major with the last axis fastest, matching the physical layout.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "wpidos/symbols.hpp"

namespace wpidos {

struct GridSpec {
  int d = 1;
  int n = 512;
  double box_len = 40.0;

  double step() const { return box_len / n; }
  Eigen::Index size() const;
  /// Cell volume h^d.
  double cell_volume() const;
  /// Frequency spacing 2 pi / L.
  double frequency_step() const;
  void validate() const;

  /// Defaults used by experiments: d=1 -> (512, 40), d=2 -> (256, 30), d=3 -> (96, 24).
  static GridSpec defaults(int d);

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Signed frequency index of FFT slot i on an axis of length n.
inline int frequency_index(int i, int n) { return i < n / 2 ? i : i - n; }

/// Per-axis signed frequency indices of a flat lattice position.
void lattice_indices(const GridSpec& spec, Eigen::Index flat, int* k);

/// P(xi_k) for every lattice mode, in coefficient layout.
Eigen::ArrayXd symbol_on_lattice(const Symbol& sym, const GridSpec& spec);

class SpectralField {
 public:
  static SpectralField from_physical(const GridSpec& spec, Eigen::ArrayXd phys);
  /// Builds the physical view from coefficients; the imaginary part of the
  /// inverse transform is discarded.
  static SpectralField from_coefficients(const GridSpec& spec, Eigen::ArrayXcd coeff);

  const GridSpec& spec() const { return spec_; }
  const Eigen::ArrayXd& phys() const { return phys_; }
  const Eigen::ArrayXcd& coeff() const { return coeff_; }

 private:
  SpectralField(GridSpec spec, Eigen::ArrayXd phys, Eigen::ArrayXcd coeff)
      : spec_(spec), phys_(std::move(phys)), coeff_(std::move(coeff)) {}

  GridSpec spec_;
  Eigen::ArrayXd phys_;
  Eigen::ArrayXcd coeff_;
};

/// Continuum-normalized forward transform (physical -> coefficients).
Eigen::ArrayXcd forward_transform(const GridSpec& spec, const Eigen::ArrayXd& phys);
/// Inverse of forward_transform; returns the complex physical samples.
Eigen::ArrayXcd inverse_transform(const GridSpec& spec, const Eigen::ArrayXcd& coeff);

/// exp(-|x|^2 / (2 sigma^2)) centered in the box. Refuses L < 12 sigma.
SpectralField make_gaussian(const GridSpec& spec, double sigma);

/// Zero-mean real field with standard normal coefficients on the modes
/// 0 < max_i |k_i| <= kmax. Requires kmax < n/4.
SpectralField make_band_limited(const GridSpec& spec, int kmax, std::uint64_t seed);

/// Radial field with uhat = 1 on |xi| <= radius, falling smoothly to 0 at
/// 2 radius. Requires 2 radius below the frequency of the shell max|k| = n/4.
SpectralField make_flat_spectrum(const GridSpec& spec, double radius);

/// sin(2 pi m x_1 / L), a single lattice mode along the first axis.
SpectralField make_sine_mode(const GridSpec& spec, int m);

struct FieldNorms {
  double l1 = 0.0;
  double l2sq = 0.0;
  double linf_spectral = 0.0;
};

FieldNorms norms(const SpectralField& f);

/// L^-d sum_k |uhat_k|^2, the spectral-side squared L2 norm.
double spectral_l2sq(const SpectralField& f);

/// Fraction of sum |uhat_k|^2 on modes with max_i |k_i| >= n/4.
double spectral_tail(const SpectralField& f);

/// Default acceptance cutoff for spectral_tail.
inline constexpr double kDefaultTailCutoff = 1e-6;

/// Flat container: d, n (uint64 LE), L (float64 LE), then n^d row-major float64.
void write_field(std::ostream& out, const SpectralField& f);
SpectralField read_field(std::istream& in);
void save_field(const std::filesystem::path& path, const SpectralField& f);
SpectralField load_field(const std::filesystem::path& path);

/// Two-column CSV (x, u); d = 1 only.
void write_field_csv(std::ostream& out, const SpectralField& f);

}  // namespace wpidos
