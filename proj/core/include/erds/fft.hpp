#pragma once

#include <array>
#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "erds/grid.hpp"

namespace erds {

/// Real-to-complex FFT of a row-major array with arbitrary extents. The
/// spectrum uses the half-complex layout (last extent n/2 + 1).
class RealFft {
 public:
  explicit RealFft(std::vector<int> extents);
  ~RealFft();
  RealFft(RealFft&&) noexcept;
  RealFft& operator=(RealFft&&) noexcept;
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t real_size() const noexcept { return real_size_; }
  std::size_t spectral_size() const noexcept { return spectral_size_; }
  const std::vector<int>& extents() const noexcept { return extents_; }

  void forward(std::span<const double> in, std::span<std::complex<double>> out) const;
  /// Normalized inverse (forward followed by inverse is the identity).
  void inverse(std::span<const std::complex<double>> in, std::span<double> out) const;

 private:
  struct Plans;
  std::vector<int> extents_;
  std::size_t real_size_ = 0;
  std::size_t spectral_size_ = 0;
  std::unique_ptr<Plans> plans_;
};

/// Fourier-space operators on a periodic Grid.
class SpectralOps {
 public:
  explicit SpectralOps(const Grid& grid);

  const Grid& grid() const noexcept { return grid_; }
  const RealFft& fft() const noexcept { return fft_; }
  /// |k|^2 for every half-spectrum entry.
  std::span<const double> wavenumber_sq() const noexcept { return k2_; }

  /// In place: values <- exp(coeff * Laplacian) values.
  void heat_semigroup(std::span<double> values, double coeff) const;
  /// Spectral partial derivative along `axis`; Nyquist mode dropped.
  std::vector<double> derivative(std::span<const double> values, int axis) const;
  /// Zero-mean solution of Laplacian(phi) = source - mean(source).
  std::vector<double> inverse_laplacian(std::span<const double> source) const;
  std::vector<double> laplacian(std::span<const double> values) const;

 private:
  Grid grid_;
  RealFft fft_;
  std::vector<double> k2_;
  std::vector<std::array<double, 3>> k_;
  std::vector<Index3> modes_;
};

}  // namespace erds
