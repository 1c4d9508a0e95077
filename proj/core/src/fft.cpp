#include "erds/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>

#include "erds/errors.hpp"

namespace erds {

namespace {
// The FFTW planner is not thread-safe; execution with new-array calls is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct RealFft::Plans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
  ~Plans() {
    std::lock_guard lock(planner_mutex());
    if (r2c) fftw_destroy_plan(r2c);
    if (c2r) fftw_destroy_plan(c2r);
  }
};

RealFft::RealFft(std::vector<int> extents) : extents_(std::move(extents)), plans_(std::make_unique<Plans>()) {
  if (extents_.empty()) throw DomainError("RealFft needs at least one extent");
  real_size_ = 1;
  for (int e : extents_) {
    if (e < 1) throw DomainError("RealFft extents must be positive");
    real_size_ *= static_cast<std::size_t>(e);
  }
  spectral_size_ = real_size_ / static_cast<std::size_t>(extents_.back()) *
                   static_cast<std::size_t>(extents_.back() / 2 + 1);

  std::vector<double> rbuf(real_size_);
  std::vector<std::complex<double>> cbuf(spectral_size_);
  auto* c = reinterpret_cast<fftw_complex*>(cbuf.data());
  const int rank = static_cast<int>(extents_.size());
  std::lock_guard lock(planner_mutex());
  plans_->r2c = fftw_plan_dft_r2c(rank, extents_.data(), rbuf.data(), c, FFTW_ESTIMATE | FFTW_UNALIGNED);
  plans_->c2r = fftw_plan_dft_c2r(rank, extents_.data(), c, rbuf.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!plans_->r2c || !plans_->c2r) throw Error("FFTW planning failed");
}

RealFft::~RealFft() = default;
RealFft::RealFft(RealFft&&) noexcept = default;
RealFft& RealFft::operator=(RealFft&&) noexcept = default;

void RealFft::forward(std::span<const double> in, std::span<std::complex<double>> out) const {
  if (in.size() != real_size_ || out.size() != spectral_size_) throw DomainError("RealFft::forward size mismatch");
  // r2c does not modify its input, but the FFTW signature is non-const.
  fftw_execute_dft_r2c(plans_->r2c, const_cast<double*>(in.data()), reinterpret_cast<fftw_complex*>(out.data()));
}

void RealFft::inverse(std::span<const std::complex<double>> in, std::span<double> out) const {
  if (in.size() != spectral_size_ || out.size() != real_size_) throw DomainError("RealFft::inverse size mismatch");
  // c2r destroys its input.
  std::vector<std::complex<double>> scratch(in.begin(), in.end());
  fftw_execute_dft_c2r(plans_->c2r, reinterpret_cast<fftw_complex*>(scratch.data()), out.data());
  const double scale = 1.0 / static_cast<double>(real_size_);
  for (double& v : out) v *= scale;
}

SpectralOps::SpectralOps(const Grid& grid)
    : grid_(grid), fft_(std::vector<int>(static_cast<std::size_t>(grid.dim()), grid.n())) {
  const int n = grid.n();
  const int half = n / 2 + 1;
  const double k0 = 2.0 * std::numbers::pi / grid.length();
  k2_.resize(fft_.spectral_size());
  k_.resize(fft_.spectral_size());
  modes_.resize(fft_.spectral_size());
  for (std::size_t s = 0; s < k2_.size(); ++s) {
    // Decompose s over extents (n, ..., n, half).
    std::size_t rest = s;
    std::array<int, 3> idx{0, 0, 0};
    idx[grid.dim() - 1] = static_cast<int>(rest % static_cast<std::size_t>(half));
    rest /= static_cast<std::size_t>(half);
    for (int d = grid.dim() - 2; d >= 0; --d) {
      idx[d] = static_cast<int>(rest % static_cast<std::size_t>(n));
      rest /= static_cast<std::size_t>(n);
    }
    double sum = 0.0;
    std::array<double, 3> kv{0.0, 0.0, 0.0};
    for (int d = 0; d < grid.dim(); ++d) {
      const int m = idx[d] <= n / 2 ? idx[d] : idx[d] - n;
      kv[d] = k0 * m;
      sum += kv[d] * kv[d];
    }
    k2_[s] = sum;
    k_[s] = kv;
    modes_[s] = idx;
  }
}

void SpectralOps::heat_semigroup(std::span<double> values, double coeff) const {
  std::vector<std::complex<double>> spec(fft_.spectral_size());
  fft_.forward(values, spec);
  for (std::size_t s = 0; s < spec.size(); ++s) spec[s] *= std::exp(-coeff * k2_[s]);
  fft_.inverse(spec, values);
}

std::vector<double> SpectralOps::derivative(std::span<const double> values, int axis) const {
  std::vector<std::complex<double>> spec(fft_.spectral_size());
  fft_.forward(values, spec);
  const std::complex<double> i(0.0, 1.0);
  for (std::size_t s = 0; s < spec.size(); ++s) {
    // Odd derivative: the Nyquist coefficient has no consistent sign.
    const bool drop = modes_[s][axis] == grid_.n() / 2;
    spec[s] = drop ? std::complex<double>(0.0) : spec[s] * (i * k_[s][axis]);
  }
  std::vector<double> out(values.size());
  fft_.inverse(spec, out);
  return out;
}

std::vector<double> SpectralOps::inverse_laplacian(std::span<const double> source) const {
  std::vector<std::complex<double>> spec(fft_.spectral_size());
  fft_.forward(source, spec);
  spec[0] = 0.0;
  for (std::size_t s = 1; s < spec.size(); ++s) spec[s] /= -k2_[s];
  std::vector<double> out(source.size());
  fft_.inverse(spec, out);
  return out;
}

std::vector<double> SpectralOps::laplacian(std::span<const double> values) const {
  std::vector<std::complex<double>> spec(fft_.spectral_size());
  fft_.forward(values, spec);
  for (std::size_t s = 0; s < spec.size(); ++s) spec[s] *= -k2_[s];
  std::vector<double> out(values.size());
  fft_.inverse(spec, out);
  return out;
}

}  // namespace erds
