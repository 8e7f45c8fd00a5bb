#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>

namespace photonfluid {

/// In-place 2D complex FFT on a row-major ny x nx array (x fastest).
///
/// Plans are built with FFTW_ESTIMATE so that the same sizes always yield the
/// same plan and bit-identical results on one platform. Planning is serialized
/// internally; execution is safe from several threads on distinct arrays.
class Fft2d {
 public:
  Fft2d(std::size_t nx, std::size_t ny);
  ~Fft2d();
  Fft2d(Fft2d&&) noexcept;
  Fft2d& operator=(Fft2d&&) noexcept;
  Fft2d(const Fft2d&) = delete;
  Fft2d& operator=(const Fft2d&) = delete;

  /// Unnormalized forward transform, sign -1.
  void forward(std::span<std::complex<double>> data) const;
  /// Unnormalized inverse transform, sign +1 (caller divides by size()).
  void backward(std::span<std::complex<double>> data) const;

  std::size_t nx() const { return nx_; }
  std::size_t ny() const { return ny_; }
  std::size_t size() const { return nx_ * ny_; }

 private:
  struct Plans;
  std::size_t nx_ = 0;
  std::size_t ny_ = 0;
  std::unique_ptr<Plans> plans_;
};

/// Shared, lazily-built transform for a given size.
const Fft2d& fft_for(std::size_t nx, std::size_t ny);

/// Signed lattice index of FFT bin i for an axis of n points: [-n/2, n/2).
inline long lattice_index(std::size_t i, std::size_t n) {
  const long li = static_cast<long>(i);
  const long ln = static_cast<long>(n);
  return li < ln / 2 ? li : li - ln;
}

}  // namespace photonfluid
