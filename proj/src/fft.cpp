#include "photonfluid/fft.hpp"

#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include <fftw3.h>
#include <fmt/format.h>

#include "photonfluid/error.hpp"

namespace photonfluid {

namespace {
// FFTW's planner is not thread-safe. Constant-initialized so it outlives the
// cached plans destroyed at exit.
constinit std::mutex planner_mutex;
}  // namespace

struct Fft2d::Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  ~Plans() {
    std::lock_guard lock(planner_mutex);
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
  }
};

Fft2d::Fft2d(std::size_t nx, std::size_t ny) : nx_(nx), ny_(ny), plans_(std::make_unique<Plans>()) {
  if (nx == 0 || ny == 0) throw InvalidArgument("FFT sizes must be positive");
  // Planning with ESTIMATE does not touch the buffer contents.
  std::vector<std::complex<double>> scratch(nx * ny);
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  std::lock_guard lock(planner_mutex);
  plans_->forward = fftw_plan_dft_2d(static_cast<int>(ny), static_cast<int>(nx), buf, buf,
                                     FFTW_FORWARD, flags);
  plans_->backward = fftw_plan_dft_2d(static_cast<int>(ny), static_cast<int>(nx), buf, buf,
                                      FFTW_BACKWARD, flags);
  if (!plans_->forward || !plans_->backward)
    throw NumericError(fmt::format("FFTW planning failed for {} x {}", nx, ny));
}

Fft2d::~Fft2d() = default;
Fft2d::Fft2d(Fft2d&&) noexcept = default;
Fft2d& Fft2d::operator=(Fft2d&&) noexcept = default;

void Fft2d::forward(std::span<std::complex<double>> data) const {
  if (data.size() != size()) throw InvalidArgument("FFT buffer size mismatch");
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plans_->forward, p, p);
}

void Fft2d::backward(std::span<std::complex<double>> data) const {
  if (data.size() != size()) throw InvalidArgument("FFT buffer size mismatch");
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plans_->backward, p, p);
}

const Fft2d& fft_for(std::size_t nx, std::size_t ny) {
  static std::mutex cache_mutex;
  static std::map<std::pair<std::size_t, std::size_t>, std::unique_ptr<Fft2d>> cache;
  std::lock_guard lock(cache_mutex);
  auto& slot = cache[{nx, ny}];
  if (!slot) slot = std::make_unique<Fft2d>(nx, ny);
  return *slot;
}

}  // namespace photonfluid
