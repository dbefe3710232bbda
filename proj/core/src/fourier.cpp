#include <fftw3.h>

#include <mutex>

#include "abwave/detail/fft.hpp"
#include "abwave/errors.hpp"

namespace abwave::detail {
namespace {

// FFTW's planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(std::span<std::complex<double>> data) {
  return reinterpret_cast<fftw_complex*>(data.data());
}

void execute(fftw_plan plan) {
  if (plan == nullptr) throw Error("fft: FFTW failed to create a plan");
  fftw_execute(plan);
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plan);
}

}  // namespace

void fft_forward(std::span<std::complex<double>> data) {
  fftw_plan plan = nullptr;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(data.size()), as_fftw(data),
                            as_fftw(data), FFTW_FORWARD, FFTW_ESTIMATE);
  }
  execute(plan);
}

void fft_forward_2d(std::span<std::complex<double>> data, std::size_t nx,
                    std::size_t ny) {
  if (data.size() != nx * ny) throw GridMismatchError("fft_forward_2d: size mismatch");
  fftw_plan plan = nullptr;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_2d(static_cast<int>(ny), static_cast<int>(nx),
                            as_fftw(data), as_fftw(data), FFTW_FORWARD,
                            FFTW_ESTIMATE);
  }
  execute(plan);
}

}  // namespace abwave::detail
