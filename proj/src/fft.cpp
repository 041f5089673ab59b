#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

namespace qfo::detail {
namespace {

// FFTW's planner is not reentrant; execution with the new-array interface is.
class PlanCache {
public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(int nx, int ny, int sign) {
    std::lock_guard lock(mutex_);
    const auto key = std::make_tuple(nx, ny, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::vector<cplx> scratch(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny));
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan plan = ny == 1 ? fftw_plan_dft_1d(nx, buf, buf, sign, flags)
                             : fftw_plan_dft_2d(ny, nx, buf, buf, sign, flags);
    plans_.emplace(key, plan);
    return plan;
  }

private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

} // namespace

void fft2_inplace(std::span<cplx> data, int nx, int ny, int sign) {
  fftw_plan plan = cache().get(nx, ny, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD);
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, buf, buf);
}

void fft1_inplace(std::span<cplx> data, int sign) {
  fft2_inplace(data, static_cast<int>(data.size()), 1, sign);
}

} // namespace qfo::detail
