#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

namespace morrey::detail {
namespace {

struct PlanCache {
  std::mutex mutex;
  std::map<std::tuple<int, int, int>, fftw_plan> plans;

  ~PlanCache() {
    for (auto& [key, plan] : plans) fftw_destroy_plan(plan);
  }
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

fftw_plan plan_for(int dimension, int N, int sign) {
  auto& c = cache();
  std::lock_guard lock(c.mutex);
  const auto key = std::make_tuple(dimension, N, sign);
  if (auto it = c.plans.find(key); it != c.plans.end()) return it->second;

  std::size_t total = dimension == 1 ? std::size_t(N) : std::size_t(N) * N;
  std::vector<std::complex<double>> scratch(total);
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  // FFTW_UNALIGNED: plans are later executed on arbitrary std::vector storage.
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  fftw_plan plan = dimension == 1 ? fftw_plan_dft_1d(N, buf, buf, sign, flags)
                                  : fftw_plan_dft_2d(N, N, buf, buf, sign, flags);
  c.plans.emplace(key, plan);
  return plan;
}

}  // namespace

void fft_inplace(std::span<std::complex<double>> data, int dimension, int points_per_axis,
                 int sign) {
  fftw_plan plan = plan_for(dimension, points_per_axis, sign);
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, buf, buf);
}

}  // namespace morrey::detail
