#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <memory>
#include <mutex>

namespace dcflowgen::detail {
namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwDeleter {
  void operator()(void* p) const { fftw_free(p); }
};

template <typename T>
std::unique_ptr<T[], FftwDeleter> fftw_buffer(std::size_t n) {
  return std::unique_ptr<T[], FftwDeleter>(
      static_cast<T*>(fftw_malloc(sizeof(T) * std::max<std::size_t>(n, 1))));
}

class Plan {
 public:
  explicit Plan(fftw_plan p) : plan_(p) {}
  ~Plan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;
  void run() const { fftw_execute(plan_); }

 private:
  fftw_plan plan_;
};

}  // namespace

std::vector<std::complex<double>> forward_real(std::span<const double> x) {
  const std::size_t n = x.size();
  auto in = fftw_buffer<double>(n);
  auto out = fftw_buffer<fftw_complex>(n / 2 + 1);
  fftw_plan raw;
  {
    std::lock_guard lock(planner_mutex());
    raw = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.get(), out.get(),
                               FFTW_ESTIMATE);
  }
  Plan plan(raw);
  std::copy(x.begin(), x.end(), in.get());
  plan.run();
  std::vector<std::complex<double>> result(n / 2 + 1);
  for (std::size_t j = 0; j < result.size(); ++j) {
    result[j] = {out[j][0], out[j][1]};
  }
  return result;
}

std::vector<double> inverse_real(std::span<const std::complex<double>> spectrum,
                                 std::size_t n) {
  auto in = fftw_buffer<fftw_complex>(n / 2 + 1);
  auto out = fftw_buffer<double>(n);
  fftw_plan raw;
  {
    std::lock_guard lock(planner_mutex());
    raw = fftw_plan_dft_c2r_1d(static_cast<int>(n), in.get(), out.get(),
                               FFTW_ESTIMATE);
  }
  Plan plan(raw);
  for (std::size_t j = 0; j < n / 2 + 1; ++j) {
    in[j][0] = spectrum[j].real();
    in[j][1] = spectrum[j].imag();
  }
  plan.run();
  std::vector<double> result(out.get(), out.get() + n);
  const double scale = 1.0 / static_cast<double>(n);
  for (auto& v : result) v *= scale;
  return result;
}

}  // namespace dcflowgen::detail
