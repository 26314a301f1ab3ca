#include "stochlab/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <memory>
#include <mutex>
#include <numbers>

namespace stochlab::fft {
namespace {

// The FFTW planner is not thread-safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};
template <typename T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

template <typename T>
FftwBuffer<T> allocate(std::size_t n) {
  return FftwBuffer<T>(static_cast<T*>(fftw_malloc(sizeof(T) * std::max<std::size_t>(n, 1))));
}

class Plan {
 public:
  explicit Plan(fftw_plan p) : p_(p) {}
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;
  ~Plan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(p_);
  }
  void execute() const { fftw_execute(p_); }

 private:
  fftw_plan p_;
};

std::vector<std::complex<double>> complex_transform(std::span<const std::complex<double>> x,
                                                    int sign) {
  const auto n = x.size();
  if (n == 0) return {};
  auto in = allocate<fftw_complex>(n);
  auto out = allocate<fftw_complex>(n);
  std::unique_ptr<Plan> plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = std::make_unique<Plan>(
        fftw_plan_dft_1d(static_cast<int>(n), in.get(), out.get(), sign, FFTW_ESTIMATE));
  }
  for (std::size_t i = 0; i < n; ++i) {
    in[i][0] = x[i].real();
    in[i][1] = x[i].imag();
  }
  plan->execute();
  std::vector<std::complex<double>> result(n);
  for (std::size_t i = 0; i < n; ++i) result[i] = {out[i][0], out[i][1]};
  return result;
}

}  // namespace

std::vector<std::complex<double>> forward(std::span<const std::complex<double>> x) {
  return complex_transform(x, FFTW_FORWARD);
}

std::vector<std::complex<double>> inverse(std::span<const std::complex<double>> x) {
  auto result = complex_transform(x, FFTW_BACKWARD);
  const double scale = 1.0 / static_cast<double>(x.size());
  for (auto& v : result) v *= scale;
  return result;
}

std::vector<std::complex<double>> forward_real(std::span<const double> x) {
  const auto n = x.size();
  if (n == 0) return {};
  const auto m = n / 2 + 1;
  auto in = allocate<double>(n);
  auto out = allocate<fftw_complex>(m);
  std::unique_ptr<Plan> plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = std::make_unique<Plan>(
        fftw_plan_dft_r2c_1d(static_cast<int>(n), in.get(), out.get(), FFTW_ESTIMATE));
  }
  std::copy(x.begin(), x.end(), in.get());
  plan->execute();
  std::vector<std::complex<double>> result(m);
  for (std::size_t i = 0; i < m; ++i) result[i] = {out[i][0], out[i][1]};
  return result;
}

double wavenumber(std::size_t index, std::size_t n, double length) {
  const auto signed_index = index <= n / 2 ? static_cast<double>(index)
                                           : static_cast<double>(index) - static_cast<double>(n);
  // The Nyquist bin of an even grid is taken as negative so the set is symmetric about 0.
  const double m = (n % 2 == 0 && index == n / 2) ? -static_cast<double>(index) : signed_index;
  return 2.0 * std::numbers::pi * m / length;
}

}  // namespace stochlab::fft
