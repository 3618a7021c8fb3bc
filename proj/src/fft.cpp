#include "fft.hpp"

#include <fftw3.h>

#include <mutex>

namespace mfg::detail {

namespace {
// fftw planning is not thread safe; execution on distinct plans is
std::mutex plan_mutex;
}  // namespace

std::vector<std::complex<double>> rfft(const std::vector<double>& f) {
  int n = static_cast<int>(f.size());
  std::vector<double> in(f);
  std::vector<std::complex<double>> out(n / 2 + 1);
  fftw_plan p;
  {
    std::lock_guard<std::mutex> lock(plan_mutex);
    p = fftw_plan_dft_r2c_1d(n, in.data(), reinterpret_cast<fftw_complex*>(out.data()),
                             FFTW_ESTIMATE);
  }
  fftw_execute(p);
  {
    std::lock_guard<std::mutex> lock(plan_mutex);
    fftw_destroy_plan(p);
  }
  return out;
}

std::vector<std::complex<double>> rfft2(const std::vector<double>& f, int n) {
  std::vector<double> in(f);
  std::vector<std::complex<double>> out(static_cast<size_t>(n) * (n / 2 + 1));
  fftw_plan p;
  {
    std::lock_guard<std::mutex> lock(plan_mutex);
    p = fftw_plan_dft_r2c_2d(n, n, in.data(), reinterpret_cast<fftw_complex*>(out.data()),
                             FFTW_ESTIMATE);
  }
  fftw_execute(p);
  {
    std::lock_guard<std::mutex> lock(plan_mutex);
    fftw_destroy_plan(p);
  }
  return out;
}

}  // namespace mfg::detail
