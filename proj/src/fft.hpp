#pragma once

#include <complex>
#include <vector>

namespace mfg::detail {

// Unnormalized forward transforms, sum_j f_j e^{-2 pi i k j / n}.
// Output holds the n/2+1 (resp. n x (n/2+1), row-major) non-redundant modes.
std::vector<std::complex<double>> rfft(const std::vector<double>& f);
std::vector<std::complex<double>> rfft2(const std::vector<double>& f, int n);

}  // namespace mfg::detail
