#pragma once

#include <complex>
#include <span>
#include <vector>

namespace dcflowgen::detail {

// Thin RAII wrappers over FFTW's real transforms. Plan creation is
// serialized internally; execution is reentrant.

// Forward transform of n real values; returns n/2 + 1 coefficients
// X[j] = sum_k x[k] exp(-2 pi i j k / n).
std::vector<std::complex<double>> forward_real(std::span<const double> x);

// Inverse of forward_real for a length-n signal, including the 1/n factor.
std::vector<double> inverse_real(std::span<const std::complex<double>> spectrum,
                                 std::size_t n);

}  // namespace dcflowgen::detail
