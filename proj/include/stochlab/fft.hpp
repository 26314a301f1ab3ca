#pragma once

#include <complex>
#include <span>
#include <vector>

namespace stochlab::fft {

// Thin wrappers over FFTW. Unnormalized forward transform X_k = sum_n x_n e^{-2 pi i k n / N};
// inverse() applies the 1/N factor so inverse(forward(x)) == x.
std::vector<std::complex<double>> forward(std::span<const std::complex<double>> x);
std::vector<std::complex<double>> inverse(std::span<const std::complex<double>> x);
// Real input, returns the N/2 + 1 non-negative-frequency coefficients.
std::vector<std::complex<double>> forward_real(std::span<const double> x);

// Signed angular wavenumber of FFT bin `index` on a periodic cell of length `length`.
double wavenumber(std::size_t index, std::size_t n, double length);

}  // namespace stochlab::fft
