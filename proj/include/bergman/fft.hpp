#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace bergman {

using cplx = std::complex<double>;

// Values sum_k a_k e^{2 pi i j k / L}, j = 0..L-1. Exponents >= L are folded,
// so the samples are exact for any polynomial.
std::vector<cplx> circle_samples(const std::vector<cplx>& coeffs, std::size_t L);

// (1/L) sum_j f_j e^{-2 pi i j k / L}, k = 0..L-1.
std::vector<cplx> fourier_coefficients(const std::vector<cplx>& samples);

std::size_t next_pow2(std::size_t n);

}  // namespace bergman
