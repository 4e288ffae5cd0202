// Radix-2 complex FFT. Forward convention matches the correlator transform
// C(omega) = integral dt e^{+i omega t} C(t): forward bins carry e^{+i 2pi jk/n}.
#pragma once

#include <complex>
#include <vector>

#include "ebath/constants.hpp"
#include "ebath/errors.hpp"

namespace ebath {

namespace detail {

inline void fft_radix2(std::vector<std::complex<double>>& a, double sign) {
    const size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw validation_error("fft: length must be a power of two");
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * cgs::two_pi / static_cast<double>(len);
        const std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (size_t j = 0; j < len / 2; ++j) {
                const auto u = a[i + j];
                const auto v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

} // namespace detail

inline std::vector<std::complex<double>> fft_forward(std::vector<std::complex<double>> samples) {
    detail::fft_radix2(samples, +1.0);
    return samples;
}

inline std::vector<std::complex<double>> fft_inverse(std::vector<std::complex<double>> samples) {
    detail::fft_radix2(samples, -1.0);
    const double inv = 1.0 / static_cast<double>(samples.size());
    for (auto& x : samples) x *= inv;
    return samples;
}

// Continuous-transform helper on the symmetric grid
//   t_k = (k - n/2) dt,  omega_j = (j - n/2) domega,  domega = 2 pi/(n dt):
// returns S(omega_j) ~= dt sum_k e^{+i omega_j t_k} s(t_k).
inline std::vector<std::complex<double>> continuous_transform(
    const std::vector<std::complex<double>>& samples, double dt) {
    const size_t n = samples.size();
    std::vector<std::complex<double>> shifted(n);
    for (size_t k = 0; k < n; ++k) shifted[k] = samples[(k + n / 2) % n];
    auto spec = fft_forward(std::move(shifted));
    std::vector<std::complex<double>> out(n);
    for (size_t j = 0; j < n; ++j) out[j] = spec[(j + n / 2) % n] * dt;
    return out;
}

} // namespace ebath
