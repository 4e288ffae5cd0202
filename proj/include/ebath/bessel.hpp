// Bessel functions of the first kind J0, J1, J2 in double precision, plus
// their positive zeros. Accuracy target: 1e-12 absolute for 0 <= x <= 1e4.
//
// Three regimes:
//   x < 10   ascending series (cancellation still benign),
//   x < 18   Miller backward recurrence with J0 + 2*sum J_{2k} = 1,
//   x >= 18  Hankel asymptotic expansion (P, Q to k = 16).
#pragma once

#include <array>
#include <cmath>

#include "ebath/constants.hpp"
#include "ebath/errors.hpp"

namespace ebath {

namespace detail {

inline double bessel_series(int n, double x) {
    double t = 1.0;
    for (int k = 1; k <= n; ++k) t *= 0.5 * x / k;
    double sum = t;
    const double x2 = 0.25 * x * x;
    for (int k = 1; k < 80; ++k) {
        t *= -x2 / (static_cast<double>(k) * (k + n));
        sum += t;
        if (std::abs(t) < 1e-18 * std::abs(sum) + 1e-300) break;
    }
    return sum;
}

inline std::array<double, 3> bessel_miller(double x) {
    int m = static_cast<int>(x + 16.0 + 14.0 * std::cbrt(x));
    if (m % 2) ++m;
    double jp = 0.0, j = 1e-30, norm = 0.0;
    std::array<double, 3> out{0.0, 0.0, 0.0};
    for (int k = m; k >= 1; --k) {
        const double jm = (2.0 * k / x) * j - jp;
        jp = j;
        j = jm;
        if (k - 1 <= 2) out[k - 1] = j;
        if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * j;
        if (std::abs(j) > 1e250) {
            j *= 1e-250; jp *= 1e-250; norm *= 1e-250;
            for (double& o : out) o *= 1e-250;
        }
    }
    norm += j;
    for (double& o : out) o /= norm;
    return out;
}

// Hankel asymptotic expansion, |error| < 1e-14 for x >= 18.
inline double bessel_asymptotic(int n, double x) {
    const double mu = 4.0 * n * n;
    double p = 1.0, q = 0.0, term = 1.0;
    for (int k = 1; k <= 16; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= (mu - odd * odd) / (k * 8.0 * x);
        if (k % 2) q += (((k - 1) / 2) % 2 ? -term : term);
        else       p += ((k / 2) % 2 ? -term : term);
    }
    const double w = x - 0.5 * n * cgs::pi - 0.25 * cgs::pi;
    return std::sqrt(2.0 / (cgs::pi * x)) * (p * std::cos(w) - q * std::sin(w));
}

} // namespace detail

inline double bessel_j(int n, double x) {
    if (n < 0 || n > 2) throw validation_error("bessel_j: order must be 0, 1 or 2");
    if (x < 0.0) throw validation_error("bessel_j: negative argument");
    if (x < 10.0) return detail::bessel_series(n, x);
    if (x < 18.0) return detail::bessel_miller(x)[static_cast<size_t>(n)];
    return detail::bessel_asymptotic(n, x);
}

inline double bessel_j0(double x) { return bessel_j(0, x); }
inline double bessel_j1(double x) { return bessel_j(1, x); }
inline double bessel_j2(double x) { return bessel_j(2, x); }

// k-th positive zero of J_n (k = 1, 2, ...), via McMahon's expansion refined
// by Newton iterations. J0' = -J1, J1' = J0 - J1/x, J2' = J1 - 2 J2/x.
inline double bessel_jn_zero(int n, int k) {
    if (n < 0 || n > 2) throw validation_error("bessel_jn_zero: order must be 0, 1 or 2");
    if (k < 1) throw validation_error("bessel_jn_zero: k must be >= 1");
    const double mu = 4.0 * n * n;
    const double b = (k + 0.5 * n - 0.25) * cgs::pi;
    const double b8 = 8.0 * b;
    double x = b - (mu - 1.0) / b8
        - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * b8 * b8 * b8);
    for (int it = 0; it < 4; ++it) {
        const double j = bessel_j(n, x);
        double dj;
        if (n == 0) dj = -bessel_j(1, x);
        else if (n == 1) dj = bessel_j(0, x) - bessel_j(1, x) / x;
        else dj = bessel_j(1, x) - 2.0 * bessel_j(2, x) / x;
        const double step = j / dj;
        x -= step;
        if (std::abs(step) < 1e-14 * x) break;
    }
    return x;
}

} // namespace ebath
