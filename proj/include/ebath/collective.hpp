// Superradiance diagnostics of a decay-rate matrix (dtR, g2(0), coherent-state
// rate, correlation lengths) and Dicke-limit macrospin dynamics.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <vector>

#include "ebath/constants.hpp"
#include "ebath/decay.hpp"
#include "ebath/noise.hpp"
#include "ebath/params.hpp"
#include "ebath/quadrature.hpp"

namespace ebath {

// dR/dt at t=0 for the fully excited product state:
// sum_{n != m} gamma_nm gamma_mn - sum_n gamma_nn^2.
inline double dtR_excited(const DecayMatrix& m) {
    const auto n = m.rates.rows();
    double off = 0.0, diag = 0.0;
    for (long i = 0; i < n; ++i) {
        for (long j = 0; j < n; ++j) {
            if (i == j) continue;
            off += (m.rates(i, j) * m.rates(j, i)).real();
        }
        const double d = m.rates(i, i).real();
        diag += d * d;
    }
    return off - diag;
}

// Second-order correlation g2(0) of the first two emissions from the fully
// excited state, in closed matrix form:
// [sum_{n != m} (gamma_nn gamma_mm + gamma_nm gamma_mn)] / (sum_n gamma_nn)^2.
inline double g2_zero(const DecayMatrix& m) {
    const auto n = m.rates.rows();
    double tr = 0.0;
    for (long i = 0; i < n; ++i) tr += m.rates(i, i).real();
    if (tr == 0.0) throw validation_error("g2_zero: vanishing total rate");
    double num = 0.0;
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) {
            if (i == j) continue;
            num += m.rates(i, i).real() * m.rates(j, j).real() +
                   (m.rates(i, j) * m.rates(j, i)).real();
        }
    return num / (tr * tr);
}

// Initial decay rate for every dipole prepared in the +1 eigenstate of
// sigma^x: R = 1/2 sum_k gamma_kk + 1/2 sum_{n != m} gamma_nm.
inline double R_coherent(const DecayMatrix& m) {
    const auto n = m.rates.rows();
    double diag = 0.0, off = 0.0;
    for (long i = 0; i < n; ++i) {
        diag += m.rates(i, i).real();
        for (long j = 0; j < n; ++j)
            if (j != i) off += m.rates(i, j).real(); // imaginary parts cancel pairwise
    }
    return 0.5 * diag + 0.5 * off;
}

// Correlated-emission length from an isotropic noise profile C(q) supported
// on (q_lo, q_hi):  pi lambda^2 = [int q C^2 dq / 2pi] / [int q C dq / 2pi]^2.
template <class Profile>
double lambda_sr_from_profile(Profile&& c_of_q, double q_lo, double q_hi,
                              const std::vector<double>& knots = {},
                              const QuadratureSpec& spec = {}) {
    if (!(q_hi > q_lo) || !(q_lo >= 0.0))
        throw validation_error("lambda_sr_from_profile: need 0 <= q_lo < q_hi");
    std::vector<double> seams{q_lo};
    for (double k : knots)
        if (k > q_lo && k < q_hi) seams.push_back(k);
    seams.push_back(q_hi);
    std::sort(seams.begin(), seams.end());
    seams.erase(std::unique(seams.begin(), seams.end()), seams.end());
    const double denom =
        integrate_segments([&](double q) { return q * c_of_q(q) / cgs::two_pi; }, seams, spec)
            .value;
    if (denom == 0.0) throw validation_error("lambda_sr_from_profile: zero local density");
    const double num =
        integrate_segments(
            [&](double q) { const double c = c_of_q(q); return q * c * c / cgs::two_pi; }, seams,
            spec)
            .value;
    return std::sqrt(num / (denom * denom * cgs::pi));
}

// lambda_SR for the transverse-current noise at the dipole frequency.
inline double lambda_sr(const PhysicalParams& p, const QuadratureSpec& spec = {}) {
    p.validate();
    const double omega = p.dipole_frequency;
    const auto w = particle_hole_window(p, omega);
    const auto knots = noise_support_knots(p, omega);
    std::vector<double> interior(knots.begin() + 1, knots.end() - 1);
    return lambda_sr_from_profile([&](double q) { return oersted_noise(p, omega, q); }, w.q_lo,
                                  w.q_hi, interior, spec);
}

// Homogeneous low-density estimate dtR = N gamma0^2 (n pi lambda_SR^2 - 1).
inline double dtR_homogeneous(double n_density, int n_dipoles, double gamma0, double lambda_sr_val) {
    return static_cast<double>(n_dipoles) * gamma0 * gamma0 *
           (n_density * cgs::pi * lambda_sr_val * lambda_sr_val - 1.0);
}

// Area scaling of the coherent-state rate for gamma(r) = gamma0 (r0/r)^alpha
// above r0: R ~ N pi/(2-alpha) n gamma0 A^{1-alpha/2} r0^alpha for alpha < 2,
// else the independent-rate value N gamma0 / 2.
inline double R_area_scaling(double alpha, double r0, double area, double n_density,
                             int n_dipoles, double gamma0) {
    if (!(r0 > 0.0) || !(area > r0 * r0))
        throw validation_error("R_area_scaling: require r0 > 0 and A > r0^2");
    const double nn = static_cast<double>(n_dipoles);
    if (alpha >= 2.0) return 0.5 * nn * gamma0;
    return nn * cgs::pi / (2.0 - alpha) * n_density * gamma0 *
           std::pow(area, 1.0 - 0.5 * alpha) * std::pow(r0, alpha);
}

// Spacing threshold for coherent-state superradiance:
// sqrt(lambda_F v_F / Delta) close to the sample, sqrt(d v_F / Delta) beyond.
inline double lambda_sr_prime(const PhysicalParams& p) {
    p.validate();
    const double lf = p.lambda_fermi();
    const double scale = p.height < lf ? lf : p.height;
    return std::sqrt(scale * p.fermi_velocity / p.dipole_frequency);
}

struct MacrospinTrajectory {
    std::vector<double> times; // s
    std::vector<double> sx, sy, sz; // hbar units, |S| = N/2
    int n_dipoles = 0;
    double gamma0 = 0.0; // Hz
    double delta = 0.0;  // rad/s
};

// Closed-form Dicke-limit solution, initial state fully polarized along x.
inline MacrospinTrajectory macrospin_exact(int n, double gamma0, double delta,
                                           const std::vector<double>& t_grid) {
    if (n < 1) throw validation_error("macrospin_exact: N must be >= 1");
    MacrospinTrajectory tr;
    tr.times = t_grid;
    tr.n_dipoles = n;
    tr.gamma0 = gamma0;
    tr.delta = delta;
    const double s = 0.5 * static_cast<double>(n);
    tr.sx.reserve(t_grid.size());
    tr.sy.reserve(t_grid.size());
    tr.sz.reserve(t_grid.size());
    for (double t : t_grid) {
        const double sech = 1.0 / std::cosh(0.5 * n * gamma0 * t);
        tr.sx.push_back(s * std::cos(delta * t) * sech);
        tr.sy.push_back(-s * std::sin(delta * t) * sech);
        tr.sz.push_back(-s * std::tanh(0.5 * n * gamma0 * t));
    }
    return tr;
}

namespace detail {

// Landau-Lifshitz right-hand side in hbar units:
// dS/dt = -Delta z x S - gamma0 S x (z x S).
inline void ll_rhs(double delta, double gamma0, const double s[3], double out[3]) {
    const double zx_x = -s[1], zx_y = s[0], zx_z = 0.0;
    out[0] = -delta * zx_x - gamma0 * (s[1] * zx_z - s[2] * zx_y);
    out[1] = -delta * zx_y - gamma0 * (s[2] * zx_x - s[0] * zx_z);
    out[2] = -delta * zx_z - gamma0 * (s[0] * zx_y - s[1] * zx_x);
}

} // namespace detail

// Dormand-Prince 5(4) integration of the mean-field Landau-Lifshitz equation
// with adaptive step control at local tolerance 1e-10 (relative to N/2).
inline MacrospinTrajectory macrospin_ode(int n, double gamma0, double delta,
                                         const std::vector<double>& t_grid,
                                         double rel_tol = 1e-10) {
    if (n < 1) throw validation_error("macrospin_ode: N must be >= 1");
    if (t_grid.empty()) throw validation_error("macrospin_ode: empty time grid");
    for (size_t i = 1; i < t_grid.size(); ++i)
        if (!(t_grid[i] > t_grid[i - 1]))
            throw validation_error("macrospin_ode: time grid must increase");

    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    const double scale = 0.5 * static_cast<double>(n);
    double s[3] = {scale, 0.0, 0.0};
    double t = 0.0;
    const double t_end = t_grid.back();
    const double rate = std::max(std::abs(delta), std::abs(gamma0) * n);
    double h = rate > 0.0 ? 0.1 / rate : (t_end > 0 ? 0.1 * t_end : 1.0);

    MacrospinTrajectory tr;
    tr.times = t_grid;
    tr.n_dipoles = n;
    tr.gamma0 = gamma0;
    tr.delta = delta;
    size_t target = 0;
    double k1[3];
    detail::ll_rhs(delta, gamma0, s, k1);
    // emit any t = 0 samples
    while (target < t_grid.size() && t_grid[target] <= 0.0) {
        tr.sx.push_back(s[0]); tr.sy.push_back(s[1]); tr.sz.push_back(s[2]);
        ++target;
    }

    auto dense_out = [&](const double y0[3], const double k_lo[3], const double y1[3],
                         const double k_hi[3], double hh, double theta, double out[3]) {
        // cubic Hermite between accepted steps (enough at 1e-10 step tolerance)
        const double t2 = theta * theta, t3 = t2 * theta;
        const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + theta;
        const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
        for (int i = 0; i < 3; ++i)
            out[i] = h00 * y0[i] + h10 * hh * k_lo[i] + h01 * y1[i] + h11 * hh * k_hi[i];
    };

    int rejected_in_row = 0;
    while (t < t_end && target < t_grid.size()) {
        if (t + h > t_end) h = t_end - t;
        double k2[3], k3[3], k4[3], k5[3], k6[3], k7[3], y[3], ynew[3];
        auto stage = [&](double kk[3], double cc, std::initializer_list<std::pair<const double*, double>> terms) {
            (void)cc;
            for (int i = 0; i < 3; ++i) {
                double acc = s[i];
                for (const auto& [kv, aa] : terms) acc += h * aa * kv[i];
                y[i] = acc;
            }
            detail::ll_rhs(delta, gamma0, y, kk);
        };
        stage(k2, c2, {{k1, a21}});
        stage(k3, c3, {{k1, a31}, {k2, a32}});
        stage(k4, c4, {{k1, a41}, {k2, a42}, {k3, a43}});
        stage(k5, c5, {{k1, a51}, {k2, a52}, {k3, a53}, {k4, a54}});
        stage(k6, 1.0, {{k1, a61}, {k2, a62}, {k3, a63}, {k4, a64}, {k5, a65}});
        for (int i = 0; i < 3; ++i)
            ynew[i] = s[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        detail::ll_rhs(delta, gamma0, ynew, k7);
        double err = 0.0;
        for (int i = 0; i < 3; ++i) {
            const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                  e6 * k6[i] + e7 * k7[i]);
            err = std::max(err, std::abs(e));
        }
        const double tol = rel_tol * scale;
        if (err <= tol || h <= 1e-15 * std::max(1.0, std::abs(t))) {
            // accept; emit dense output for targets inside (t, t+h]
            while (target < t_grid.size() && t_grid[target] <= t + h) {
                const double theta = (t_grid[target] - t) / h;
                double out[3];
                dense_out(s, k1, ynew, k7, h, theta, out);
                tr.sx.push_back(out[0]); tr.sy.push_back(out[1]); tr.sz.push_back(out[2]);
                ++target;
            }
            t += h;
            for (int i = 0; i < 3; ++i) s[i] = ynew[i];
            for (int i = 0; i < 3; ++i) k1[i] = k7[i];
            rejected_in_row = 0;
        } else if (++rejected_in_row > 60) {
            throw convergence_error("macrospin_ode: step size underflow at t=" + std::to_string(t),
                                    s[2], err);
        }
        const double fac = err > 0.0 ? 0.9 * std::pow(tol / err, 0.2) : 5.0;
        h *= std::min(5.0, std::max(0.2, fac));
        if (h <= 0.0 || !std::isfinite(h))
            throw convergence_error("macrospin_ode: invalid step size", s[2], err);
    }
    while (target < t_grid.size()) { // trailing samples exactly at t_end
        tr.sx.push_back(s[0]); tr.sy.push_back(s[1]); tr.sz.push_back(s[2]);
        ++target;
    }
    return tr;
}

} // namespace ebath
