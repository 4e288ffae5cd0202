// Nonlocal decay-rate matrix gamma_nm built from the Oersted magnetic noise
// at the dipole frequency, its eigendecomposition, single-excitation
// evolution, and disorder statistics.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include "ebath/constants.hpp"
#include "ebath/eigensolve.hpp"
#include "ebath/ensemble.hpp"
#include "ebath/hankel.hpp"
#include "ebath/noise.hpp"
#include "ebath/parallel.hpp"
#include "ebath/params.hpp"

namespace ebath {

// gamma(r) = (gamma_eff/2)^2 (1/2pi) int q dq J0(q r) C^{-+}(Delta, q), Hz.
// The q-integral runs over the compact particle-hole support with the branch
// kinks as explicit breakpoints.
inline double gamma_r(const PhysicalParams& p, double r, const QuadratureSpec& spec = {}) {
    p.validate();
    if (r < 0.0) throw validation_error("gamma_r: r must be >= 0");
    const double omega = p.dipole_frequency;
    const double ge = p.gyro_decay();
    const double pref = 0.25 * ge * ge / cgs::two_pi;
    HankelOptions opt;
    opt.knots = noise_support_knots(p, omega);
    const double q_max = opt.knots.back();
    opt.knots.pop_back();
    try {
        return pref * integrate_hankel_damped(
                          [&](double q) { return q * oersted_noise(p, omega, q); }, 0, r, 0.0,
                          q_max, spec, opt);
    } catch (const convergence_error& e) {
        throw convergence_error("gamma_r(r=" + std::to_string(r) + ", Delta=" +
                                    std::to_string(omega) + "): " + e.what(),
                                pref * e.best_estimate, pref * e.error_estimate);
    }
}

// Radial interpolation table for gamma(r) on a log grid, phase-adaptive so
// the residual 2 k_F ripple at large r stays resolved by the local cubic.
class RadialRateTable {
public:
    RadialRateTable(const PhysicalParams& p, double r_min, double r_max, unsigned threads = 0,
                    const QuadratureSpec& spec = {}) {
        p.validate();
        if (!(r_min > 0.0) || !(r_max > r_min))
            throw validation_error("RadialRateTable: need 0 < r_min < r_max");
        gamma0_ = gamma_r(p, 0.0, spec);
        const double q_hi = particle_hole_window(p, p.dipole_frequency).q_hi;
        const double phase_span = q_hi * r_max;
        size_t n = static_cast<size_t>(phase_span / 0.15);
        n = std::min<size_t>(std::max<size_t>(n, 2048), 32768);
        t_min_ = std::log(r_min);
        dt_ = (std::log(r_max) - t_min_) / static_cast<double>(n - 1);
        values_.assign(n, 0.0);
        QuadratureSpec node_spec = spec;
        node_spec.abs_tol = std::max(spec.abs_tol, 1e-12 * std::abs(gamma0_) /
                                                       (0.25 * p.gyro_decay() * p.gyro_decay() /
                                                        cgs::two_pi));
        std::vector<double> rs(n);
        for (size_t i = 0; i < n; ++i) rs[i] = std::exp(t_min_ + dt_ * static_cast<double>(i));
        parallel_for(n, threads, [&](size_t i) {
            values_[i] = gamma_r(p, rs[i], node_spec);
        });
        r_min_ = r_min;
        r_max_ = r_max;
    }

    double gamma0() const { return gamma0_; }

    double operator()(double r) const {
        if (r <= 0.0) return gamma0_;
        if (r < r_min_) {
            // gamma(r) is even and smooth at the origin: quadratic blend.
            const double f = r / r_min_;
            return gamma0_ + (values_.front() - gamma0_) * f * f;
        }
        if (r > r_max_)
            throw validation_error("RadialRateTable: r beyond tabulated range");
        const double t = (std::log(r) - t_min_) / dt_;
        const auto n = static_cast<long>(values_.size());
        long i1 = static_cast<long>(std::floor(t));
        i1 = std::max(1L, std::min(n - 3, i1));
        const double u = t - static_cast<double>(i1);
        // 4-point Lagrange cubic on the uniform log grid
        const double ym = values_[static_cast<size_t>(i1 - 1)];
        const double y0 = values_[static_cast<size_t>(i1)];
        const double y1 = values_[static_cast<size_t>(i1 + 1)];
        const double y2 = values_[static_cast<size_t>(i1 + 2)];
        const double a = -ym / 6.0 + y0 / 2.0 - y1 / 2.0 + y2 / 6.0;
        const double b = ym / 2.0 - y0 + y1 / 2.0;
        const double c = -ym / 3.0 - y0 / 2.0 + y1 - y2 / 6.0;
        return ((a * u + b) * u + c) * u + y0;
    }

private:
    double gamma0_ = 0.0;
    double r_min_ = 0.0, r_max_ = 0.0;
    double t_min_ = 0.0, dt_ = 0.0;
    std::vector<double> values_;
};

struct DecayMatrix {
    Eigen::MatrixXcd rates;   // Hz, Hermitian
    double gamma0 = 0.0;      // common diagonal for identical dipoles
    std::optional<Eigen::VectorXd> spectrum; // ascending eigenvalues, Hz
    std::optional<Eigen::MatrixXcd> modes;
    int clamped = 0;          // eigenvalues lifted from [-1e-8 gamma0, 0) to 0

    size_t size() const { return static_cast<size_t>(rates.rows()); }

    void ensure_spectrum() {
        if (spectrum) return;
        const auto eig = hermitian_eigen(rates);
        Eigen::VectorXd ev = eig.eigenvalues;
        const double floor = -1e-8 * std::abs(gamma0);
        for (long i = 0; i < ev.size(); ++i) {
            if (ev[i] < floor)
                throw validation_error(
                    "DecayMatrix: eigenvalue " + std::to_string(ev[i]) +
                    " below PSD floor; quadrature or interpolation misconfigured");
            if (ev[i] < 0.0) {
                ev[i] = 0.0;
                ++clamped;
            }
        }
        spectrum = ev;
        modes = eig.eigenvectors;
    }
};

namespace detail {

inline double pair_distance(const Point2& a, const Point2& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

// General-orientation matrix element: numerical azimuthal integral of the
// orientation factor against the scalar Oersted kernel.
inline std::complex<double> gamma_pair_oriented(const PhysicalParams& p, const Triad& tn,
                                                const Triad& tm, double rx, double ry,
                                                const QuadratureSpec& spec) {
    const double omega = p.dipole_frequency;
    const double ge = p.gyro_decay();
    const double pref = 0.25 * ge * ge / (cgs::two_pi * cgs::two_pi);
    const double r = std::hypot(rx, ry);
    const auto knots = noise_support_knots(p, omega);

    auto azimuthal = [&](double q, bool imag_part) {
        const size_t m = [&] {
            const double need = 2.0 * q * r + 32.0;
            size_t mm = 32;
            while (static_cast<double>(mm) < need && mm < (1u << 16)) mm <<= 1;
            return mm;
        }();
        std::complex<double> acc = 0.0;
        for (size_t j = 0; j < m; ++j) {
            const double phi = cgs::two_pi * static_cast<double>(j) / static_cast<double>(m);
            const double qhx = std::cos(phi), qhy = std::sin(phi);
            const std::complex<double> f = orientation_factor(tn, tm, qhx, qhy);
            acc += f * std::polar(1.0, q * (qhx * rx + qhy * ry));
        }
        acc *= cgs::two_pi / static_cast<double>(m);
        return imag_part ? acc.imag() : acc.real();
    };

    auto component = [&](bool imag_part) {
        return integrate_segments(
                   [&](double q) {
                       return q * oersted_noise(p, omega, q) * azimuthal(q, imag_part);
                   },
                   knots, spec)
            .value;
    };
    return pref * std::complex<double>(component(false), component(true));
}

} // namespace detail

// Decay matrix gamma_nm = gamma(r_n - r_m). For z-aligned ensembles the
// radial profile is either integrated directly per pair (small N) or looked
// up from a RadialRateTable (large N); mixed orientations take the slow
// azimuthal path.
inline DecayMatrix build_matrix(const DipoleEnsemble& ens, const PhysicalParams& p,
                                const QuadratureSpec& spec = {}, unsigned threads = 0) {
    ens.validate();
    p.validate();
    const auto n = static_cast<long>(ens.size());
    DecayMatrix out;
    out.rates.resize(n, n);

    if (ens.all_aligned_z()) {
        const double g0 = gamma_r(p, 0.0, spec);
        double rmin = 0.0, rmax = 0.0;
        for (long i = 0; i < n; ++i)
            for (long j = i + 1; j < n; ++j) {
                const double r = detail::pair_distance(ens.positions[static_cast<size_t>(i)],
                                                       ens.positions[static_cast<size_t>(j)]);
                if (r > 0.0 && (rmin == 0.0 || r < rmin)) rmin = r;
                rmax = std::max(rmax, r);
            }
        const size_t pairs = static_cast<size_t>(n) * (static_cast<size_t>(n) - 1) / 2;
        std::optional<RadialRateTable> table;
        if (rmax > 0.0 && pairs > 1024)
            table.emplace(p, 0.5 * rmin, 1.02 * rmax, threads, spec);

        QuadratureSpec pair_spec = spec;
        pair_spec.abs_tol = std::max(spec.abs_tol, 1e-12 * std::abs(g0) /
                                                       (0.25 * p.gyro_decay() * p.gyro_decay() /
                                                        cgs::two_pi));
        std::vector<double> rows(static_cast<size_t>(n) * static_cast<size_t>(n), 0.0);
        parallel_for(static_cast<size_t>(n), threads, [&](size_t i) {
            for (size_t j = i; j < static_cast<size_t>(n); ++j) {
                double v;
                if (i == j) v = g0;
                else {
                    const double r = detail::pair_distance(ens.positions[i], ens.positions[j]);
                    v = r == 0.0 ? g0 : (table ? (*table)(r) : gamma_r(p, r, pair_spec));
                }
                rows[i * static_cast<size_t>(n) + j] = v;
            }
        });
        for (long i = 0; i < n; ++i)
            for (long j = i; j < n; ++j) {
                const double v = rows[static_cast<size_t>(i) * static_cast<size_t>(n) +
                                      static_cast<size_t>(j)];
                out.rates(i, j) = v;
                out.rates(j, i) = v;
            }
        out.gamma0 = g0;
        return out;
    }

    // Mixed orientations: O(N^2) azimuthal quadratures.
    std::vector<std::complex<double>> vals(static_cast<size_t>(n) * static_cast<size_t>(n));
    parallel_for(static_cast<size_t>(n), threads, [&](size_t i) {
        for (size_t j = i; j < static_cast<size_t>(n); ++j) {
            const double rx = ens.positions[i].x - ens.positions[j].x;
            const double ry = ens.positions[i].y - ens.positions[j].y;
            vals[i * static_cast<size_t>(n) + j] = detail::gamma_pair_oriented(
                p, ens.orientations[i], ens.orientations[j], rx, ry, spec);
        }
    });
    for (long i = 0; i < n; ++i)
        for (long j = i; j < n; ++j) {
            const auto v = vals[static_cast<size_t>(i) * static_cast<size_t>(n) +
                                static_cast<size_t>(j)];
            out.rates(i, j) = v;
            out.rates(j, i) = std::conj(v);
        }
    double diag = 0.0;
    for (long i = 0; i < n; ++i) diag += out.rates(i, i).real();
    out.gamma0 = diag / static_cast<double>(n);
    return out;
}

// Single-excitation sector: dpsi_m/dt = -1/2 sum_n gamma_nm psi_n, i.e.
// psi(t) = exp(-gamma^T t / 2) psi(0); for Hermitian gamma the propagator is
// conj(U) exp(-Lambda t/2) U^T.
struct EvolutionResult {
    Eigen::VectorXcd psi;
    double survival; // P1(t)
};

inline EvolutionResult single_excitation_evolve(DecayMatrix& m, const Eigen::VectorXcd& psi0,
                                                double t) {
    if (psi0.size() != m.rates.rows())
        throw validation_error("single_excitation_evolve: dimension mismatch");
    if (std::abs(psi0.norm() - 1.0) > 1e-8)
        throw validation_error("single_excitation_evolve: psi0 must be normalized");
    m.ensure_spectrum();
    const auto& modes = *m.modes;
    const auto& ev = *m.spectrum;
    Eigen::VectorXcd coeff = modes.transpose() * psi0;
    for (long k = 0; k < coeff.size(); ++k) coeff[k] *= std::exp(-0.5 * ev[k] * t);
    const Eigen::VectorXcd psi = modes.conjugate() * coeff;
    return {psi, psi.squaredNorm()};
}

struct SubradianceStats {
    double spacing_over_lambda_f = 0.0;
    double mean_min_over_gamma0 = 0.0;
    double mean_min_stderr = 0.0;
    double dark_fraction = 0.0;
    double dark_fraction_stderr = 0.0;
    int realizations = 0;
    double threshold = 0.0;
};

// Disorder sweep over mean spacings: N dipoles uniform in a square of side
// sqrt(N) a (density a^-2), eigenvalue statistics averaged over seeded
// realizations. Deterministic for a fixed seed regardless of thread count.
inline std::vector<SubradianceStats> disorder_sweep(const PhysicalParams& p, int n_dipoles,
                                                    const std::vector<double>& spacings_lf,
                                                    int realizations, double threshold,
                                                    uint64_t seed, unsigned threads = 0,
                                                    const QuadratureSpec& spec = {}) {
    if (n_dipoles < 2) throw validation_error("disorder_sweep: N must be >= 2");
    if (realizations < 1) throw validation_error("disorder_sweep: need >= 1 realizations");
    p.validate();
    const double lf = p.lambda_fermi();
    std::vector<SubradianceStats> out;
    const double g0 = gamma_r(p, 0.0, spec);

    for (size_t is = 0; is < spacings_lf.size(); ++is) {
        const double a = spacings_lf[is] * lf;
        const double side = std::sqrt(static_cast<double>(n_dipoles)) * a;
        const double rmax = side * std::sqrt(2.0);
        RadialRateTable table(p, std::min(1e-3 * lf, 1e-3 * a), 1.02 * rmax, threads, spec);

        std::vector<double> gmin(static_cast<size_t>(realizations));
        std::vector<double> dark(static_cast<size_t>(realizations));
        std::vector<int> clamp_counts(static_cast<size_t>(realizations), 0);
        parallel_for(static_cast<size_t>(realizations), threads, [&](size_t rep) {
            SeededStream stream{seed, is * static_cast<size_t>(realizations) + rep};
            const auto pts = uniform_points(stream, n_dipoles, side);
            const auto nn = static_cast<long>(pts.size());
            Eigen::MatrixXd mat(nn, nn);
            for (long i = 0; i < nn; ++i) {
                mat(i, i) = g0;
                for (long j = i + 1; j < nn; ++j) {
                    const double r = detail::pair_distance(pts[static_cast<size_t>(i)],
                                                           pts[static_cast<size_t>(j)]);
                    const double v = table(r);
                    mat(i, j) = v;
                    mat(j, i) = v;
                }
            }
            const auto eig = symmetric_eigen(mat);
            const double floor = -1e-8 * g0;
            int nclamp = 0;
            double mn = eig.eigenvalues[0];
            if (mn < floor)
                throw validation_error("disorder_sweep: eigenvalue " + std::to_string(mn) +
                                       " below PSD floor (realization " + std::to_string(rep) +
                                       ")");
            int below = 0;
            for (long k = 0; k < eig.eigenvalues.size(); ++k) {
                double v = eig.eigenvalues[k];
                if (v < 0.0) { v = 0.0; ++nclamp; }
                if (v < threshold * g0) ++below;
            }
            gmin[rep] = std::max(mn, 0.0) / g0;
            dark[rep] = static_cast<double>(below) / static_cast<double>(nn);
            clamp_counts[rep] = nclamp;
        });

        auto mean_se = [](const std::vector<double>& xs) {
            double mean = 0.0;
            for (double x : xs) mean += x;
            mean /= static_cast<double>(xs.size());
            double var = 0.0;
            for (double x : xs) var += (x - mean) * (x - mean);
            var /= std::max<size_t>(1, xs.size() - 1) * static_cast<double>(xs.size());
            return std::pair<double, double>(mean, std::sqrt(var));
        };
        const auto [gm, gse] = mean_se(gmin);
        const auto [df, dse] = mean_se(dark);
        out.push_back({spacings_lf[is], gm, gse, df, dse, realizations, threshold});
    }
    return out;
}

} // namespace ebath
