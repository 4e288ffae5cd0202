// Exact 2D transverse current-current response, Kubo coefficient, the
// chi_{alpha beta}(rho, phi, omega) response to a decaying macrospin, time
// domain synthesis of the emitted current wave, and the static
// Landau-diamagnetism limit.
#pragma once

#include <array>
#include <complex>
#include <vector>

#include "ebath/collective.hpp"
#include "ebath/constants.hpp"
#include "ebath/fft.hpp"
#include "ebath/hankel.hpp"
#include "ebath/parallel.hpp"
#include "ebath/params.hpp"

namespace ebath {

using cplx = std::complex<double>;

// ---------------------------------------------------------------------------
// g(x) and g'(x)

namespace detail {

// Asymptotic tail of g for |x| > 25: g(x) = -sign(x) sum c_k / |x|^(2k-1).
inline constexpr double g_tail_coeff[5] = {3.0 / 8, 1.0 / 16, 3.0 / 128, 3.0 / 256, 7.0 / 1024};

inline double g_tail(double ax) {
    const double u = 1.0 / (ax * ax);
    double acc = 0.0, p = 1.0 / ax;
    for (double c : g_tail_coeff) { acc += c * p; p *= u; }
    return -acc;
}

// (1/a^k - 1/b^k) without cancellation, given delta = b - a > 0.
inline double inv_pow_diff(double a, double b, double delta, int k) {
    double num = 0.0; // b^k - a^k = delta * sum a^j b^{k-1-j}
    double aj = 1.0;
    for (int j = 0; j < k; ++j) {
        double bj = 1.0;
        for (int i = 0; i < k - 1 - j; ++i) bj *= b;
        num += aj * bj;
        aj *= a;
    }
    num *= delta;
    double den = 1.0;
    for (int i = 0; i < k; ++i) den *= a * b;
    return num / den;
}

// g(b) - g(a) for 25 < a < b via the tail series, cancellation-free.
inline double g_tail_diff(double a, double b, double delta) {
    double acc = 0.0;
    int k = 1;
    for (double c : g_tail_coeff) {
        acc += c * inv_pow_diff(a, b, delta, k);
        k += 2;
    }
    return acc; // = g(b) - g(a), both on the -series branch
}

} // namespace detail

// Piecewise response function:
// Re g = x^3 - 3x/2 - (x^2-1)^{3/2} Theta(x^2-1) sign(x),
// Im g = (1-x^2)^{3/2} Theta(1-x^2).
inline cplx g_complex(double x) {
    const double ax = std::abs(x);
    if (ax > 25.0) return {std::copysign(1.0, x) * detail::g_tail(ax), 0.0};
    double re = x * x * x - 1.5 * x;
    double im = 0.0;
    const double disc = x * x - 1.0;
    if (disc > 0.0) re -= std::copysign(std::pow(disc, 1.5), x);
    else im = std::pow(-disc, 1.5);
    return {re, im};
}

// dg/dx (one-sided at |x| = 1):
// Re g' = 3x^2 - 3/2 - 3|x| sqrt(x^2-1) Theta(x^2-1),
// Im g' = -3x sqrt(1-x^2) Theta(1-x^2).
inline cplx g_prime(double x) {
    const double ax = std::abs(x);
    if (ax > 25.0) {
        const double u = 1.0 / (ax * ax);
        return {u * (3.0 / 8 + u * (3.0 / 16 + u * 15.0 / 128)), 0.0};
    }
    double re = 3.0 * x * x - 1.5;
    double im = 0.0;
    const double disc = x * x - 1.0;
    if (disc > 0.0) re -= 3.0 * ax * std::sqrt(disc);
    else im = -3.0 * x * std::sqrt(-disc);
    return {re, im};
}

// ---------------------------------------------------------------------------
// Retarded current-current response

// Exact 2D result:
// G0R = (e^2 rho_e / m)(2 hbar k_F / 3q) [g(w/v_F q + q/2k_F) - g(w/v_F q - q/2k_F)].
inline cplx green_exact(const PhysicalParams& p, double q, double omega) {
    if (q <= 0.0) throw singular_input_error("green_exact: q must be > 0");
    const double kf = p.k_fermi();
    const double xw = omega / (p.fermi_velocity * q);
    const double half = 0.5 * q / kf;
    const double xp = xw + half, xm = xw - half;
    cplx diff;
    if (xm > 25.0)       diff = detail::g_tail_diff(xm, xp, 2.0 * half); // both positive tail
    else if (xp < -25.0) diff = detail::g_tail_diff(-xp, -xm, 2.0 * half); // both negative tail
    else                 diff = g_complex(xp) - g_complex(xm);
    const double pref = cgs::e * cgs::e * p.electron_density() / p.effective_mass * 2.0 *
                        cgs::hbar * kf / (3.0 * q);
    return pref * diff;
}

// Small-q approximation: G0R ~ (e^2 rho_e/m)(2 hbar/3) g'(w / v_F q).
inline cplx green_smallq(const PhysicalParams& p, double q, double omega) {
    if (q <= 0.0) throw singular_input_error("green_smallq: q must be > 0");
    return cgs::e * cgs::e * p.electron_density() / p.effective_mass * (2.0 / 3.0) * cgs::hbar *
           g_prime(omega / (p.fermi_velocity * q));
}

enum class ResponseMode { Exact, SmallQ };
enum class ResponsePart { Paramagnetic, Diamagnetic, Total };

// Kubo coefficient (1/hbar) G0R + e^2 rho_e / m with mode and part selection.
inline cplx kubo_coefficient(const PhysicalParams& p, double q, double omega,
                             ResponseMode mode = ResponseMode::Exact,
                             ResponsePart part = ResponsePart::Total) {
    const double dia = cgs::e * cgs::e * p.electron_density() / p.effective_mass;
    if (part == ResponsePart::Diamagnetic) return dia;
    const cplx para = (mode == ResponseMode::Exact ? green_exact(p, q, omega)
                                                   : green_smallq(p, q, omega)) /
                      cgs::hbar;
    return part == ResponsePart::Paramagnetic ? para : para + dia;
}

// ---------------------------------------------------------------------------
// Angular kernel and chi

// K_{alpha beta}(q rho, phi), rows (rho, phi), columns (x, y, d).
inline std::array<std::array<double, 3>, 2> kernel_K(double qrho, double phi) {
    if (qrho < 0.0) throw validation_error("kernel_K: q rho must be >= 0");
    const double j0 = bessel_j0(qrho), j1 = bessel_j1(qrho), j2 = bessel_j2(qrho);
    const double sp = std::sin(phi), cp = std::cos(phi);
    const double plus = 0.5 * (j0 + j2), minus = 0.5 * (j0 - j2);
    return {{{-plus * sp, plus * cp, 0.0}, {-minus * cp, -minus * sp, j1}}};
}

// Radial integrals behind chi: with kappa = Kubo coefficient,
//   A(rho, w)  = (gamma_e/c) int q dq (J0+J2)/2 e^{-qd} kappa
//   B(rho, w)  = (gamma_e/c) int q dq (J0-J2)/2 e^{-qd} kappa
//   C1(rho, w) = (gamma_e/c) int q dq J1       e^{-qd} kappa
// so that chi_{rho x} = -A sin, chi_{rho y} = A cos, chi_{rho d} = 0,
//         chi_{phi x} = -B cos, chi_{phi y} = -B sin, chi_{phi d} = C1.
struct ChiRadial {
    cplx a, b, c1;
};

namespace detail {

// int_0^inf e^{-p t} J_nu(c t) t dt = (u^nu / c^nu)(nu R + p) / R^3,
// R = sqrt(p^2 + c^2), u = R - p  (Lipschitz-Hankel).
inline double lipschitz_qjn(int nu, double p, double c) {
    const double r = std::hypot(p, c);
    const double u = c * c / (r + p); // == R - p, stable for p >> c
    double un_cn = 1.0;
    for (int i = 0; i < nu; ++i) un_cn *= u / c;
    return un_cn * (nu * r + p) / (r * r * r);
}

} // namespace detail

inline double chi_q_cutoff(const PhysicalParams& p) {
    const double guard = 10.0 * p.k_fermi();
    if (p.height > 0.0) return std::min(30.0 / p.height, guard);
    return guard;
}

inline ChiRadial chi_radial(const PhysicalParams& p, double rho, double omega,
                            ResponseMode mode = ResponseMode::Exact,
                            ResponsePart part = ResponsePart::Total,
                            const QuadratureSpec& spec = {}) {
    p.validate();
    if (rho < 0.0) throw validation_error("chi_radial: rho must be >= 0");
    const bool want_dia = part != ResponsePart::Paramagnetic;
    const bool want_para = part != ResponsePart::Diamagnetic;
    if (want_dia && p.height <= 0.0)
        throw validation_error("chi_radial: diamagnetic part diverges at d = 0; set a finite height");

    const double ge = p.gyro;
    const double pref = ge / cgs::c;
    const double dia = cgs::e * cgs::e * p.electron_density() / p.effective_mass;
    ChiRadial out{0.0, 0.0, 0.0};

    if (want_dia) {
        const double l0 = detail::lipschitz_qjn(0, p.height, rho);
        const double l1 = detail::lipschitz_qjn(1, p.height, rho);
        const double l2 = detail::lipschitz_qjn(2, p.height, rho);
        out.a += pref * dia * 0.5 * (l0 + l2);
        out.b += pref * dia * 0.5 * (l0 - l2);
        out.c1 += pref * dia * l1;
    }
    if (!want_para) return out;

    const double q_cut = chi_q_cutoff(p);
    auto para = [&](double q) {
        return (mode == ResponseMode::Exact ? green_exact(p, q, omega)
                                            : green_smallq(p, q, omega)) /
               cgs::hbar;
    };
    HankelOptions opt;
    opt.tail_extrapolation = true;
    if (omega != 0.0) {
        for (double k : noise_support_knots(p, std::abs(omega)))
            if (k < q_cut) opt.knots.push_back(k);
    }
    const double d = p.height;

    if (rho == 0.0) {
        // J1(0)/0 -> 1/2, J0(0) = 1, J1(0) = 0.
        std::vector<double> seams{0.0};
        for (double k : opt.knots) seams.push_back(k);
        seams.push_back(q_cut);
        std::sort(seams.begin(), seams.end());
        seams.erase(std::unique(seams.begin(), seams.end()), seams.end());
        auto real_part = [&](double q) { return 0.5 * q * std::exp(-q * d) * para(q).real(); };
        auto imag_part = [&](double q) { return 0.5 * q * std::exp(-q * d) * para(q).imag(); };
        const cplx half(integrate_segments(real_part, seams, spec).value,
                        integrate_segments(imag_part, seams, spec).value);
        out.a += pref * half;
        out.b += pref * half;
        return out;
    }

    auto hankel_part = [&](int n, auto&& amplitude) {
        const double re = integrate_hankel_damped(
            [&](double q) { return amplitude(q).real(); }, n, rho, d, q_cut, spec, opt);
        const double im = integrate_hankel_damped(
            [&](double q) { return amplitude(q).imag(); }, n, rho, d, q_cut, spec, opt);
        return cplx(re, im);
    };

    // (J0+J2)/2 = J1(q rho)/(q rho): A reduces to an order-1 transform.
    const cplx ia = hankel_part(1, [&](double q) { return para(q) / rho; });
    const cplx ij0 = hankel_part(0, [&](double q) { return q * para(q); });
    const cplx ic = hankel_part(1, [&](double q) { return q * para(q); });
    out.a += pref * ia;
    out.b += pref * (ij0 - ia);
    out.c1 += pref * ic;
    return out;
}

// Full 2x3 response matrix chi_{alpha beta}(rho, phi, omega).
inline std::array<std::array<cplx, 3>, 2> chi(const PhysicalParams& p, double rho, double phi,
                                              double omega,
                                              ResponseMode mode = ResponseMode::Exact,
                                              ResponsePart part = ResponsePart::Total,
                                              const QuadratureSpec& spec = {}) {
    const auto r = chi_radial(p, rho, omega, mode, part, spec);
    const double sp = std::sin(phi), cp = std::cos(phi);
    return {{{-r.a * sp, r.a * cp, cplx(0.0)}, {-r.b * cp, -r.b * sp, r.c1}}};
}

// ---------------------------------------------------------------------------
// Macrospin drive spectrum on the FFT grid

struct SpinSpectrum {
    std::vector<double> omegas; // symmetric grid, rad/s
    std::vector<cplx> sx, sy, sz; // hbar units x time
    double domega = 0.0;
    int n_dipoles = 0;
    double gamma0 = 0.0;
    double delta = 0.0;
};

// S^+(w) = (pi/gamma0) sech(pi (w - Delta)/(N gamma0)) analytically; S_z from a
// windowed FFT of -N/2 tanh(N gamma0 t / 2) with the omega = 0 bin excluded.
inline SpinSpectrum spin_spectrum(int n_dipoles, double gamma0, double delta, size_t n_bins,
                                  double domega) {
    if (n_bins == 0 || (n_bins & (n_bins - 1)) != 0)
        throw validation_error("spin_spectrum: n_bins must be a power of two");
    if (!(domega > 0.0)) throw validation_error("spin_spectrum: domega must be > 0");
    const double span = domega * static_cast<double>(n_bins);
    if (span < 8.0 * delta)
        throw validation_error("spin_spectrum: grid span must be >= 8 Delta");
    if (domega > static_cast<double>(n_dipoles) * gamma0 / 16.0)
        throw validation_error("spin_spectrum: resolution must be <= N gamma0 / 16");

    SpinSpectrum s;
    s.domega = domega;
    s.n_dipoles = n_dipoles;
    s.gamma0 = gamma0;
    s.delta = delta;
    const long half = static_cast<long>(n_bins) / 2;
    s.omegas.resize(n_bins);
    for (size_t j = 0; j < n_bins; ++j)
        s.omegas[j] = domega * static_cast<double>(static_cast<long>(j) - half);

    const double wN = static_cast<double>(n_dipoles) * gamma0;
    auto s_plus = [&](double w) { return cgs::pi / gamma0 / std::cosh(cgs::pi * (w - delta) / wN); };
    auto s_minus = [&](double w) { return cgs::pi / gamma0 / std::cosh(cgs::pi * (w + delta) / wN); };

    // S_z: sample tanh on the conjugate time grid and transform.
    const double dt = cgs::two_pi / (domega * static_cast<double>(n_bins));
    std::vector<cplx> szt(n_bins);
    for (size_t k = 0; k < n_bins; ++k) {
        const double t = dt * static_cast<double>(static_cast<long>(k) - half);
        szt[k] = -0.5 * static_cast<double>(n_dipoles) * std::tanh(0.5 * wN * t);
    }
    auto szw = continuous_transform(szt, dt);
    szw[static_cast<size_t>(half)] = 0.0; // principal-value pole routed to the static response

    s.sx.resize(n_bins);
    s.sy.resize(n_bins);
    s.sz = std::move(szw);
    for (size_t j = 0; j < n_bins; ++j) {
        const double w = s.omegas[j];
        const double sp = s_plus(w), sm = s_minus(w);
        s.sx[j] = 0.5 * (sp + sm);
        s.sy[j] = cplx(0.0, -0.5) * (sp - sm);
    }
    return s;
}

// ---------------------------------------------------------------------------
// Current-wave synthesis

struct PolarGrid {
    std::vector<double> rhos; // cm, > 0
    std::vector<double> phis; // rad
};

struct CurrentFrame {
    double time = 0.0;                    // s
    std::vector<double> j_rho;            // statA/cm, row-major [rho][phi]
    std::vector<double> j_phi;

    double& jr(size_t i, size_t j, size_t nphi) { return j_rho[i * nphi + j]; }
    double& jp(size_t i, size_t j, size_t nphi) { return j_phi[i * nphi + j]; }
};

// chi radial integrals tabulated on (rho, omega >= 0); omega < 0 follows from
// chi(-w) = conj(chi(w)).
struct ChiTable {
    std::vector<double> rhos;
    std::vector<double> omegas; // non-negative half of the FFT grid
    std::vector<ChiRadial> values; // [rho][omega]
    const ChiRadial& at(size_t i, size_t j) const { return values[i * omegas.size() + j]; }
};

inline ChiTable compute_chi_table(const PhysicalParams& p, const std::vector<double>& rhos,
                                  const std::vector<double>& omegas_nonneg,
                                  ResponseMode mode = ResponseMode::Exact,
                                  ResponsePart part = ResponsePart::Total,
                                  const QuadratureSpec& spec = {}, unsigned threads = 0) {
    ChiTable table;
    table.rhos = rhos;
    table.omegas = omegas_nonneg;
    table.values.resize(rhos.size() * omegas_nonneg.size());
    parallel_for(rhos.size() * omegas_nonneg.size(), threads, [&](size_t idx) {
        const size_t i = idx / omegas_nonneg.size();
        const size_t j = idx % omegas_nonneg.size();
        table.values[idx] = chi_radial(p, rhos[i], omegas_nonneg[j], mode, part, spec);
    });
    return table;
}

// J_alpha(rho, phi, t) = Re (1/2pi) sum_j dw e^{-i w_j t} chi_{alpha beta} S_beta.
inline std::vector<CurrentFrame> synthesize_frames(const ChiTable& table, const SpinSpectrum& spin,
                                                   const std::vector<double>& phis,
                                                   const std::vector<double>& times,
                                                   unsigned threads = 0) {
    const size_t nw = spin.omegas.size();
    const size_t half = nw / 2;
    if (table.omegas.size() != nw - half)
        throw validation_error("synthesize_frames: chi table does not match the spectrum grid");
    const size_t nr = table.rhos.size();
    const size_t nphi = phis.size();

    std::vector<CurrentFrame> frames(times.size());
    for (size_t f = 0; f < frames.size(); ++f) {
        frames[f].time = times[f];
        frames[f].j_rho.assign(nr * nphi, 0.0);
        frames[f].j_phi.assign(nr * nphi, 0.0);
    }

    parallel_for(nr, threads, [&](size_t i) {
        // Per rho: accumulate the five omega-convolutions for all times.
        for (size_t f = 0; f < frames.size(); ++f) {
            const double t = frames[f].time;
            cplx asx = 0.0, asy = 0.0, bsx = 0.0, bsy = 0.0, csz = 0.0;
            for (size_t j = 1; j < nw; ++j) { // j = 0 has no positive-grid mirror
                const double w = spin.omegas[j];
                ChiRadial cr;
                if (w >= 0.0) cr = table.at(i, j - half);
                else {
                    const auto& pos = table.at(i, half - j);
                    cr = {std::conj(pos.a), std::conj(pos.b), std::conj(pos.c1)};
                }
                const cplx phase = std::polar(1.0, -w * t) * (spin.domega / cgs::two_pi);
                asx += phase * cr.a * spin.sx[j];
                asy += phase * cr.a * spin.sy[j];
                bsx += phase * cr.b * spin.sx[j];
                bsy += phase * cr.b * spin.sy[j];
                csz += phase * cr.c1 * spin.sz[j];
            }
            for (size_t k = 0; k < nphi; ++k) {
                const double sp = std::sin(phis[k]), cp = std::cos(phis[k]);
                frames[f].j_rho[i * nphi + k] = (-asx * sp + asy * cp).real();
                frames[f].j_phi[i * nphi + k] = (-bsx * cp - bsy * sp + csz).real();
            }
        }
    });
    return frames;
}

// High-level driver used by the CLI.
inline std::vector<CurrentFrame> current_field(const PhysicalParams& p, int n_dipoles,
                                               double gamma0, const PolarGrid& grid,
                                               const std::vector<double>& times, size_t n_bins,
                                               ResponseMode mode = ResponseMode::Exact,
                                               ResponsePart part = ResponsePart::Total,
                                               const QuadratureSpec& spec = {},
                                               unsigned threads = 0) {
    const double delta = p.dipole_frequency;
    const double domega = static_cast<double>(n_dipoles) * gamma0 / 16.0;
    const auto spin = spin_spectrum(n_dipoles, gamma0, delta, n_bins, domega);
    const double t_span = cgs::two_pi / domega;
    for (double t : times)
        if (std::abs(t) > 0.5 * t_span)
            throw validation_error("current_field: requested time outside the FFT window");
    std::vector<double> wpos(spin.omegas.begin() + static_cast<long>(n_bins / 2),
                             spin.omegas.end());
    const auto table = compute_chi_table(p, grid.rhos, wpos, mode, part, spec, threads);
    return synthesize_frames(table, spin, grid.phis, times, threads);
}

// ---------------------------------------------------------------------------
// Static limit

struct LandauResult {
    double value = 0.0;           // susceptibility, -e^2/(12 pi m c^2)
    double extrapolation_error = 0.0;
};

// chi_Landau = lim_{q->0} -(1/c^2 q^2) [ (1/hbar) G0R(q, 0) + e^2 rho_e/m ],
// Richardson extrapolation over a geometric q sequence.
inline LandauResult landau_chi(const PhysicalParams& p, double ratio = 0.5) {
    p.validate();
    if (!(ratio > 0.0 && ratio < 1.0))
        throw validation_error("landau_chi: ratio must be in (0, 1)");
    const double kf = p.k_fermi();
    constexpr int levels = 7;
    std::array<double, levels> row{};
    double q = 0.1 * kf;
    std::array<double, levels> qs{};
    for (int j = 0; j < levels; ++j) { qs[static_cast<size_t>(j)] = q; q *= ratio; }
    for (int j = 0; j < levels; ++j) {
        const double qq = qs[static_cast<size_t>(j)];
        const cplx kubo = kubo_coefficient(p, qq, 0.0, ResponseMode::Exact, ResponsePart::Total);
        row[static_cast<size_t>(j)] = -kubo.real() / (cgs::c * cgs::c * qq * qq);
    }
    // Richardson in q^2: error term c1 q^2 + c2 q^4 + ...
    const double r2 = ratio * ratio;
    std::array<double, levels> cur = row, prev{};
    double last = row[levels - 1], err = 0.0;
    for (int k = 1; k < levels; ++k) {
        prev = cur;
        const double w = std::pow(r2, k);
        for (int j = k; j < levels; ++j)
            cur[static_cast<size_t>(j)] =
                (prev[static_cast<size_t>(j)] - w * prev[static_cast<size_t>(j - 1)]) / (1.0 - w);
        err = std::abs(cur[levels - 1] - last);
        last = cur[levels - 1];
    }
    if (!std::isfinite(last))
        throw convergence_error("landau_chi: extrapolation diverged", last, err);
    return {last, err};
}

// 2D Pauli susceptibility with the free-electron moment, for the ratio check.
inline double pauli_chi(const PhysicalParams& p) {
    const double mu_b = cgs::e * cgs::hbar / (2.0 * cgs::m_e * cgs::c);
    const double dos = p.effective_mass / (cgs::pi * cgs::hbar * cgs::hbar);
    return mu_b * mu_b * dos;
}

} // namespace ebath
