// Magnetic-field noise correlators C^{alpha beta}(omega, q) at T = 0 for the
// fermionic environments (constant coupling and Oersted transverse-current),
// the bosonic line spectrum, orientation factors, and the Oersted coupling
// matrix elements. Units: C^{-+} carries G^2 cm^2 s; q in 1/cm; omega in rad/s.
#pragma once

#include <complex>
#include <vector>

#include "ebath/constants.hpp"
#include "ebath/ensemble.hpp"
#include "ebath/params.hpp"
#include "ebath/quadrature.hpp"

namespace ebath {

// Constant-coupling fermion bath, SM three-branch square-root form. The
// coupling strength enters squared; no spin-degeneracy factor here (the
// transverse-current correlator below carries its own factor of 2).
inline double simple_fermion_noise(const PhysicalParams& p, double coupling, double omega,
                                   double q) {
    if (q <= 0.0) throw singular_input_error("simple_fermion_noise: q must be > 0");
    if (omega <= 0.0) return 0.0;
    const double ef = p.fermi_energy();
    const double hw = cgs::hbar * omega;
    const double en = resonance_energy(p, q, omega);
    if (en >= ef) return 0.0;
    const double pref = std::sqrt(2.0) * coupling * coupling *
                        std::pow(p.effective_mass, 1.5) / (cgs::pi * cgs::hbar * cgs::hbar * q);
    double val = std::sqrt(ef - en);
    if (en < ef - hw) val -= std::sqrt(ef - hw - en);
    return pref * val;
}

// Dimensionless transverse-current structure factor C(q, omega): the 3/2-law
// analogue of the constant-coupling form, spin factor 2 included by the
// caller's prefactor convention (see oersted_noise).
inline double transverse_current_C(const PhysicalParams& p, double omega, double q) {
    if (q <= 0.0) throw singular_input_error("transverse_current_C: q must be > 0");
    if (omega <= 0.0) return 0.0;
    const double ef = p.fermi_energy();
    const double hw = cgs::hbar * omega;
    const double en = resonance_energy(p, q, omega);
    if (en >= ef) return 0.0;
    const double t1 = std::pow(ef - en, 1.5);
    const double t2 = (en < ef - hw) ? std::pow(ef - hw - en, 1.5) : 0.0;
    return (2.0 / 3.0) * (t1 - t2) / std::pow(ef, 1.5);
}

// Oersted magnetic noise above a 2D conductor, z-aligned dipoles unless an
// orientation factor is supplied. G^2 cm^2 s.
inline double oersted_noise(const PhysicalParams& p, double omega, double q, double f_orient = 1.0) {
    if (q <= 0.0) throw singular_input_error("oersted_noise: q must be > 0");
    const double cur = 2.0 * cgs::e * p.fermi_velocity / cgs::c;
    const double pref = cur * cur * cgs::pi * p.effective_mass / cgs::hbar * p.k_fermi() / q;
    return f_orient * std::exp(-2.0 * p.height * q) * pref * transverse_current_C(p, omega, q);
}

// F_nm(qhat) = [(x_n - i y_n).(qhat + i dhat)] [(x_m + i y_m).(qhat - i dhat)],
// dhat the plane normal, qhat in-plane.
inline std::complex<double> orientation_factor(const Triad& n, const Triad& m, double qhat_x,
                                               double qhat_y) {
    const Vec3 qv{qhat_x, qhat_y, 0.0};
    const Vec3 dv{0.0, 0.0, 1.0};
    using cd = std::complex<double>;
    const cd a(n.ex.dot(qv) + n.ey.dot(dv), n.ex.dot(dv) - n.ey.dot(qv));
    const cd b(m.ex.dot(qv) + m.ey.dot(dv), m.ey.dot(qv) - m.ex.dot(dv));
    return a * b;
}

// Transverse-current coupling matrix element V_{k,k+q}(r): complex 3-vector
// along (qhat + i dhat), magnitude (2 pi e hbar / c m) e^{-qd} (qperp . k).
struct CouplingVector {
    std::complex<double> x, y, z;
};

inline CouplingVector oersted_coupling(const PhysicalParams& p, double kx, double ky, double qx,
                                       double qy, double rx = 0.0, double ry = 0.0) {
    const double q = std::hypot(qx, qy);
    if (q <= 0.0) throw singular_input_error("oersted_coupling: |q| must be > 0");
    const double qhx = qx / q, qhy = qy / q;
    // qperp = qhat x dhat, in-plane, with (qperp, qhat, dhat) right-handed
    const double qpx = qhy, qpy = -qhx;
    const double scalar = cgs::two_pi * cgs::e * cgs::hbar /
                          (cgs::c * p.effective_mass) * std::exp(-q * p.height) *
                          (qpx * kx + qpy * ky);
    const std::complex<double> phase = std::polar(1.0, qx * rx + qy * ry);
    return {scalar * qhx * phase, scalar * qhy * phase,
            std::complex<double>(0.0, scalar) * phase};
}

// Bosonic line environment.
struct BosonLine {
    double qx = 0.0, qy = 0.0; // cm^-1
    double omega_q = 0.0;      // rad/s
    std::complex<double> g = 0.0;
    double occupation = 0.0;   // n_q (Bose-Einstein)
};

struct BosonSpectralLine {
    size_t line_index;
    double omega;  // +omega_q (emission) or -omega_q (absorption)
    double weight; // 2 pi |g|^2 (1 + n) or 2 pi |g|^2 n
};

inline std::vector<BosonSpectralLine> boson_line_spectrum(const std::vector<BosonLine>& lines,
                                                          double omega, double window) {
    std::vector<BosonSpectralLine> out;
    for (size_t i = 0; i < lines.size(); ++i) {
        const auto& ln = lines[i];
        const double w2 = std::norm(ln.g);
        if (std::abs(omega - ln.omega_q) < window && (1.0 + ln.occupation) > 0.0)
            out.push_back({i, ln.omega_q, cgs::two_pi * w2 * (1.0 + ln.occupation)});
        if (std::abs(omega + ln.omega_q) < window && ln.occupation > 0.0)
            out.push_back({i, -ln.omega_q, cgs::two_pi * w2 * ln.occupation});
    }
    return out;
}

// Quadrature knots covering the compact support of the transverse-current
// noise at frequency omega, including the interior branch kinks.
inline std::vector<double> noise_support_knots(const PhysicalParams& p, double omega) {
    const auto w = particle_hole_window(p, omega);
    std::vector<double> knots{w.q_lo};
    if (w.has_mid) {
        if (w.q_mid_lo > w.q_lo && w.q_mid_lo < w.q_hi) knots.push_back(w.q_mid_lo);
        if (w.q_mid_hi > w.q_lo && w.q_mid_hi < w.q_hi) knots.push_back(w.q_mid_hi);
    }
    knots.push_back(w.q_hi);
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
    return knots;
}

// Local spectral density C^{-+}(Delta) = int q dq C^{-+}(Delta, q) / (2 pi),
// z-aligned dipoles. G^2 s.
inline double local_noise_density(const PhysicalParams& p, const QuadratureSpec& spec = {}) {
    p.validate();
    const double omega = p.dipole_frequency;
    const auto knots = noise_support_knots(p, omega);
    const auto res = integrate_segments(
        [&](double q) { return q * oersted_noise(p, omega, q) / cgs::two_pi; }, knots, spec);
    return res.value;
}

// Simple NoiseModel facade used by the CLI and the superradiance length.
struct NoiseModel {
    enum class Kind { SimpleFermion, TransverseCurrent, BosonLines };
    Kind kind = Kind::TransverseCurrent;
    PhysicalParams params;
    double coupling = 1.0; // SimpleFermion only
    std::vector<BosonLine> lines;

    double evaluate(double omega, double q) const {
        switch (kind) {
            case Kind::SimpleFermion: return simple_fermion_noise(params, coupling, omega, q);
            case Kind::TransverseCurrent: return oersted_noise(params, omega, q);
            default:
                throw validation_error("NoiseModel: boson-lines kind has no smooth (omega,q) density");
        }
    }
};

} // namespace ebath
