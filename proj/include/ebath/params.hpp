// Physical parameters of the dipole + 2D electron gas system and the
// kinematic quantities derived from them. CGS-Gaussian units throughout;
// frequencies are angular (rad/s) internally.
#pragma once

#include <cmath>
#include <string>

#include "ebath/constants.hpp"
#include "ebath/errors.hpp"

namespace ebath {

enum class ProjectionMode {
    SpinHalf,   // genuine spin-1/2 dipole, transverse coupling gamma
    NvTwoLevel  // two levels of the NV triplet: decay uses sqrt(2) gamma
};

struct PhysicalParams {
    double fermi_velocity = 1e8;          // v_F, cm/s
    double effective_mass = 9.1e-28;      // m, g
    double height = 0.0;                  // d, cm (dipoles above the plane)
    double dipole_frequency = 0.0;        // Delta, rad/s
    double gyro = 0.0;                    // gamma, rad/(s G)
    ProjectionMode projection = ProjectionMode::SpinHalf;

    void validate() const {
        if (!(fermi_velocity > 0) || !std::isfinite(fermi_velocity))
            throw validation_error("fermi_velocity must be positive and finite");
        if (!(effective_mass > 0) || !std::isfinite(effective_mass))
            throw validation_error("effective_mass must be positive and finite");
        if (!(height >= 0) || !std::isfinite(height))
            throw validation_error("height must be >= 0 and finite");
        if (!(dipole_frequency > 0) || !std::isfinite(dipole_frequency))
            throw validation_error("dipole_frequency must be positive and finite");
        if (!(gyro > 0) || !std::isfinite(gyro))
            throw validation_error("gyro must be positive and finite");
    }

    double k_fermi() const { return effective_mass * fermi_velocity / cgs::hbar; }
    double lambda_fermi() const { return 1.0 / k_fermi(); }
    double fermi_energy() const { return 0.5 * cgs::hbar * k_fermi() * fermi_velocity; }
    double electron_density() const { double k = k_fermi(); return k * k / cgs::two_pi; }

    // Effective gyromagnetic ratio entering decay/excitation rates. The NV
    // two-level projection carries an extra sqrt(2) on the transverse coupling.
    double gyro_decay() const {
        return projection == ProjectionMode::NvTwoLevel ? std::sqrt(2.0) * gyro : gyro;
    }
};

struct DerivedQuantities {
    double k_fermi;          // cm^-1
    double lambda_fermi;     // cm, 1/k_F convention
    double fermi_energy;     // erg
    double electron_density; // cm^-2
};

inline DerivedQuantities derive(const PhysicalParams& p) {
    p.validate();
    return {p.k_fermi(), p.lambda_fermi(), p.fermi_energy(), p.electron_density()};
}

// Momentum transferred by a particle absorbing energy hbar*omega at rest:
// q_omega = sqrt(2 m omega / hbar).
inline double q_omega(const PhysicalParams& p, double omega) {
    return std::sqrt(2.0 * p.effective_mass * std::abs(omega) / cgs::hbar);
}

// Minimum kinetic energy a particle-hole pair needs to absorb (q, omega):
// E(q, omega) = hbar^2 (q_omega^2 - q^2)^2 / (8 m q^2).
inline double resonance_energy(const PhysicalParams& p, double q, double omega) {
    if (q <= 0.0)
        throw singular_input_error("resonance_energy: q must be > 0");
    const double qw2 = 2.0 * p.effective_mass * omega / cgs::hbar;
    const double diff = qw2 - q * q;
    return cgs::hbar * cgs::hbar * diff * diff / (8.0 * p.effective_mass * q * q);
}

// Support of the T=0 particle-hole continuum at frequency omega > 0:
// E(q, omega) < E_F exactly for q_lo < q < q_hi.
struct ParticleHoleWindow {
    double q_lo;
    double q_hi;
    // Interior branch boundaries where E(q, omega) = E_F - hbar omega,
    // present only when q_omega < k_F; q_mid_lo <= q_mid_hi.
    bool has_mid;
    double q_mid_lo;
    double q_mid_hi;
};

inline ParticleHoleWindow particle_hole_window(const PhysicalParams& p, double omega) {
    const double kf = p.k_fermi();
    const double qw = q_omega(p, omega);
    const double root = std::hypot(kf, qw);
    ParticleHoleWindow w{};
    w.q_lo = qw * qw / (root + kf); // == root - kf without cancellation
    w.q_hi = root + kf;
    if (qw < kf) {
        const double s = std::sqrt((kf - qw) * (kf + qw));
        w.has_mid = true;
        w.q_mid_lo = qw * qw / (kf + s); // == kf - s
        w.q_mid_hi = kf + s;
    }
    return w;
}

inline std::string to_string(ProjectionMode m) {
    return m == ProjectionMode::SpinHalf ? "spin-half" : "nv-two-level";
}

} // namespace ebath
