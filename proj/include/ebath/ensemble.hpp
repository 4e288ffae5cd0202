// Dipole ensemble: 2D positions plus right-handed orientation triads
// (x_n, y_n, z_n) with z_n the dipole quantization axis.
#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "ebath/errors.hpp"
#include "ebath/rng.hpp"

namespace ebath {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const { return std::sqrt(dot(*this)); }
};

struct Triad {
    Vec3 ex, ey, ez; // right-handed orthonormal frame of the dipole

    static Triad aligned_z() { return {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}; }

    // In-plane dipole axis along +x of the lab frame: z_n = x, x_n = y, y_n = d.
    static Triad in_plane_x() { return {{0, 1, 0}, {0, 0, 1}, {1, 0, 0}}; }

    void validate(double tol = 1e-12) const {
        auto unit = [&](const Vec3& v) { return std::abs(v.norm() - 1.0) <= tol; };
        if (!unit(ex) || !unit(ey) || !unit(ez))
            throw validation_error("Triad: axes must be unit vectors");
        if (std::abs(ex.dot(ey)) > tol || std::abs(ex.dot(ez)) > tol || std::abs(ey.dot(ez)) > tol)
            throw validation_error("Triad: axes must be orthogonal");
        if ((ex.cross(ey) - ez).norm() > 1e-10)
            throw validation_error("Triad: frame must be right-handed");
    }
};

struct DipoleEnsemble {
    std::vector<Point2> positions;  // cm
    std::vector<Triad> orientations;

    size_t size() const { return positions.size(); }

    void validate() const {
        if (positions.empty())
            throw validation_error("DipoleEnsemble: need at least one dipole");
        if (positions.size() != orientations.size())
            throw validation_error("DipoleEnsemble: positions and orientations differ in length");
        for (const auto& t : orientations) t.validate();
    }

    bool all_aligned_z(double tol = 1e-12) const {
        for (const auto& t : orientations)
            if (std::abs(t.ez.x) > tol || std::abs(t.ez.y) > tol || std::abs(t.ez.z - 1.0) > tol)
                return false;
        return true;
    }

    static DipoleEnsemble z_aligned(std::vector<Point2> pts) {
        DipoleEnsemble e;
        e.positions = std::move(pts);
        e.orientations.assign(e.positions.size(), Triad::aligned_z());
        return e;
    }

    // N dipoles uniformly placed in [0, side]^2, all pointing along the normal.
    static DipoleEnsemble random_square(const SeededStream& stream, int n, double side) {
        return z_aligned(uniform_points(stream, n, side));
    }
};

} // namespace ebath
