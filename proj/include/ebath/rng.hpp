// Counter-based random streams: every draw is a pure function of
// (master_seed, stream_index, counter), so parallel workers can consume
// disjoint streams in any order and reproduce the same numbers.
#pragma once

#include <cstdint>
#include <vector>

#include "ebath/errors.hpp"

namespace ebath {

namespace detail {

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace detail

struct SeededStream {
    uint64_t master_seed = 0;
    uint64_t stream_index = 0;

    uint64_t bits(uint64_t counter) const {
        uint64_t key = detail::splitmix64(master_seed ^ 0x6a09e667f3bcc909ULL);
        key = detail::splitmix64(key ^ stream_index);
        return detail::splitmix64(key ^ (counter * 0x9e3779b97f4a7c15ULL + 1));
    }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform(uint64_t counter) const {
        return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
    }

    SeededStream substream(uint64_t index) const {
        return {detail::splitmix64(master_seed ^ detail::splitmix64(stream_index)), index};
    }
};

struct Point2 {
    double x;
    double y;
};

// N i.i.d. uniform points in [0, side]^2.
inline std::vector<Point2> uniform_points(const SeededStream& stream, int n, double side) {
    if (n < 1) throw validation_error("uniform_points: N must be >= 1");
    if (!(side > 0.0)) throw validation_error("uniform_points: side must be > 0");
    std::vector<Point2> pts(static_cast<size_t>(n));
    for (size_t i = 0; i < pts.size(); ++i) {
        pts[i].x = side * stream.uniform(2 * i);
        pts[i].y = side * stream.uniform(2 * i + 1);
    }
    return pts;
}

} // namespace ebath
