// Oscillatory Hankel-type quadrature:
//
//     I = integral_0^{q_max} g(q) J_n(q r) exp(-damping q) dq ,   n in {0,1,2}.
//
// For r*q_max beyond a few oscillations the interval is partitioned at the
// scaled zeros of J_n and the half-lobe contributions are summed with
// compensated arithmetic. Two tail terminations are available:
//   - alternating bound: once lobe magnitudes decrease and drop below the
//     error budget, the remainder is bounded by the next lobe;
//   - Wynn-epsilon extrapolation (opt-in, `tail_extrapolation`) for slowly
//     decaying integrands whose smooth continuation past q_max is negligible.
#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "ebath/bessel.hpp"
#include "ebath/quadrature.hpp"

namespace ebath {

namespace detail {

// Cached positive zeros of J_n, shared across calls.
inline const std::vector<double>& bessel_zero_table(int n, size_t count) {
    thread_local std::vector<double> cache[3];
    auto& z = cache[n];
    while (z.size() < count)
        z.push_back(bessel_jn_zero(n, static_cast<int>(z.size()) + 1));
    return z;
}

// Wynn epsilon algorithm; returns the highest-order even-column estimate for
// the limit of the partial-sum sequence.
inline double wynn_epsilon(const std::vector<double>& s) {
    const size_t n = s.size();
    std::vector<double> prev(n, 0.0), cur(s), next;
    double best = s.back();
    for (size_t col = 1; col < n; ++col) {
        next.assign(n - col, 0.0);
        for (size_t i = 0; i + col < n; ++i) {
            const double diff = cur[i + 1] - cur[i];
            if (diff == 0.0) return cur[i + 1];
            next[i] = prev[i + 1] + 1.0 / diff;
        }
        if (col % 2 == 0 && !next.empty()) best = next.back();
        prev.swap(cur);
        cur.swap(next);
    }
    return best;
}

} // namespace detail

struct HankelOptions {
    std::vector<double> knots;       // interior breakpoints of g (kinks, edges)
    bool tail_extrapolation = false; // allow epsilon-accelerated termination
    size_t max_cells = 2000000;
};

template <class G>
double integrate_hankel_damped(G&& g, int n, double r, double damping, double q_max,
                               const QuadratureSpec& spec = {}, const HankelOptions& opt = {}) {
    spec.validate();
    if (n < 0 || n > 2) throw validation_error("integrate_hankel_damped: order must be 0..2");
    if (r < 0.0) throw validation_error("integrate_hankel_damped: r must be >= 0");
    if (damping < 0.0) throw validation_error("integrate_hankel_damped: damping must be >= 0");
    if (!(q_max > 0.0) || !std::isfinite(q_max))
        throw validation_error("integrate_hankel_damped: q_max must be finite and > 0");

    auto f = [&](double q) { return g(q) * bessel_j(n, q * r) * std::exp(-damping * q); };

    std::vector<double> seams{0.0};
    for (double k : opt.knots)
        if (k > 0.0 && k < q_max) seams.push_back(k);
    seams.push_back(q_max);
    std::sort(seams.begin(), seams.end());
    seams.erase(std::unique(seams.begin(), seams.end()), seams.end());

    if (!spec.oscillation_splitting || r * q_max <= 10.0) {
        const auto res = integrate_segments(f, seams, spec);
        return res.value;
    }

    // One full direct pass over the pre-oscillatory part: up to the first zero
    // past the last user knot, handled segment-adaptively.
    const auto& ztab = detail::bessel_zero_table(n, 8);
    const double last_knot = seams[seams.size() - 2]; // before q_max
    double osc_start = std::max(ztab[0] / r, last_knot);
    if (osc_start >= q_max) {
        const auto res = integrate_segments(f, seams, spec);
        return res.value;
    }

    // Head: [0, osc_start] split at knots.
    std::vector<double> head(seams.begin(), seams.end() - 1);
    if (head.back() < osc_start) head.push_back(osc_start);
    QuadratureSpec head_spec = spec;
    head_spec.abs_tol = spec.abs_tol > 0 ? 0.5 * spec.abs_tol : 0.0;
    double head_err = 0.0;
    std::vector<double> pieces;
    {
        const auto res = integrate_segments(f, head, head_spec);
        pieces.push_back(res.value);
        head_err = res.error_estimate;
    }

    // Oscillatory cells between consecutive scaled zeros.
    auto zero_at = [&](size_t idx) { return detail::bessel_zero_table(n, idx + 1)[idx]; };
    size_t k = 0;
    while (zero_at(k) / r <= osc_start) ++k;
    double lo = osc_start;
    double scale = std::abs(pieces[0]);
    std::vector<double> partial;          // running partial sums of the tail
    std::vector<double> cell_vals;
    double cell_err_sum = 0.0;
    double tail_bound = 0.0;
    bool terminated = false;
    size_t decreasing_run = 0;
    double prev_mag = 0.0;
    double run_sum = 0.0;

    QuadratureSpec cell_spec = spec;
    cell_spec.rel_tol = std::min(spec.rel_tol, 1e-9);
    cell_spec.max_subdivisions = 48;

    auto budget = [&]() {
        return std::max(spec.abs_tol, spec.rel_tol * scale);
    };

    for (size_t cell = 0; cell < opt.max_cells; ++cell) {
        const double z = zero_at(k) / r;
        ++k;
        const double hi = std::min(z, q_max);
        if (hi <= lo) break;
        double u, uerr;
        cell_spec.abs_tol = std::max(1e-3 * budget(), 1e-305);
        try {
            const auto res = integrate_adaptive(f, lo, hi, cell_spec);
            u = res.value;
            uerr = res.error_estimate;
        } catch (const convergence_error& e) {
            u = e.best_estimate;
            uerr = e.error_estimate;
        }
        cell_vals.push_back(u);
        cell_err_sum += uerr;
        run_sum += u;
        partial.push_back(run_sum);
        scale = std::max(scale, std::abs(run_sum) + std::abs(pieces[0]));
        const double mag = std::abs(u);
        if (cell > 0 && mag <= prev_mag) ++decreasing_run;
        else decreasing_run = 0;
        prev_mag = mag;
        lo = hi;
        if (hi >= q_max) { terminated = true; break; }

        // Alternating-series termination: remainder bounded by the next lobe.
        if (decreasing_run >= 3 && mag < 0.25 * budget()) {
            tail_bound = mag;
            terminated = true;
            break;
        }
        // Epsilon-accelerated termination for slowly decaying tails.
        if (opt.tail_extrapolation && partial.size() >= 24 && decreasing_run >= 8) {
            std::vector<double> window(partial.end() - 16, partial.end());
            const double e1 = detail::wynn_epsilon(window);
            std::vector<double> window2(partial.end() - 15, partial.end());
            const double e2 = detail::wynn_epsilon(window2);
            if (std::abs(e1 - e2) < 0.1 * budget()) {
                run_sum = 0.5 * (e1 + e2);
                tail_bound = std::abs(e1 - e2);
                cell_vals.clear();       // run_sum already holds the tail limit
                cell_vals.push_back(run_sum);
                terminated = true;
                break;
            }
        }
    }
    if (!terminated)
        throw convergence_error("integrate_hankel_damped: cell budget exhausted after " +
                                    std::to_string(cell_vals.size()) + " lobes, partial sum " +
                                    std::to_string(run_sum),
                                pieces[0] + run_sum, cell_err_sum + tail_bound);

    for (double v : cell_vals) pieces.push_back(v);
    const double value = detail::neumaier_sum(pieces);
    const double err = head_err + cell_err_sum + tail_bound;
    if (err > std::max(spec.abs_tol, 10.0 * spec.rel_tol * std::max(std::abs(value), scale)))
        throw convergence_error("integrate_hankel_damped: accumulated cell error " +
                                    std::to_string(err) + " exceeds tolerance",
                                value, err);
    return value;
}

} // namespace ebath
