// Adaptive Gauss-Kronrod (7-15) quadrature on finite intervals.
// Deterministic: given identical inputs and spec, the subdivision sequence and
// the final compensated sum are reproduced bit for bit.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <vector>

#include "ebath/errors.hpp"

namespace ebath {

struct QuadratureSpec {
    double rel_tol = 1e-9;
    double abs_tol = 0.0;            // absolute floor; 0 = purely relative
    int max_subdivisions = 2000;
    bool oscillation_splitting = true;

    void validate() const {
        if (!(rel_tol > 0.0) || rel_tol > 1e-2)
            throw validation_error("QuadratureSpec: rel_tol must be in (0, 1e-2]");
        if (max_subdivisions < 8)
            throw validation_error("QuadratureSpec: max_subdivisions must be >= 8");
        if (abs_tol < 0.0)
            throw validation_error("QuadratureSpec: abs_tol must be >= 0");
    }
};

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int subdivisions = 0;
};

namespace detail {

// QUADPACK dqk15 nodes and weights.
inline constexpr double gk_xgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr double gk_wgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double gk_wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct GkCell {
    double a, b;
    double value;
    double error;
    long id; // insertion order, ties broken deterministically
};

template <class F>
inline GkCell gk15(F&& f, double a, double b, long id) {
    const double h = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double fv1[7], fv2[7];
    const double fc = f(mid);
    double resg = fc * gk_wg[3];
    double resk = fc * gk_wgk[7];
    double resabs = std::abs(resk);
    for (int j = 0; j < 7; ++j) {
        const double dx = h * gk_xgk[j];
        fv1[j] = f(mid - dx);
        fv2[j] = f(mid + dx);
        const double s = fv1[j] + fv2[j];
        if (j % 2 == 1) resg += gk_wg[j / 2] * s;
        resk += gk_wgk[j] * s;
        resabs += gk_wgk[j] * (std::abs(fv1[j]) + std::abs(fv2[j]));
    }
    const double mean = 0.5 * resk;
    double resasc = gk_wgk[7] * std::abs(fc - mean);
    for (int j = 0; j < 7; ++j)
        resasc += gk_wgk[j] * (std::abs(fv1[j] - mean) + std::abs(fv2[j] - mean));
    resabs *= std::abs(h);
    resasc *= std::abs(h);
    const double result = resk * h;
    double err = std::abs((resk - resg) * h);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double eps = 50.0 * 2.220446049250313e-16 * resabs;
    if (resabs > 1e-290 && eps > err) err = eps;
    return {a, b, result, err, id};
}

inline double neumaier_sum(std::vector<double>& xs) {
    std::sort(xs.begin(), xs.end(),
              [](double l, double r) { return std::abs(l) < std::abs(r); });
    double sum = 0.0, comp = 0.0;
    for (double x : xs) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x)) comp += (sum - t) + x;
        else comp += (x - t) + sum;
        sum = t;
    }
    return sum + comp;
}

} // namespace detail

template <class F>
QuadratureResult integrate_adaptive(F&& f, double a, double b, const QuadratureSpec& spec = {}) {
    spec.validate();
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
        throw validation_error("integrate_adaptive: require finite a < b");

    auto worse = [](const detail::GkCell& l, const detail::GkCell& r) {
        if (l.error != r.error) return l.error < r.error;
        return l.id > r.id;
    };
    std::priority_queue<detail::GkCell, std::vector<detail::GkCell>, decltype(worse)> heap(worse);

    long next_id = 0;
    heap.push(detail::gk15(f, a, b, next_id++));
    double total = heap.top().value;
    double errsum = heap.top().error;
    int subdivisions = 0;

    auto tolerance = [&](double v) { return std::max(spec.abs_tol, spec.rel_tol * std::abs(v)); };

    while (errsum > tolerance(total) && subdivisions < spec.max_subdivisions) {
        detail::GkCell top = heap.top();
        heap.pop();
        const double mid = 0.5 * (top.a + top.b);
        if (mid <= top.a || mid >= top.b) { // interval exhausted at double resolution
            heap.push({top.a, top.b, top.value, 0.0, top.id});
            errsum -= top.error;
            continue;
        }
        const auto left = detail::gk15(f, top.a, mid, next_id++);
        const auto right = detail::gk15(f, mid, top.b, next_id++);
        total += left.value + right.value - top.value;
        errsum += left.error + right.error - top.error;
        heap.push(left);
        heap.push(right);
        ++subdivisions;
    }

    // Recompute value and error from the final partition with compensated
    // summation, in a deterministic (endpoint-sorted) order.
    std::vector<detail::GkCell> cells;
    cells.reserve(heap.size());
    while (!heap.empty()) { cells.push_back(heap.top()); heap.pop(); }
    std::sort(cells.begin(), cells.end(),
              [](const detail::GkCell& l, const detail::GkCell& r) { return l.a < r.a; });
    std::vector<double> vals, errs;
    vals.reserve(cells.size());
    errs.reserve(cells.size());
    for (const auto& c : cells) { vals.push_back(c.value); errs.push_back(c.error); }
    QuadratureResult res;
    res.value = detail::neumaier_sum(vals);
    res.error_estimate = detail::neumaier_sum(errs);
    res.subdivisions = subdivisions;

    if (res.error_estimate > tolerance(res.value)) {
        throw convergence_error("integrate_adaptive: tolerance not reached after " +
                                    std::to_string(subdivisions) + " subdivisions",
                                res.value, res.error_estimate);
    }
    return res;
}

// Adaptive integration with interior breakpoints (kinks, branch edges).
template <class F>
QuadratureResult integrate_segments(F&& f, const std::vector<double>& knots,
                                    const QuadratureSpec& spec = {}) {
    if (knots.size() < 2) throw validation_error("integrate_segments: need >= 2 knots");
    QuadratureSpec seg = spec;
    const double n = static_cast<double>(knots.size() - 1);
    seg.abs_tol = spec.abs_tol / n;
    seg.rel_tol = spec.rel_tol / n;
    std::vector<double> vals, errs;
    int subs = 0;
    for (size_t i = 0; i + 1 < knots.size(); ++i) {
        if (!(knots[i] < knots[i + 1]))
            throw validation_error("integrate_segments: knots must be strictly increasing");
        const auto r = integrate_adaptive(f, knots[i], knots[i + 1], seg);
        vals.push_back(r.value);
        errs.push_back(r.error_estimate);
        subs += r.subdivisions;
    }
    QuadratureResult res;
    res.value = detail::neumaier_sum(vals);
    res.error_estimate = detail::neumaier_sum(errs);
    res.subdivisions = subs;
    return res;
}

} // namespace ebath
