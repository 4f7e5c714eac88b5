#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "orlicz/grid.hpp"
#include "orlicz/mo_function.hpp"
#include "orlicz/point.hpp"

namespace testutil {

using orlicz::MOFunction;
using orlicz::Point;

inline Point p2(double a, double b) { return Point{a, b}; }
inline Point p3(double a, double b, double c) { return Point{a, b, c}; }

inline std::vector<Point> unit_square_probes() {
    return {p2(0, 0), p2(1, 0), p2(0, 1), p2(1, 1), p2(0.5, 0.5), p2(0.3, 0.7)};
}

// x-independent scalar function of t wrapped as an MOFunction (no derivative).
inline MOFunction scalar_fn(double (*fn)(double)) {
    MOFunction f;
    f.family_tag = "custom";
    f.evaluate = [fn](const Point&, double t) { return fn(t); };
    return f;
}

template <class Fn>
MOFunction scalar_lambda(Fn fn) {
    MOFunction f;
    f.family_tag = "custom";
    f.evaluate = [fn](const Point&, double t) { return fn(t); };
    return f;
}

template <class Fn, class DFn>
MOFunction scalar_lambda_d(Fn fn, DFn dfn) {
    MOFunction f = scalar_lambda(fn);
    f.derivative = [dfn](const Point&, double t) { return dfn(t); };
    f.derivable_in_t = true;
    return f;
}

// Dense grid maximization of s t - phi(t) over t in [0, hi]: the conjugate oracle.
template <class Fn>
double conjugate_grid_oracle(Fn phi, double s, double hi = 100.0, long long n = 10000000) {
    double best = 0.0;
    for (long long i = 0; i <= n; ++i) {
        const double t = hi * static_cast<double>(i) / static_cast<double>(n);
        best = std::max(best, s * t - phi(t));
    }
    return best;
}

// Lower convex hull of dense graph samples on [0, hi]; evaluation at q.
template <class Fn>
double convex_envelope_oracle(Fn fn, double q, double hi = 10.0, int n = 100000) {
    std::vector<double> xs, ys;
    xs.reserve(static_cast<std::size_t>(n) + 1);
    ys.reserve(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) {
        const double t = hi * i / n;
        xs.push_back(t);
        ys.push_back(fn(t));
    }
    std::vector<std::size_t> hull;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        while (hull.size() >= 2) {
            const std::size_t a = hull[hull.size() - 2], b = hull[hull.size() - 1];
            const double cross =
                (xs[b] - xs[a]) * (ys[i] - ys[a]) - (ys[b] - ys[a]) * (xs[i] - xs[a]);
            if (cross <= 0.0)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(i);
    }
    std::size_t lo = 0, hi_i = hull.size() - 1;
    while (hi_i - lo > 1) {
        const std::size_t mid = (lo + hi_i) / 2;
        (xs[hull[mid]] <= q ? lo : hi_i) = mid;
    }
    const std::size_t a = hull[lo], b = hull[hi_i];
    const double w = (q - xs[a]) / (xs[b] - xs[a]);
    return ys[a] + w * (ys[b] - ys[a]);
}

}  // namespace testutil
