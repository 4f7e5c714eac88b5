#include "orlicz/convex_calculus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

#include "orlicz/detail/slice_key.hpp"

namespace orlicz {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class G>
double golden_max(G&& g, double a, double b, double fa_hint = -kInf) {
    (void)fa_hint;
    const double invphi = 0.6180339887498949;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = g(x1), f2 = g(x2);
    for (int i = 0; i < 200 && (b - a) > 1e-14 * (std::abs(b) + 1e-300); ++i) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = g(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = g(x1);
        }
    }
    return std::max(f1, f2);
}

// sup of a concave objective over [0, inf). Brackets the peak along powers of
// two, then refines by golden section. Throws when the objective is still
// rising at kBracketCap.
template <class G>
double sup_over_ray(G&& g, const char* what) {
    const double g0 = g(0.0);
    double t_prev = 0.0, g_prev = g0;
    double t_cur = 1.0, g_cur = g(1.0);
    if (g_cur >= g_prev) {
        double t_next = 2.0;
        while (true) {
            const double g_next = g(t_next);
            if (!(g_next >= g_cur)) {
                return std::max({g0, g_cur, golden_max(g, t_prev, t_next)});
            }
            if (t_next > kBracketCap) throw BracketFailure(what);
            t_prev = t_cur;
            g_prev = g_cur;
            t_cur = t_next;
            g_cur = g_next;
            t_next *= 2.0;
        }
    }
    // peak inside (0, 1)
    double hi = 1.0, ghi = g_cur;
    double mid = 0.5, gmid = g(mid);
    while (gmid <= ghi && mid > 1e-300) {
        hi = mid;
        ghi = gmid;
        mid *= 0.5;
        gmid = g(mid);
    }
    if (mid <= 1e-300) return std::max(g0, ghi);
    // keep halving while still climbing toward the origin
    double lo = mid * 0.5, glo = g(lo);
    while (glo > gmid && lo > 1e-300) {
        hi = mid;
        ghi = gmid;
        mid = lo;
        gmid = glo;
        lo *= 0.5;
        glo = g(lo);
    }
    (void)ghi;
    (void)g_prev;
    return std::max({g0, gmid, golden_max(g, lo, hi)});
}

int decade_index(double t, int n_decades, double t_lo) {
    const int d = static_cast<int>(std::floor(std::log10(t / t_lo) + 1e-12));
    return std::clamp(d, 0, n_decades - 1);
}

}  // namespace

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::holds: return "holds";
        case Verdict::fails: return "fails";
        default: return "inconclusive";
    }
}

std::vector<double> geometric_grid(double lo, double hi, int per_decade) {
    std::vector<double> g;
    const double ratio = std::pow(10.0, 1.0 / per_decade);
    for (double t = lo; t <= hi * (1.0 + 1e-12); t *= ratio) g.push_back(t);
    return g;
}

double conjugate(const MOFunction& phi, const Point& x, double s) {
    s = std::abs(s);
    if (s == 0.0) return 0.0;
    if (phi.has_derivative()) {
        // phi' is nondecreasing; the supremum of s t - phi(t) sits where phi'(t) = s.
        double hi = 1.0;
        while (phi.derivative(x, hi) < s) {
            hi *= 2.0;
            if (hi > kBracketCap)
                throw BracketFailure("conjugate: no t <= 1e12 with phi'(x,t) >= s");
        }
        double lo = 0.0;
        for (int i = 0; i < 200 && (hi - lo) > 1e-15 * hi; ++i) {
            const double mid = 0.5 * (lo + hi);
            (phi.derivative(x, mid) < s ? lo : hi) = mid;
        }
        const double t = 0.5 * (lo + hi);
        return std::max(0.0, s * t - phi.evaluate(x, t));
    }
    auto obj = [&](double t) { return s * t - phi.evaluate(x, t); };
    return std::max(0.0, sup_over_ray(obj, "conjugate: objective rising past 1e12"));
}

double conjugate_of_map(const std::function<double(const Point&, double)>& h, const Point& x,
                        double s) {
    s = std::abs(s);
    auto obj = [&](double t) { return s * t - h(x, t); };
    double best_v = obj(0.0);
    double best_t = 0.0;
    const int per_decade = 96;
    const double ratio = std::pow(10.0, 1.0 / per_decade);
    int flat_decades = 0;
    bool bracketed = false;
    for (double lo = 1e-9; lo < kBracketCap; lo *= 10.0) {
        double decade_best = -kInf;
        for (double t = lo; t < lo * 10.0 * (1.0 - 1e-12); t *= ratio) {
            const double v = obj(t);
            if (v > best_v) {
                best_v = v;
                best_t = t;
            }
            decade_best = std::max(decade_best, v);
        }
        if (decade_best < best_v - (1.0 + 0.1 * std::abs(best_v))) {
            if (++flat_decades >= 2) {
                bracketed = true;
                break;
            }
        } else {
            flat_decades = 0;
        }
    }
    if (!bracketed) throw BracketFailure("conjugate: scan still improving at 1e12");
    if (best_t == 0.0) return best_v;
    const double r2 = ratio * ratio;
    return std::max(best_v, golden_max(obj, best_t / r2, best_t * r2));
}

double biconjugate(const std::function<double(const Point&, double)>& h, const Point& x,
                   double t) {
    t = std::abs(t);
    auto obj = [&](double s) { return t * s - conjugate_of_map(h, x, s); };
    return std::max(0.0, sup_over_ray(obj, "biconjugate: outer objective rising past 1e12"));
}

double generalized_inverse(const MOFunction& phi, const Point& x, double s) {
    s = std::abs(s);
    if (phi.has_inverse()) return phi.inverse(x, s);
    if (s == 0.0) return 0.0;
    double hi = 1.0;
    while (phi.evaluate(x, hi) <= s && std::isfinite(hi)) hi *= 2.0;
    double lo = (hi == 1.0) ? 0.0 : hi * 0.5;
    for (int i = 0; i < 200 && (hi - lo) > 1e-15 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (phi.evaluate(x, mid) <= s ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

GrowthVerdict grows_essentially_slower(const MOFunction& psi, const MOFunction& phi,
                                       const std::vector<double>& c_grid, double t_max,
                                       const std::vector<Point>& x_samples) {
    if (c_grid.empty()) throw std::invalid_argument("grows_essentially_slower: empty c_grid");
    if (t_max < 1e3) throw std::invalid_argument("grows_essentially_slower: t_max < 1e3");
    const auto grid = geometric_grid(1.0, t_max, 64);
    const int n_dec = std::max(3, static_cast<int>(std::round(std::log10(t_max))));

    GrowthVerdict out;
    bool all_hold = true;
    double worst_last = -1.0;
    for (const Point& x : x_samples) {
        for (double c : c_grid) {
            std::vector<double> dmax(static_cast<std::size_t>(n_dec), 0.0);
            std::vector<double> darg(static_cast<std::size_t>(n_dec), 1.0);
            for (double t : grid) {
                const double den = phi(x, c * t);
                if (!(den > 0.0)) continue;
                const double r = psi(x, t) / den;
                const int d = decade_index(t, n_dec, 1.0);
                if (r > dmax[static_cast<std::size_t>(d)]) {
                    dmax[static_cast<std::size_t>(d)] = r;
                    darg[static_cast<std::size_t>(d)] = t;
                }
            }
            const double r0 = dmax[static_cast<std::size_t>(n_dec - 3)];
            const double r1 = dmax[static_cast<std::size_t>(n_dec - 2)];
            const double r2 = dmax[static_cast<std::size_t>(n_dec - 1)];
            const bool decaying = r0 > r1 * (1.0 + 1e-12) && r1 > r2 * (1.0 + 1e-12);
            const bool trending_to_zero = r2 <= 1e-3 || r2 <= 0.9 * r0;
            if (!(decaying && trending_to_zero)) all_hold = false;
            const bool nondecreasing_final = r2 >= r1 * (1.0 - 1e-12);
            if (nondecreasing_final && r2 > 1.0 - 1e-9) {
                out.verdict = Verdict::fails;
                out.witness = {x, c, darg[static_cast<std::size_t>(n_dec - 1)], r2};
                out.note = "ratio non-decreasing above 1 across final decades";
                return out;
            }
            if (r2 > worst_last) {
                worst_last = r2;
                out.witness = {x, c, darg[static_cast<std::size_t>(n_dec - 1)], r2};
            }
        }
    }
    out.verdict = all_hold ? Verdict::holds : Verdict::inconclusive;
    if (out.verdict == Verdict::inconclusive)
        out.note = "ratio decays too slowly to classify at t_max";
    return out;
}

Delta2Verdict delta2_check(const MOFunction& phi, const std::vector<Point>& x_samples,
                           double t_max) {
    if (t_max < 1e3) throw std::invalid_argument("delta2_check: t_max < 1e3");
    const auto grid = geometric_grid(1.0, t_max, 64);
    const int n_dec = std::max(2, static_cast<int>(std::round(std::log10(t_max))));

    Delta2Verdict out;
    std::vector<double> dmax(static_cast<std::size_t>(n_dec), 0.0);
    std::vector<GrowthWitness> dwit(static_cast<std::size_t>(n_dec));
    for (const Point& x : x_samples) {
        for (double t : grid) {
            const double den = phi(x, t);
            if (!(den > 0.0)) continue;
            const double num = phi(x, 2.0 * t);
            const double r = std::isfinite(num) ? num / den : kInf;
            const int d = decade_index(t, n_dec, 1.0);
            if (r > dmax[static_cast<std::size_t>(d)]) {
                dmax[static_cast<std::size_t>(d)] = r;
                dwit[static_cast<std::size_t>(d)] = {x, 2.0, t, r};
            }
        }
    }
    out.k_hat = *std::max_element(dmax.begin(), dmax.end());
    const double k_prev = dmax[static_cast<std::size_t>(n_dec - 2)];
    const double k_last = dmax[static_cast<std::size_t>(n_dec - 1)];
    const bool bounded = std::isfinite(k_last) && k_last <= k_prev * 1.05;
    out.verdict = bounded ? Verdict::holds : Verdict::fails;
    out.witness = dwit[static_cast<std::size_t>(n_dec - 1)];

    // Residual envelope for t < 1: the h(x) surrogate of the doubling bound.
    double resid = 0.0;
    for (const Point& x : x_samples) {
        for (double t : geometric_grid(1e-6, 1.0, 64)) {
            const double v = phi(x, 2.0 * t) - out.k_hat * phi(x, t);
            resid = std::max(resid, v);
        }
    }
    out.residual_supremum = resid;
    return out;
}

double epsilon_bound_constant(const std::function<double(const Point&, double)>& f,
                              const std::function<double(const Point&, double)>& g, double eps,
                              const std::vector<Point>& x_samples,
                              const std::vector<double>& t_grid) {
    if (t_grid.size() < 2) throw std::invalid_argument("epsilon_bound_constant: t_grid too small");
    const double t_lo = t_grid.front(), t_hi = t_grid.back();
    const int n_dec = std::max(2, static_cast<int>(std::round(std::log10(t_hi / t_lo))));

    double best = 0.0;
    Point best_x = x_samples.front();
    std::size_t best_i = 0;
    std::vector<double> dmax(static_cast<std::size_t>(n_dec), 0.0);
    for (const Point& x : x_samples) {
        for (std::size_t i = 0; i < t_grid.size(); ++i) {
            const double t = t_grid[i];
            const double v = std::max(0.0, g(x, t) - eps * f(x, t));
            const int d = decade_index(t, n_dec, t_lo);
            dmax[static_cast<std::size_t>(d)] = std::max(dmax[static_cast<std::size_t>(d)], v);
            if (v > best) {
                best = v;
                best_x = x;
                best_i = i;
            }
        }
    }
    const double d_prev = dmax[static_cast<std::size_t>(n_dec - 2)];
    const double d_last = dmax[static_cast<std::size_t>(n_dec - 1)];
    if (d_last > 0.0 && d_last > d_prev * (1.0 + 1e-12))
        throw DivergenceSuspected(
            "epsilon_bound_constant: (g - eps f)+ still growing in the final decade");

    if (best > 0.0) {
        // polish around the best grid cell
        const double a = t_grid[best_i > 0 ? best_i - 1 : 0];
        const double b = t_grid[std::min(best_i + 1, t_grid.size() - 1)];
        auto obj = [&](double t) { return g(best_x, t) - eps * f(best_x, t); };
        best = std::max(best, golden_max(obj, a, b));
    }
    return best;
}

// ---------------------------------------------------------------------------
// Cached convex envelope
// ---------------------------------------------------------------------------

namespace {

using detail::SliceKey;
using detail::SliceKeyHash;
using detail::key_of;

// Log-log tabulated envelope of one x-slice. `direct` slices passed the
// convexity probe and evaluate the underlying function unchanged.
struct EnvelopeSlice {
    bool direct = false;
    std::vector<double> log_t, log_v;

    double eval_table(double t) const {
        if (t <= 0.0) return 0.0;
        const double lt = std::log(t);
        const auto it = std::lower_bound(log_t.begin(), log_t.end(), lt);
        std::size_t j1 = static_cast<std::size_t>(it - log_t.begin());
        if (j1 == 0) j1 = 1;
        if (j1 >= log_t.size()) j1 = log_t.size() - 1;
        const std::size_t j0 = j1 - 1;
        const double w = (lt - log_t[j0]) / (log_t[j1] - log_t[j0]);
        return std::exp(log_v[j0] + w * (log_v[j1] - log_v[j0]));
    }

    double inverse_table(double s) const {
        if (s <= 0.0) return 0.0;
        const double ls = std::log(s);
        const auto it = std::lower_bound(log_v.begin(), log_v.end(), ls);
        std::size_t j1 = static_cast<std::size_t>(it - log_v.begin());
        if (j1 == 0) j1 = 1;
        if (j1 >= log_v.size()) j1 = log_v.size() - 1;
        const std::size_t j0 = j1 - 1;
        const double w = (ls - log_v[j0]) / (log_v[j1] - log_v[j0]);
        return std::exp(log_t[j0] + w * (log_t[j1] - log_t[j0]));
    }
};

class BiconjugateCache {
public:
    explicit BiconjugateCache(MOFunction h) : h_(std::move(h)) {}

    double eval(const Point& x, double t) const {
        t = std::abs(t);
        if (t == 0.0) return 0.0;
        const auto s = slice(x);
        return s->direct ? h_.evaluate(x, t) : s->eval_table(t);
    }

    double inverse(const Point& x, double s) const {
        s = std::abs(s);
        if (s == 0.0) return 0.0;
        const auto sl = slice(x);
        if (!sl->direct) return sl->inverse_table(s);
        if (h_.has_inverse()) return h_.inverse(x, s);
        double hi = 1.0;
        while (h_.evaluate(x, hi) <= s && std::isfinite(hi)) hi *= 2.0;
        double lo = (hi == 1.0) ? 0.0 : hi * 0.5;
        for (int i = 0; i < 200 && (hi - lo) > 1e-15 * hi; ++i) {
            const double mid = 0.5 * (lo + hi);
            (h_.evaluate(x, mid) <= s ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    }

private:
    std::shared_ptr<const EnvelopeSlice> slice(const Point& x) const {
        const SliceKey key = key_of(x);
        {
            std::shared_lock lk(mu_);
            auto it = slices_.find(key);
            if (it != slices_.end()) return it->second;
        }
        auto built = std::make_shared<EnvelopeSlice>(build(x));
        std::unique_lock lk(mu_);
        auto [it, inserted] = slices_.emplace(key, built);
        return it->second;
    }

    EnvelopeSlice build(const Point& x) const {
        EnvelopeSlice slice;
        if (probe_convex_slice(h_, x, 1e-6, 1e8, 1e-10)) {
            slice.direct = true;
            return slice;
        }
        // Dense graph samples, lower convex hull, then table values
        // env(t) = min(h(t), hull chord at t).
        const auto ts = geometric_grid(1e-10, 1e10, 192);
        std::vector<double> xs, ys;
        xs.reserve(ts.size() + 1);
        ys.reserve(ts.size() + 1);
        xs.push_back(0.0);
        ys.push_back(0.0);
        for (double t : ts) {
            const double v = h_.evaluate(x, t);
            if (std::isfinite(v) && v < 1e300) {
                xs.push_back(t);
                ys.push_back(v);
            }
        }
        // Andrew monotone chain, lower hull. Points already sorted by t.
        std::vector<std::size_t> hull;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            while (hull.size() >= 2) {
                const std::size_t a = hull[hull.size() - 2], b = hull[hull.size() - 1];
                const double cross = (xs[b] - xs[a]) * (ys[i] - ys[a]) -
                                     (ys[b] - ys[a]) * (xs[i] - xs[a]);
                if (cross <= 0.0)
                    hull.pop_back();
                else
                    break;
            }
            hull.push_back(i);
        }
        auto hull_at = [&](double t) {
            // binary search the hull segment containing t
            std::size_t lo = 0, hi = hull.size() - 1;
            while (hi - lo > 1) {
                const std::size_t mid = (lo + hi) / 2;
                (xs[hull[mid]] <= t ? lo : hi) = mid;
            }
            const std::size_t a = hull[lo], b = hull[hi];
            const double w = (t - xs[a]) / (xs[b] - xs[a]);
            return ys[a] + w * (ys[b] - ys[a]);
        };
        const auto nodes = geometric_grid(1e-8, 1e9, 128);
        slice.log_t.reserve(nodes.size());
        slice.log_v.reserve(nodes.size());
        double prev_v = 0.0;
        for (double t : nodes) {
            double v = std::min(h_.evaluate(x, t), hull_at(t));
            if (!(v > prev_v)) v = prev_v * (1.0 + 1e-14) + 1e-300;
            slice.log_t.push_back(std::log(t));
            slice.log_v.push_back(std::log(v));
            prev_v = v;
        }
        return slice;
    }

    MOFunction h_;
    mutable std::shared_mutex mu_;
    mutable std::unordered_map<SliceKey, std::shared_ptr<const EnvelopeSlice>, SliceKeyHash>
        slices_;
};

}  // namespace

MOFunction make_biconjugate(const MOFunction& h) {
    auto cache = std::make_shared<BiconjugateCache>(h);
    MOFunction f;
    f.family_tag = "biconjugate";
    f.evaluate = [cache](const Point& x, double t) { return cache->eval(x, t); };
    f.inverse = [cache](const Point& x, double s) { return cache->inverse(x, s); };
    return f;
}

}  // namespace orlicz
