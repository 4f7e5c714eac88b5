#include "orlicz/sobolev.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

namespace orlicz {

namespace {

// 15-point Gauss-Legendre on [-1,1].
constexpr int kGL = 15;
constexpr double kGLx[kGL] = {
    -0.9879925180204854, -0.9372733924007059, -0.8482065834104272, -0.7244177313601700,
    -0.5709721726085388, -0.3941513470775634, -0.2011940939974345, 0.0,
    0.2011940939974345,  0.3941513470775634,  0.5709721726085388,  0.7244177313601700,
    0.8482065834104272,  0.9372733924007059,  0.9879925180204854};
constexpr double kGLw[kGL] = {
    0.0307532419961173, 0.0703660474881081, 0.1071592204671719, 0.1395706779261543,
    0.1662692058169939, 0.1861610000155622, 0.2025782419255613, 0.1984314853271116,
    0.1861610000155622, 0.1662692058169939, 0.1395706779261543, 0.1071592204671719,
    0.0703660474881081, 0.0307532419961173};

template <class F>
double gl15(F&& f, double a, double b) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < kGL; ++i) s += kGLw[i] * f(mid + half * kGLx[i]);
    return s * half;
}

}  // namespace

IntegrabilityVerdict check_integrability(const MOFunction& phi_mm, int dimension,
                                         const std::vector<Point>& x_samples) {
    IntegrabilityVerdict out;
    if (dimension < 2) throw std::invalid_argument("check_integrability: N >= 2 required");
    const double expo = 1.0 + 1.0 / dimension;
    bool all_hold = true;
    for (const Point& x : x_samples) {
        auto f = [&](double t) { return generalized_inverse(phi_mm, x, t) / std::pow(t, expo); };

        // Head on (0,1]: dyadically graded panels toward 0. Converged when the
        // extrapolated geometric tail is negligible; divergent when panel
        // contributions keep growing.
        double head = 0.0;
        double prev = -1.0;
        int grow_streak = 0;
        bool head_converged = false, head_diverged = false;
        double hi = 1.0;
        for (int level = 0; level < 60; ++level) {
            const double lo = hi * 0.5;
            const double c = gl15(f, lo, hi);
            head += c;
            if (prev > 0.0) {
                const double rho = c / prev;
                if (rho >= 1.0 - 1e-6) {
                    if (++grow_streak >= 3) {
                        head_diverged = true;
                        break;
                    }
                } else {
                    grow_streak = 0;
                    const double tail = c * rho / (1.0 - rho);
                    if (level >= 4 && tail < 1e-9 * (head + tail)) {
                        head += tail;
                        head_converged = true;
                        break;
                    }
                }
            }
            prev = c;
            hi = lo;
        }

        // Tail on [1, 1e3]: decade contributions must show no sign of decay.
        auto decade = [&](double a) {
            double s = 0.0;
            double lo2 = a;
            for (int k = 0; k < 8; ++k) {
                const double hi2 = lo2 * std::pow(10.0, 1.0 / 8.0);
                s += gl15(f, lo2, hi2);
                lo2 = hi2;
            }
            return s;
        };
        const double d0 = decade(1.0);
        const double d1 = decade(10.0);
        const double d2 = decade(100.0);
        const double q1 = d1 / d0, q2 = d2 / d1;
        out.tail_trend = q2;
        const bool tail_diverges = q1 >= 0.999 && q2 >= 0.999;
        const bool tail_converges = q2 <= 0.9;

        if (head_diverged || tail_converges) {
            out.verdict = Verdict::fails;
            out.witness = x;
            out.note = head_diverged ? "head integral divergent near 0"
                                     : "tail integral saturating (converges)";
            return out;
        }
        if (!(head_converged && tail_diverges)) all_hold = false;
        out.head_value = head;
    }
    out.verdict = all_hold ? Verdict::holds : Verdict::inconclusive;
    if (out.verdict == Verdict::inconclusive) out.note = "head or tail trend unresolved";
    return out;
}

SobolevConjugate::SobolevConjugate(MOFunction phi_mm, int dimension)
    : phi_mm_(std::move(phi_mm)), n_(dimension) {
    if (dimension < 2) throw std::invalid_argument("sobolev conjugate: N >= 2 required");
}

double SobolevConjugate::integrand(const Point& x, double t) const {
    return generalized_inverse(phi_mm_, x, t) / std::pow(t, 1.0 + 1.0 / n_);
}

double SobolevConjugate::segment_integral(const Point& x, double s1, double s2) const {
    // regular panels away from 0, at most ~2x geometric growth per panel
    double total = 0.0;
    double lo = s1;
    const int panels = std::max(1, static_cast<int>(std::ceil(std::log2(s2 / s1))));
    const double ratio = std::pow(s2 / s1, 1.0 / panels);
    for (int i = 0; i < panels; ++i) {
        const double hi = (i == panels - 1) ? s2 : lo * ratio;
        total += gl15([&](double t) { return integrand(x, t); }, lo, hi);
        lo = hi;
    }
    return total;
}

double SobolevConjugate::inverse_transform(const Point& x, double s,
                                           QuadratureReport* rep) const {
    if (s <= 0.0) {
        if (rep) *rep = {0.0, 0};
        return 0.0;
    }
    // substitution t = s e^{-tau}: integrand g(tau) = inv(s e^{-tau}) (s e^{-tau})^{-1/N}
    auto g = [&](double tau) {
        const double t = s * std::exp(-tau);
        return generalized_inverse(phi_mm_, x, t) * std::pow(t, -1.0 / n_);
    };
    double sum = 0.0;
    double tau = 0.0;
    double width = 1.0;
    double g_lo = g(0.0);
    int panels = 0;
    for (; panels < 60; ++panels) {
        const double g_hi = g(tau + width);
        sum += gl15(g, tau, tau + width);
        tau += width;
        if (panels >= 1 && g_hi <= 1e-16 * sum) {
            const double lam = std::log(std::max(g_lo, 1e-300) / std::max(g_hi, 1e-300)) / width;
            const double tail = lam > 0.0 ? g_hi / lam : g_hi;
            if (rep) *rep = {tail / std::max(sum, 1e-300) + 1e-14, panels + 1};
            return sum;
        }
        // aim for roughly one e-folding of decay per panel
        const double lam = std::log(std::max(g_lo, 1e-300) / std::max(g_hi, 1e-300)) / width;
        if (std::isfinite(lam) && lam > 1e-3)
            width = std::clamp(1.0 / lam, 0.25, 16.0);
        else
            width = std::min(width * 2.0, 16.0);
        g_lo = g_hi;
    }
    throw QuadratureDivergence(
        "sobolev inverse transform: graded refinement near 0 did not converge in 60 levels");
}

double SobolevConjugate::forward_exact(const Point& x, double t) const {
    if (t <= 0.0) return 0.0;
    double s_lo = 0.0, f_lo = 0.0;
    double s_hi = 1.0;
    double f_hi = inverse_transform(x, s_hi);
    while (f_hi < t) {
        s_lo = s_hi;
        f_lo = f_hi;
        s_hi *= 2.0;
        if (s_hi > kBracketCap)
            throw BracketFailure("sobolev forward: no s <= 1e12 with F(x,s) >= t");
        f_hi = f_lo + segment_integral(x, s_lo, s_hi);
    }
    while (s_hi - s_lo > 1e-10 * s_hi) {
        const double mid = 0.5 * (s_lo + s_hi);
        const double f_mid = s_lo > 0.0 ? f_lo + segment_integral(x, s_lo, mid)
                                        : inverse_transform(x, mid);
        if (f_mid < t) {
            s_lo = mid;
            f_lo = f_mid;
        } else {
            s_hi = mid;
        }
    }
    return 0.5 * (s_lo + s_hi);
}

double SobolevConjugate::ForwardSlice::forward(double t) const {
    if (t <= 0.0) return 0.0;
    const double lt = std::log(t);
    const auto it = std::lower_bound(log_f.begin(), log_f.end(), lt);
    std::size_t j1 = static_cast<std::size_t>(it - log_f.begin());
    if (j1 == 0) j1 = 1;
    if (j1 >= log_f.size()) j1 = log_f.size() - 1;
    const std::size_t j0 = j1 - 1;
    const double w = (lt - log_f[j0]) / (log_f[j1] - log_f[j0]);
    return std::exp(log_s[j0] + w * (log_s[j1] - log_s[j0]));
}

std::shared_ptr<const SobolevConjugate::ForwardSlice> SobolevConjugate::slice(
    const Point& x) const {
    const auto key = detail::key_of(x);
    {
        std::shared_lock lk(mu_);
        auto it = slices_.find(key);
        if (it != slices_.end()) return it->second;
    }
    auto sl = std::make_shared<ForwardSlice>();
    const int per_decade = 128;
    const double ratio = std::pow(10.0, 1.0 / per_decade);
    double s = 1e-9;
    double f = inverse_transform(x, s);
    sl->log_s.push_back(std::log(s));
    sl->log_f.push_back(std::log(f));
    while (s < 1e12) {
        const double s_next = s * ratio;
        f += segment_integral(x, s, s_next);
        s = s_next;
        sl->log_s.push_back(std::log(s));
        sl->log_f.push_back(std::log(f));
    }
    std::unique_lock lk(mu_);
    auto [it, inserted] = slices_.emplace(key, std::move(sl));
    return it->second;
}

double SobolevConjugate::forward(const Point& x, double t) const {
    if (t <= 0.0) return 0.0;
    if (!cache_enabled_) return forward_exact(x, t);
    return slice(x)->forward(t);
}

MOFunction forward_function(const std::shared_ptr<const SobolevConjugate>& sc) {
    MOFunction f;
    f.family_tag = "sobolev-conjugate";
    f.evaluate = [sc](const Point& x, double t) { return sc->forward(x, t); };
    f.inverse = [sc](const Point& x, double s) { return sc->inverse_transform(x, s); };
    return f;
}

TraceFunction build_trace_function(const std::shared_ptr<const SobolevConjugate>& sc) {
    TraceFunction tf;
    tf.dimension = sc->dimension();
    const double N = sc->dimension();
    tf.psi_min.family_tag = "trace-psi-min";
    tf.psi_min.evaluate = [sc, N](const Point& x, double t) {
        return std::pow(sc->forward(x, t), (N - 1.0) / N);
    };
    tf.psi_min.inverse = [sc, N](const Point& x, double s) {
        return sc->inverse_transform(x, std::pow(s, N / (N - 1.0)));
    };
    return tf;
}

DerivativeGrowthVerdict check_derivative_growth(const SobolevConjugate& sc, double nu, double c0,
                                                const std::vector<Point>& x_samples,
                                                const std::vector<double>& t_grid,
                                                const std::array<double, kMaxDim>& domain_lo,
                                                const std::array<double, kMaxDim>& domain_hi) {
    if (!(nu > 0.0 && nu < 1.0 / sc.dimension()))
        throw std::invalid_argument("check_derivative_growth: nu must lie in (0, 1/N)");
    if (!(c0 > 0.0)) throw std::invalid_argument("check_derivative_growth: c0 must be positive");
    DerivativeGrowthVerdict out;
    for (const Point& x0 : x_samples) {
        for (int a = 0; a < x0.dim; ++a) {
            const auto ai = static_cast<std::size_t>(a);
            const double width = domain_hi[ai] - domain_lo[ai];
            const double h = 1e-4 * width;
            Point xp = x0, xm = x0;
            const double xi = std::clamp(x0[a], domain_lo[ai] + h, domain_hi[ai] - h);
            xp[a] = xi + h;
            xm[a] = xi - h;
            for (double t : t_grid) {
                const double fp = sc.forward(xp, t);
                const double fm = sc.forward(xm, t);
                const double fc = 0.5 * (fp + fm);
                const double dfdx = std::abs(fp - fm) / (2.0 * h);
                const double bracket = c0 * (fc + std::pow(fc, 1.0 + nu));
                const double ratio = bracket > 0.0 ? dfdx / bracket : 0.0;
                if (ratio > out.worst_ratio) {
                    out.worst_ratio = ratio;
                    out.witness = {x0, static_cast<double>(a), t, ratio};
                }
            }
        }
    }
    out.verdict = out.worst_ratio <= 1.0 + 1e-9 ? Verdict::holds : Verdict::fails;
    return out;
}

}  // namespace orlicz
