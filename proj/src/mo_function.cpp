#include "orlicz/mo_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "orlicz/convex_calculus.hpp"

namespace orlicz {

double MOFunction::deriv(const Point& x, double t) const {
    t = std::abs(t);
    if (derivative) return derivative(x, t);
    const double h = std::max(1e-6, 1e-6 * t);
    const double tm = std::max(0.0, t - h);
    return (evaluate(x, t + h) - evaluate(x, tm)) / (t + h - tm);
}

MOFunction make_power(ExponentField p) {
    MOFunction f;
    f.family_tag = "power";
    f.derivable_in_t = true;
    f.evaluate = [p](const Point& x, double t) { return std::pow(t, p(x)); };
    f.derivative = [p](const Point& x, double t) {
        const double px = p(x);
        return t == 0.0 ? 0.0 : px * std::pow(t, px - 1.0);
    };
    f.inverse = [p](const Point& x, double s) { return std::pow(s, 1.0 / p(x)); };
    return f;
}

MOFunction make_power(double p) {
    MOFunction f = make_power([p](const Point&) { return p; });
    f.lipschitz_in_x = true;
    return f;
}

MOFunction make_power_log(ExponentField p, double alpha) {
    MOFunction f;
    f.family_tag = "power-log";
    f.derivable_in_t = true;
    f.evaluate = [p, alpha](const Point& x, double t) {
        return std::pow(t, p(x)) * std::pow(std::log(std::exp(1.0) + t), alpha);
    };
    f.derivative = [p, alpha](const Point& x, double t) {
        if (t == 0.0) return 0.0;
        const double px = p(x);
        const double e = std::exp(1.0);
        const double L = std::log(e + t);
        return std::pow(t, px - 1.0) * std::pow(L, alpha - 1.0) * (px * L + alpha * t / (e + t));
    };
    return f;
}

MOFunction make_power_log(double p, double alpha) {
    MOFunction f = make_power_log([p](const Point&) { return p; }, alpha);
    f.lipschitz_in_x = true;
    return f;
}

namespace {

// Multilinear interpolation of nodal exponent values on a uniform lattice.
struct TabulatedExponent {
    int dim;
    std::array<double, kMaxDim> lo, hi;
    std::array<int, kMaxDim> nodes;
    std::vector<double> values;

    double operator()(const Point& x) const {
        std::array<int, kMaxDim> base{};
        std::array<double, kMaxDim> frac{};
        for (int a = 0; a < dim; ++a) {
            const int n = nodes[static_cast<std::size_t>(a)];
            const double h =
                (hi[static_cast<std::size_t>(a)] - lo[static_cast<std::size_t>(a)]) / (n - 1);
            double r = (x[a] - lo[static_cast<std::size_t>(a)]) / h;
            r = std::clamp(r, 0.0, static_cast<double>(n - 1));
            int b = std::min(static_cast<int>(r), n - 2);
            base[static_cast<std::size_t>(a)] = b;
            frac[static_cast<std::size_t>(a)] = r - b;
        }
        double result = 0.0;
        const int corners = 1 << dim;
        for (int c = 0; c < corners; ++c) {
            double w = 1.0;
            std::size_t flat = 0;
            std::size_t stride = 1;
            for (int a = 0; a < dim; ++a) {
                const int bit = (c >> a) & 1;
                w *= bit ? frac[static_cast<std::size_t>(a)]
                         : 1.0 - frac[static_cast<std::size_t>(a)];
                flat += stride * static_cast<std::size_t>(base[static_cast<std::size_t>(a)] + bit);
                stride *= static_cast<std::size_t>(nodes[static_cast<std::size_t>(a)]);
            }
            result += w * values[flat];
        }
        return result;
    }
};

}  // namespace

MOFunction make_tabulated_power(int dim, const std::array<double, kMaxDim>& lo,
                                const std::array<double, kMaxDim>& hi,
                                const std::array<int, kMaxDim>& nodes,
                                std::vector<double> exponent_values) {
    std::size_t expected = 1;
    for (int a = 0; a < dim; ++a) expected *= static_cast<std::size_t>(nodes[static_cast<std::size_t>(a)]);
    if (exponent_values.size() != expected)
        throw std::invalid_argument("tabulated exponent: value count does not match lattice");
    TabulatedExponent tab{dim, lo, hi, nodes, std::move(exponent_values)};
    MOFunction f = make_power([tab](const Point& x) { return tab(x); });
    f.family_tag = "tabulated";
    return f;
}

MOFunction make_custom(MOFunction::Eval phi, MOFunction::Eval dphi, MOFunction::Eval inv) {
    MOFunction f;
    f.family_tag = "custom";
    f.evaluate = std::move(phi);
    f.derivative = std::move(dphi);
    f.inverse = std::move(inv);
    f.derivable_in_t = static_cast<bool>(f.derivative);
    return f;
}

MOFunction make_conjugate_function(const MOFunction& phi, bool allow_analytic) {
    if (allow_analytic && phi.family_tag == "power") {
        // phi = t^p  =>  phi*(s) = (p-1) (s/p)^{p/(p-1)}, with matching
        // derivative (s/p)^{1/(p-1)} and inverse p (s/(p-1))^{(p-1)/p}.
        const MOFunction base = phi;
        MOFunction f;
        f.family_tag = "power-conjugate";
        f.derivable_in_t = true;
        f.evaluate = [base](const Point& x, double s) {
            // Recover p(x) from phi(x, e) = e^p.
            const double p = std::log(base.evaluate(x, std::exp(1.0)));
            return (p - 1.0) * std::pow(s / p, p / (p - 1.0));
        };
        f.derivative = [base](const Point& x, double s) {
            const double p = std::log(base.evaluate(x, std::exp(1.0)));
            return s == 0.0 ? 0.0 : std::pow(s / p, 1.0 / (p - 1.0));
        };
        f.inverse = [base](const Point& x, double s) {
            const double p = std::log(base.evaluate(x, std::exp(1.0)));
            return p * std::pow(s / (p - 1.0), (p - 1.0) / p);
        };
        return f;
    }
    MOFunction base = phi;
    MOFunction f;
    f.family_tag = "conjugate";
    f.evaluate = [base](const Point& x, double s) { return conjugate(base, x, s); };
    return f;
}

NFunctionReport probe_n_function(const MOFunction& phi, const std::vector<Point>& xs,
                                 double t_lo, double t_hi) {
    NFunctionReport rep;
    auto fail = [&](const Point& x, double t, const std::string& why) {
        rep.pass = false;
        rep.failure = why;
        rep.witness_x = x;
        rep.witness_t = t;
    };
    rep.inf_phi_at_one = std::numeric_limits<double>::infinity();
    const int per_decade = 64;
    const double ratio = std::pow(10.0, 1.0 / per_decade);
    for (const Point& x : xs) {
        if (std::abs(phi(x, 0.0)) > 1e-14) {
            fail(x, 0.0, "phi(x,0) != 0");
            return rep;
        }
        const double at_one = phi(x, 1.0);
        rep.inf_phi_at_one = std::min(rep.inf_phi_at_one, at_one);

        double prev_t = 0.0, prev_v = 0.0;
        bool superlinear_hi = false, sublinear_lo = false;
        std::vector<double> ts, vs;
        for (double t = t_lo; t <= t_hi * (1.0 + 1e-12); t *= ratio) {
            const double v = phi(x, t);
            if (v <= 0.0) {
                fail(x, t, "phi(x,t) <= 0 for t > 0");
                return rep;
            }
            if (v < prev_v * (1.0 - 1e-12)) {
                fail(x, t, "phi(x,.) decreasing");
                return rep;
            }
            if (v / t >= 1e3 * at_one) superlinear_hi = true;
            if (v / t <= 1e-3 * at_one) sublinear_lo = true;
            ts.push_back(t);
            vs.push_back(v);
            prev_t = t;
            prev_v = v;
        }
        (void)prev_t;
        // Midpoint convexity on consecutive triples of the geometric grid:
        // phi((t0+t2)/2) <= (w phi(t0) + (1-w) phi(t2)) by the chord at the midpoint.
        for (std::size_t i = 0; i + 2 < ts.size(); ++i) {
            const double tm = 0.5 * (ts[i] + ts[i + 2]);
            const double w = (ts[i + 2] - tm) / (ts[i + 2] - ts[i]);
            const double chord = w * vs[i] + (1.0 - w) * vs[i + 2];
            const double vm = phi(x, tm);
            if (vm > chord + 1e-10 * (1.0 + std::abs(chord))) {
                fail(x, tm, "midpoint convexity violated");
                return rep;
            }
        }
        if (!superlinear_hi) {
            fail(x, t_hi, "no superlinearity witness: phi(x,T)/T < 1e3*phi(x,1) for all tested T");
            return rep;
        }
        if (!sublinear_lo) {
            fail(x, t_lo, "no sublinearity witness at origin");
            return rep;
        }
    }
    if (!(rep.inf_phi_at_one > 0.0)) {
        rep.pass = false;
        rep.failure = "inf_x phi(x,1) <= 0";
    }
    return rep;
}

bool probe_convex_slice(const MOFunction& phi, const Point& x, double t_lo, double t_hi,
                        double rel_slack) {
    const int per_decade = 32;
    const double ratio = std::pow(10.0, 1.0 / per_decade);
    double t0 = t_lo;
    while (t0 * ratio * ratio <= t_hi) {
        const double t2 = t0 * ratio * ratio;
        const double tm = 0.5 * (t0 + t2);
        const double w = (t2 - tm) / (t2 - t0);
        const double chord = w * phi(x, t0) + (1.0 - w) * phi(x, t2);
        const double vm = phi(x, tm);
        if (vm > chord + rel_slack * (1.0 + std::abs(chord))) return false;
        t0 *= ratio;
    }
    return true;
}

AnisotropicFamily::AnisotropicFamily(std::vector<MOFunction> components)
    : components_(std::move(components)) {
    if (components_.size() < 2)
        throw std::invalid_argument("anisotropic family needs at least two components");
    const std::vector<MOFunction>* comps = &components_;

    phi_min_.family_tag = "phi-min";
    phi_min_.evaluate = [comps](const Point& x, double t) {
        double best = (*comps)[0].evaluate(x, t);
        for (std::size_t i = 1; i < comps->size(); ++i)
            best = std::min(best, (*comps)[i].evaluate(x, t));
        return best;
    };
    bool all_derivable = true, all_invertible = true;
    for (const auto& c : components_) {
        all_derivable = all_derivable && c.has_derivative();
        all_invertible = all_invertible && c.has_inverse();
    }
    if (all_derivable) {
        phi_min_.derivable_in_t = true;
        phi_min_.derivative = [comps](const Point& x, double t) {
            double best = (*comps)[0].evaluate(x, t);
            std::size_t arg = 0;
            for (std::size_t i = 1; i < comps->size(); ++i) {
                const double v = (*comps)[i].evaluate(x, t);
                if (v < best) {
                    best = v;
                    arg = i;
                }
            }
            return (*comps)[arg].derivative(x, t);
        };
    }
    if (all_invertible) {
        // sup{tau : min_i phi_i <= s} = max_i phi_i^{-1}(s)
        phi_min_.inverse = [comps](const Point& x, double s) {
            double best = (*comps)[0].inverse(x, s);
            for (std::size_t i = 1; i < comps->size(); ++i)
                best = std::max(best, (*comps)[i].inverse(x, s));
            return best;
        };
    }

    phi_max_.family_tag = "phi-max";
    phi_max_.evaluate = [comps](const Point& x, double t) {
        double best = (*comps)[0].evaluate(x, t);
        for (std::size_t i = 1; i < comps->size(); ++i)
            best = std::max(best, (*comps)[i].evaluate(x, t));
        return best;
    };
    if (all_derivable) {
        phi_max_.derivable_in_t = true;
        phi_max_.derivative = [comps](const Point& x, double t) {
            double best = (*comps)[0].evaluate(x, t);
            std::size_t arg = 0;
            for (std::size_t i = 1; i < comps->size(); ++i) {
                const double v = (*comps)[i].evaluate(x, t);
                if (v > best) {
                    best = v;
                    arg = i;
                }
            }
            return (*comps)[arg].derivative(x, t);
        };
    }
    if (all_invertible) {
        phi_max_.inverse = [comps](const Point& x, double s) {
            double best = (*comps)[0].inverse(x, s);
            for (std::size_t i = 1; i < comps->size(); ++i)
                best = std::min(best, (*comps)[i].inverse(x, s));
            return best;
        };
    }
}

int AnisotropicFamily::attaining_index_min(const Point& x, double t) const {
    double best = components_[0].evaluate(x, std::abs(t));
    int arg = 0;
    for (int i = 1; i < size(); ++i) {
        const double v = components_[static_cast<std::size_t>(i)].evaluate(x, std::abs(t));
        if (v < best) {
            best = v;
            arg = i;
        }
    }
    return arg;
}

int AnisotropicFamily::attaining_index_max(const Point& x, double t) const {
    double best = components_[0].evaluate(x, std::abs(t));
    int arg = 0;
    for (int i = 1; i < size(); ++i) {
        const double v = components_[static_cast<std::size_t>(i)].evaluate(x, std::abs(t));
        if (v > best) {
            best = v;
            arg = i;
        }
    }
    return arg;
}

}  // namespace orlicz
