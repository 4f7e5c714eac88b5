#include "orlicz/problem.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "orlicz/sobolev.hpp"

namespace orlicz {

namespace {

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

std::string point_str(const Point& x) {
    std::ostringstream os;
    os << "(";
    for (int i = 0; i < x.dim; ++i) os << (i ? "," : "") << x[i];
    os << ")";
    return os.str();
}

}  // namespace

ProblemSpec::ProblemSpec(Grid grid_, AnisotropicFamily family_)
    : grid(std::move(grid_)),
      family(std::move(family_)),
      phi_min_envelope(make_biconjugate(family.phi_min())),
      b(grid, 1.0) {}

Flux model_power_flux(ExponentField p) {
    Flux fl;
    fl.a = [p](const Point& x, double s) {
        if (s == 0.0) return 0.0;
        const double px = p(x);
        return std::pow(std::abs(s), px - 2.0) * s;
    };
    fl.antiderivative = [p](const Point& x, double s) {
        const double px = p(x);
        return std::pow(std::abs(s), px) / px;
    };
    return fl;
}

double antiderivative_value(const Caratheodory& fn, const Point& x, double s) {
    if (s == 0.0) return 0.0;
    const int panels = 8;
    double total = 0.0;
    double lo = 0.0;
    const double step = s / panels;
    for (int i = 0; i < panels; ++i) {
        const double hi = (i == panels - 1) ? s : lo + step;
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        double acc = 0.0;
        for (int q = 0; q < kGL; ++q) acc += kGLw[q] * fn(x, mid + half * kGLx[q]);
        total += acc * half;
        lo = hi;
    }
    return total;
}

bool ValidationReport::hard_pass() const {
    for (const auto& c : conditions)
        if (c.required && !c.warn_only && c.verdict == Verdict::fails) return false;
    return true;
}

const ConditionVerdict* ValidationReport::find(const std::string& key) const {
    for (const auto& c : conditions)
        if (c.key == key) return &c;
    return nullptr;
}

ValidationReport validate(const ProblemSpec& spec, const ValidateOptions& opts) {
    ValidationReport rep;
    const Grid& grid = spec.grid;
    const int dim = grid.dim();

    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto sample_x = [&]() {
        Point p;
        p.dim = dim;
        for (int a = 0; a < dim; ++a)
            p[a] = grid.lo(a) + unit(rng) * (grid.hi(a) - grid.lo(a));
        return p;
    };
    auto sample_s = [&]() {
        // symmetric log-uniform cloud plus a thick band near 0
        const double u = unit(rng);
        const double mag = std::pow(10.0, -3.0 + u * (std::log10(opts.s_range) + 3.0));
        return unit(rng) < 0.5 ? mag : -mag;
    };

    std::vector<Point> x_probe;
    for (int i = 0; i < 8; ++i) x_probe.push_back(sample_x());

    auto add = [&](std::string key, Verdict v, bool required, bool warn, std::string witness) {
        rep.conditions.push_back({std::move(key), v, required, warn, std::move(witness)});
    };

    // (a1): |a_i(x,s)| <= c_i [ d_i(x) + (phi_i*)^{-1}(x, P_i(x,s)) ]
    for (int i = 0; i < dim; ++i) {
        const auto ii = static_cast<std::size_t>(i);
        if (spec.cmp.P.size() <= ii || !spec.fluxes.size()) {
            add("(a1)." + std::to_string(i + 1), Verdict::inconclusive, false, false,
                "comparison P_i not provided");
            continue;
        }
        const MOFunction phi_star = make_conjugate_function(spec.family.component(i));
        Verdict v = Verdict::holds;
        std::string wit;
        for (int n = 0; n < opts.sample_budget; ++n) {
            const Point x = sample_x();
            const double s = sample_s();
            const double lhs = std::abs(spec.fluxes[ii].a(x, s));
            const double ci = spec.cmp.c.size() > ii ? spec.cmp.c[ii] : 1.0;
            const double di = spec.cmp.d.size() > ii && spec.cmp.d[ii] ? spec.cmp.d[ii](x) : 0.0;
            const double rhs =
                ci * (di + generalized_inverse(phi_star, x, spec.cmp.P[ii](x, s)));
            if (lhs > rhs * (1.0 + 1e-9) + 1e-12) {
                v = Verdict::fails;
                std::ostringstream os;
                os << "x=" << point_str(x) << " s=" << s << " |a|=" << lhs << " bound=" << rhs;
                wit = os.str();
                break;
            }
        }
        add("(a1)." + std::to_string(i + 1), v, false, false, wit);
    }

    // (a2): phi_i(x,|s|) <= a_i(x,s) s <= A_i(x,s)
    for (int i = 0; i < dim; ++i) {
        const auto ii = static_cast<std::size_t>(i);
        Verdict left = Verdict::holds, right = Verdict::holds;
        std::string wit_l, wit_r;
        for (int n = 0; n < opts.sample_budget; ++n) {
            const Point x = sample_x();
            const double s = sample_s();
            const double as = spec.fluxes[ii].a(x, s) * s;
            const double phi_v = spec.family.component(i)(x, s);
            const double A_v = spec.fluxes[ii].antiderivative
                                   ? spec.fluxes[ii].antiderivative(x, s)
                                   : antiderivative_value(spec.fluxes[ii].a, x, s);
            if (phi_v > as * (1.0 + 1e-9) + 1e-12 && left == Verdict::holds) {
                left = Verdict::fails;
                std::ostringstream os;
                os << "x=" << point_str(x) << " s=" << s << " phi=" << phi_v << " a*s=" << as;
                wit_l = os.str();
            }
            if (as > A_v * (1.0 + 1e-9) + 1e-12 && right == Verdict::holds) {
                right = Verdict::fails;
                std::ostringstream os;
                os << "x=" << point_str(x) << " s=" << s << " a*s=" << as << " A=" << A_v;
                wit_r = os.str();
            }
        }
        add("(a2-left)." + std::to_string(i + 1), left, true, false, wit_l);
        add("(a2-right)." + std::to_string(i + 1), right, false, true, wit_r);
    }

    // (a3): strict monotonicity of the fluxes
    for (int i = 0; i < dim; ++i) {
        const auto ii = static_cast<std::size_t>(i);
        Verdict v = Verdict::holds;
        std::string wit;
        for (int n = 0; n < opts.sample_budget; ++n) {
            const Point x = sample_x();
            const double s = sample_s(), t = sample_s();
            if (s == t) continue;
            const double prod = (spec.fluxes[ii].a(x, s) - spec.fluxes[ii].a(x, t)) * (s - t);
            if (prod <= 0.0) {
                v = Verdict::fails;
                std::ostringstream os;
                os << "x=" << point_str(x) << " s=" << s << " t=" << t << " product=" << prod;
                wit = os.str();
                break;
            }
        }
        add("(a3)." + std::to_string(i + 1), v, true, false, wit);
    }

    // (1.4): |varphi_max(x,s)| <= D(x) + (phi_max*)^{-1}(x, R(x,s))
    if (spec.cmp.R) {
        const MOFunction phimax_star = make_conjugate_function(spec.family.phi_max(), false);
        Verdict v = Verdict::holds;
        std::string wit;
        for (int n = 0; n < opts.sample_budget / 4; ++n) {
            const Point x = sample_x();
            const double s = sample_s();
            const double lhs = std::abs(spec.family.phi_max().deriv(x, std::abs(s)));
            const double Dx = spec.cmp.D_bound ? spec.cmp.D_bound(x) : 0.0;
            const double rhs = Dx + generalized_inverse(phimax_star, x, (*spec.cmp.R)(x, s));
            if (lhs > rhs * (1.0 + 1e-9) + 1e-12) {
                v = Verdict::fails;
                std::ostringstream os;
                os << "x=" << point_str(x) << " s=" << s << " |varphi|=" << lhs
                   << " bound=" << rhs;
                wit = os.str();
                break;
            }
        }
        add("(1.4)", v, true, false, wit);
    } else {
        add("(1.4)", Verdict::inconclusive, false, false, "comparison R not provided");
    }

    // (1.5): |f(x,s)| <= k1 m(x,s), m = dM/ds (skipped in manufactured mode)
    if (spec.manufactured_mode) {
        add("(1.5)", Verdict::inconclusive, false, false, "manufactured mode: growth check skipped");
    } else if (spec.cmp.M) {
        Verdict v = Verdict::holds;
        std::string wit;
        for (int n = 0; n < opts.sample_budget; ++n) {
            const Point x = sample_x();
            const double s = std::abs(sample_s());
            const double lhs = std::abs(spec.f(x, s));
            const double rhs = spec.k1 * spec.cmp.M->deriv(x, s);
            if (lhs > rhs * (1.0 + 1e-9) + 1e-12) {
                v = Verdict::fails;
                std::ostringstream os;
                os << "x=" << point_str(x) << " s=" << s << " |f|=" << lhs << " k1*m=" << rhs;
                wit = os.str();
                break;
            }
        }
        add("(1.5)", v, true, false, wit);
    } else {
        add("(1.5)", Verdict::inconclusive, false, false, "comparison M not provided");
    }

    // (1.6): |g(x,s)| <= k2 h(x,s) on the boundary
    if (spec.cmp.H) {
        Verdict v = Verdict::holds;
        std::string wit;
        const auto& bnd = grid.boundary_samples();
        std::uniform_int_distribution<std::size_t> pick(0, bnd.size() - 1);
        for (int n = 0; n < opts.sample_budget; ++n) {
            const Point x = grid.node(bnd[pick(rng)].node);
            const double s = std::abs(sample_s());
            const double lhs = std::abs(spec.g(x, s));
            const double rhs = spec.k2 * spec.cmp.H->deriv(x, s);
            if (lhs > rhs * (1.0 + 1e-9) + 1e-12) {
                v = Verdict::fails;
                std::ostringstream os;
                os << "x=" << point_str(x) << " s=" << s << " |g|=" << lhs << " k2*h=" << rhs;
                wit = os.str();
                break;
            }
        }
        add("(1.6)", v, true, false, wit);
    } else {
        add("(1.6)", Verdict::inconclusive, false, false, "comparison H not provided");
    }

    // (1.9): b in L^inf with b(x) >= b0 > 0
    {
        Verdict v = spec.b0 > 0.0 ? Verdict::holds : Verdict::fails;
        std::string wit = spec.b0 > 0.0 ? "" : "b0 <= 0";
        if (v == Verdict::holds) {
            for (std::size_t k = 0; k < grid.size(); ++k) {
                if (!(spec.b[k] >= spec.b0)) {
                    v = Verdict::fails;
                    std::ostringstream os;
                    os << "x=" << point_str(grid.node(k)) << " b=" << spec.b[k]
                       << " < b0=" << spec.b0;
                    wit = os.str();
                    break;
                }
            }
        }
        add("(1.9)", v, true, false, wit);
    }

    // Delta_2 premises and the growth hierarchy of the data gauges
    auto delta2_row = [&](const char* key, const MOFunction& fn) {
        const auto d2 = delta2_check(fn, x_probe, 1e6);
        std::ostringstream os;
        os << "k_hat=" << d2.k_hat << " at t=" << d2.witness.t;
        add(key, d2.verdict, true, false, os.str());
    };
    if (spec.cmp.M) delta2_row("(1.5):delta2(M)", *spec.cmp.M);
    if (spec.cmp.H) delta2_row("(1.6):delta2(H)", *spec.cmp.H);

    const std::vector<double> c_grid = {0.1, 1.0, 10.0};
    auto grows_row = [&](const std::string& key, const MOFunction& slow, const MOFunction& fast,
                         bool required) {
        const auto gv = grows_essentially_slower(slow, fast, c_grid, 1e6, x_probe);
        std::ostringstream os;
        os << "ratio=" << gv.witness.ratio << " at x=" << point_str(gv.witness.x)
           << " c=" << gv.witness.c << " t=" << gv.witness.t;
        add(key, gv.verdict, required, false, os.str());
    };
    for (int i = 0; i < dim && static_cast<std::size_t>(i) < spec.cmp.P.size(); ++i)
        grows_row("(2.3):P" + std::to_string(i + 1) + "<<phi_" + std::to_string(i + 1),
                  spec.cmp.P[static_cast<std::size_t>(i)], spec.family.component(i), false);
    if (spec.cmp.R) grows_row("(2.3):R<<phi_max", *spec.cmp.R, spec.family.phi_max(), false);
    if (spec.cmp.M)
        grows_row("(2.3):M<<phi_min**", *spec.cmp.M, spec.phi_min_envelope, true);
    if (spec.cmp.H)
        grows_row("(2.3):H<<phi_min**", *spec.cmp.H, spec.phi_min_envelope, true);
    if (spec.cmp.H && opts.check_sobolev_relations) {
        const auto integ = check_integrability(spec.phi_min_envelope, dim, x_probe);
        if (integ.verdict == Verdict::holds) {
            auto sc = std::make_shared<SobolevConjugate>(spec.phi_min_envelope, dim);
            const TraceFunction tf = build_trace_function(sc);
            grows_row("(2.3):H<<psi_min", *spec.cmp.H, tf.psi_min, true);
        } else {
            add("(2.3):H<<psi_min", Verdict::inconclusive, false, false,
                "sobolev integrability did not hold; trace gauge unavailable");
        }
    }

    // Uniqueness monotonicity probes (informational; gate the uniq run only)
    auto monotone_row = [&](const char* key, const Caratheodory& fn, bool want_decreasing) {
        Verdict v = Verdict::holds;
        bool strict_everywhere = true;
        std::string wit;
        for (int n = 0; n < opts.sample_budget; ++n) {
            const Point x = sample_x();
            const double s = sample_s(), t = sample_s();
            if (s == t) continue;
            const double prod = (fn(x, s) - fn(x, t)) * (s - t);
            const double signed_prod = want_decreasing ? -prod : prod;
            if (signed_prod < 0.0) {
                v = Verdict::fails;
                std::ostringstream os;
                os << "x=" << point_str(x) << " s=" << s << " t=" << t << " product=" << prod;
                wit = os.str();
                break;
            }
            if (signed_prod == 0.0) strict_everywhere = false;
        }
        if (v == Verdict::holds && !strict_everywhere) {
            v = Verdict::inconclusive;
            wit = "monotone but not strict on samples";
        }
        add(key, v, false, false, wit);
    };
    if (!spec.manufactured_mode) {
        monotone_row("(uneq1)", spec.f, true);
        monotone_row("(uneq2)", spec.g, true);
        monotone_row("(uneq3)",
                     [&](const Point& x, double s) {
                         const double m = spec.family.phi_max().deriv(x, std::abs(s));
                         return s < 0 ? -m : m;
                     },
                     false);
    }

    return rep;
}

}  // namespace orlicz
