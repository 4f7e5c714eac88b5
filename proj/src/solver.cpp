#include "orlicz/solver.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "orlicz/experiments.hpp"
#include "orlicz/kernels.hpp"

namespace orlicz {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    return kernels::block_reduce(a.size(), [&](std::size_t i) { return a[i] * b[i]; });
}

double sign_of(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// d phi_max(x, |u|)/du: the odd extension of the derivative.
double varphi_signed(const ProblemSpec& spec, const Point& x, double u) {
    if (u == 0.0) return 0.0;
    return sign_of(u) * spec.family.phi_max().deriv(x, std::abs(u));
}

}  // namespace

const char* to_string(Termination t) {
    switch (t) {
        case Termination::gradient_tol: return "gradient_tol";
        case Termination::max_iters: return "max_iters";
        default: return "line_search_failure";
    }
}

double energy(const ProblemSpec& spec, const DiscreteField& u) {
    const Grid& g = spec.grid;
    const auto& w = g.volume_weights();
    double total = 0.0;
    for (int a = 0; a < g.dim(); ++a) {
        const auto ai = static_cast<std::size_t>(a);
        const DiscreteField du = axis_derivative(u, a);
        total += kernels::block_reduce(g.size(), [&](std::size_t k) {
            const double A = spec.fluxes[ai].antiderivative
                                 ? spec.fluxes[ai].antiderivative(g.node(k), du[k])
                                 : antiderivative_value(spec.fluxes[ai].a, g.node(k), du[k]);
            return w[k] * A;
        });
    }
    total += kernels::block_reduce(g.size(), [&](std::size_t k) {
        const Point x = g.node(k);
        const double phimax = spec.family.phi_max()(x, u[k]);
        const double Fv = spec.F ? spec.F(x, u[k]) : antiderivative_value(spec.f, x, u[k]);
        return w[k] * (spec.b[k] * phimax - Fv);
    });
    const auto& bnd = g.boundary_samples();
    total -= kernels::block_reduce(bnd.size(), [&](std::size_t i) {
        const auto& bsample = bnd[i];
        const Point x = g.node(bsample.node);
        const double Gv =
            spec.G ? spec.G(x, u[bsample.node]) : antiderivative_value(spec.g, x, u[bsample.node]);
        return bsample.weight * Gv;
    });
    if (!std::isfinite(total))
        throw NonFiniteEnergy("energy overflow: data likely violates the growth validation");
    return total;
}

DiscreteField gateaux_gradient(const ProblemSpec& spec, const DiscreteField& u) {
    const Grid& g = spec.grid;
    const auto& w = g.volume_weights();
    DiscreteField grad(g);

    // flux terms: adjoint of the discrete partials applied to w * a_i(x, d_i u)
    std::vector<double> weighted(g.size());
    for (int a = 0; a < g.dim(); ++a) {
        const auto ai = static_cast<std::size_t>(a);
        const DiscreteField du = axis_derivative(u, a);
        kernels::parallel_for(g.size(), [&](std::size_t k) {
            weighted[k] = w[k] * spec.fluxes[ai].a(g.node(k), du[k]);
        });
        const std::vector<double> contrib = axis_derivative_adjoint(g, weighted, a);
        kernels::parallel_for(g.size(), [&](std::size_t k) { grad[k] += contrib[k]; });
    }

    // volume terms: b varphi_max(x,u) - f(x,u)
    kernels::parallel_for(g.size(), [&](std::size_t k) {
        const Point x = g.node(k);
        grad[k] += w[k] * (spec.b[k] * varphi_signed(spec, x, u[k]) - spec.f(x, u[k]));
    });

    // boundary term: -g(x,u) with face weights
    for (const auto& bsample : g.boundary_samples()) {
        const Point x = g.node(bsample.node);
        grad[bsample.node] -= bsample.weight * spec.g(x, u[bsample.node]);
    }
    return grad;
}

double weighted_gradient_sup(const ProblemSpec& spec, const DiscreteField& g) {
    const auto& w = spec.grid.volume_weights();
    double m = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) m = std::max(m, std::abs(g[k]) / w[k]);
    return m;
}

SolveReport minimize(const ProblemSpec& spec, const DiscreteField& u0,
                     const MinimizeOptions& opts) {
    SolveReport rep{DiscreteField(spec.grid), {}, {}, Termination::max_iters, 0.0, 0.0,
                    false,                    false, 0.0};
    DiscreteField u = u0;
    double E = energy(spec, u);
    DiscreteField grad = gateaux_gradient(spec, u);
    rep.energy_history.push_back(E);
    rep.gradient_norm_history.push_back(weighted_gradient_sup(spec, grad));

    const std::size_t n = u.size();
    std::deque<std::pair<std::vector<double>, std::vector<double>>> pairs;  // (s, y)
    rep.termination = Termination::max_iters;

    for (int iter = 0; iter < opts.max_iters; ++iter) {
        if (rep.gradient_norm_history.back() <= opts.grad_tol) {
            rep.termination = Termination::gradient_tol;
            break;
        }

        // two-loop recursion
        std::vector<double> d(grad.values());
        std::vector<double> alpha(pairs.size());
        for (std::size_t i = pairs.size(); i-- > 0;) {
            const auto& [s, y] = pairs[i];
            const double rho = 1.0 / dot(y, s);
            alpha[i] = rho * dot(s, d);
            for (std::size_t k = 0; k < n; ++k) d[k] -= alpha[i] * y[k];
        }
        if (!pairs.empty()) {
            const auto& [s, y] = pairs.back();
            const double gamma = dot(s, y) / dot(y, y);
            for (auto& v : d) v *= gamma;
        }
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            const auto& [s, y] = pairs[i];
            const double rho = 1.0 / dot(y, s);
            const double beta = rho * dot(y, d);
            for (std::size_t k = 0; k < n; ++k) d[k] += (alpha[i] - beta) * s[k];
        }
        for (auto& v : d) v = -v;

        double gd = dot(d, grad.values());
        if (!(gd < 0.0)) {  // not a descent direction: steepest descent fallback
            for (std::size_t k = 0; k < n; ++k) d[k] = -grad[k];
            gd = -dot(grad.values(), grad.values());
            pairs.clear();
        }

        // Armijo backtracking
        double step = 1.0;
        double E_new = 0.0;
        DiscreteField u_new(spec.grid);
        bool accepted = false;
        for (int h = 0; h <= opts.max_halvings; ++h) {
            for (std::size_t k = 0; k < n; ++k) u_new[k] = u[k] + step * d[k];
            try {
                E_new = energy(spec, u_new);
            } catch (const NonFiniteEnergy&) {
                step *= opts.backtrack;
                continue;
            }
            if (E_new <= E + opts.armijo_c * step * gd) {
                accepted = true;
                break;
            }
            step *= opts.backtrack;
        }
        if (!accepted) {
            rep.termination = Termination::line_search_failure;
            break;
        }

        DiscreteField grad_new = gateaux_gradient(spec, u_new);
        std::vector<double> s(n), y(n);
        for (std::size_t k = 0; k < n; ++k) {
            s[k] = u_new[k] - u[k];
            y[k] = grad_new[k] - grad[k];
        }
        const double sy = dot(s, y);
        const double sn = std::sqrt(dot(s, s)), yn = std::sqrt(dot(y, y));
        if (sy > 1e-12 * sn * yn) {
            pairs.emplace_back(std::move(s), std::move(y));
            if (static_cast<int>(pairs.size()) > opts.memory) pairs.pop_front();
        }

        u = std::move(u_new);
        E = E_new;
        grad = std::move(grad_new);
        rep.energy_history.push_back(E);
        rep.gradient_norm_history.push_back(weighted_gradient_sup(spec, grad));
    }
    if (rep.termination == Termination::max_iters &&
        rep.gradient_norm_history.back() <= opts.grad_tol)
        rep.termination = Termination::gradient_tol;

    rep.minimizer = std::move(u);
    rep.weak_residual = weak_residual(spec, rep.minimizer, 16);
    rep.nonnegativity_violation = 0.0;
    for (std::size_t k = 0; k < rep.minimizer.size(); ++k)
        rep.nonnegativity_violation =
            std::max(rep.nonnegativity_violation, -rep.minimizer[k]);
    rep.nonnegativity_violation = std::max(rep.nonnegativity_violation, 0.0);
    return rep;
}

double weak_residual(const ProblemSpec& spec, const DiscreteField& u, int test_count,
                     std::uint64_t seed) {
    const Grid& g = spec.grid;
    const DiscreteField grad = gateaux_gradient(spec, u);
    const auto& w = g.volume_weights();

    double worst = 0.0;
    for (int j = 0; j < test_count; ++j) {
        DiscreteField v(g);
        if (j == 0) {
            for (auto& val : v.values()) val = 1.0;
        } else if (j <= g.dim()) {
            for (std::size_t k = 0; k < g.size(); ++k) v[k] = g.node(k)[j - 1];
        } else {
            v = random_smooth_field(g, trial_seed(seed, j), 3, 1.0);
        }
        // normalize by the discrete H1-style scale
        double scale2 = kernels::block_reduce(g.size(), [&](std::size_t k) {
            return w[k] * v[k] * v[k];
        });
        for (int a = 0; a < g.dim(); ++a) {
            const DiscreteField dv = axis_derivative(v, a);
            scale2 += kernels::block_reduce(g.size(), [&](std::size_t k) {
                return w[k] * dv[k] * dv[k];
            });
        }
        const double scale = std::sqrt(scale2);
        if (!(scale > 0.0)) continue;
        const double pairing =
            kernels::block_reduce(g.size(), [&](std::size_t k) { return grad[k] * v[k]; });
        worst = std::max(worst, std::abs(pairing) / scale);
    }
    return worst;
}

double uniqueness_probe(const ProblemSpec& spec, int starts, std::uint64_t seed,
                        const MinimizeOptions& opts) {
    std::vector<DiscreteField> minimizers;
    minimizers.reserve(static_cast<std::size_t>(starts));
    for (int j = 0; j < starts; ++j) {
        const DiscreteField u0 = random_smooth_field(spec.grid, trial_seed(seed, j), 3, 1.0);
        minimizers.push_back(minimize(spec, u0, opts).minimizer);
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < minimizers.size(); ++i) {
        for (std::size_t j = i + 1; j < minimizers.size(); ++j) {
            double d = 0.0;
            for (std::size_t k = 0; k < minimizers[i].size(); ++k)
                d = std::max(d, std::abs(minimizers[i][k] - minimizers[j][k]));
            worst = std::max(worst, d);
        }
    }
    return worst;
}

void nonnegativity_enforce(const ProblemSpec& spec, SolveReport& report,
                           const MinimizeOptions& opts) {
    double viol = 0.0;
    for (std::size_t k = 0; k < report.minimizer.size(); ++k)
        viol = std::max(viol, -report.minimizer[k]);
    report.nonnegativity_violation = std::max(viol, 0.0);
    if (spec.manufactured_mode) {
        report.nonneg_check_skipped = true;
        return;
    }
    if (report.nonnegativity_violation > 1e-8 && spec.declares_f_nonneg) {
        DiscreteField clamped = report.minimizer;
        for (auto& v : clamped.values()) v = std::max(v, 0.0);
        SolveReport rerun = minimize(spec, clamped, opts);
        double viol2 = 0.0;
        for (std::size_t k = 0; k < rerun.minimizer.size(); ++k)
            viol2 = std::max(viol2, -rerun.minimizer[k]);
        report.clamped_restart = true;
        report.post_restart_violation = std::max(viol2, 0.0);
        if (rerun.energy_history.back() <= report.energy_history.back()) {
            report.minimizer = std::move(rerun.minimizer);
            report.weak_residual = rerun.weak_residual;
        }
    }
}

std::vector<double> coercivity_energies(const ProblemSpec& spec, const DiscreteField& w,
                                        const std::vector<double>& scales) {
    std::vector<double> out;
    out.reserve(scales.size());
    DiscreteField scaled(spec.grid);
    for (double t : scales) {
        for (std::size_t k = 0; k < w.size(); ++k) scaled[k] = t * w[k];
        out.push_back(energy(spec, scaled));
    }
    return out;
}

}  // namespace orlicz
