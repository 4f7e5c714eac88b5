#include "orlicz/norms.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "orlicz/kernels.hpp"

namespace orlicz {

namespace {

// Bisection on the strictly decreasing map lambda -> modular(u/lambda).
NormReport solve_unit_modular(const std::function<double(double)>& modular_of_lambda,
                              double modular_at_one) {
    NormReport rep;
    double hi = modular_at_one + 1.0;  // ||u|| <= modular + 1
    if (!std::isfinite(hi)) {
        hi = 1.0;
        int guard = 0;
        double m;
        while (!std::isfinite(m = modular_of_lambda(hi)) || m > 1.0) {
            hi *= 2.0;
            if (++guard > 200)
                throw NonFiniteModular("luxemburg: modular not finite for any probed lambda");
        }
    }
    double lo = hi;
    int guard = 0;
    while (modular_of_lambda(lo) < 1.0) {
        lo *= 0.5;
        if (++guard > 2000) {
            // modular stays below 1 down to lambda ~ 0: vanishing field
            rep.value = 0.0;
            rep.bracket = {0.0, hi};
            return rep;
        }
    }
    rep.bracket = {lo, hi};
    double mid = lo, m = 0.0;
    for (int i = 0; i < 200; ++i) {
        mid = 0.5 * (lo + hi);
        m = modular_of_lambda(mid);
        ++rep.bisection_iterations;
        if (std::abs(m - 1.0) <= 1e-12 || (hi - lo) <= 1e-15 * hi) break;
        (m > 1.0 ? lo : hi) = mid;
    }
    rep.value = mid;
    rep.modular_at_value = m;
    return rep;
}

}  // namespace

double modular_scaled(const MOFunction& phi, const DiscreteField& u, double lambda) {
    const Grid& g = u.grid();
    const auto& w = g.volume_weights();
    return kernels::block_reduce(g.size(), [&](std::size_t k) {
        return w[k] * phi.evaluate(g.node(k), std::abs(u[k]) / lambda);
    });
}

double modular(const MOFunction& phi, const DiscreteField& u) {
    return modular_scaled(phi, u, 1.0);
}

double boundary_modular_scaled(const MOFunction& phi, const DiscreteField& u, double lambda) {
    const Grid& g = u.grid();
    const auto& bs = g.boundary_samples();
    return kernels::block_reduce(bs.size(), [&](std::size_t i) {
        const auto& b = bs[i];
        return b.weight * phi.evaluate(g.node(b.node), std::abs(u[b.node]) / lambda);
    });
}

NormReport luxemburg_norm(const MOFunction& phi, const DiscreteField& u) {
    if (u.all_zero()) return NormReport{};
    const double m1 = modular(phi, u);
    return solve_unit_modular([&](double lam) { return modular_scaled(phi, u, lam); }, m1);
}

NormReport boundary_luxemburg_norm(const MOFunction& psi, const DiscreteField& u) {
    const auto bv = u.boundary_view();
    bool zero = true;
    for (double v : bv)
        if (v != 0.0) zero = false;
    if (zero) return NormReport{};
    const double m1 = boundary_modular_scaled(psi, u, 1.0);
    return solve_unit_modular([&](double lam) { return boundary_modular_scaled(psi, u, lam); },
                              m1);
}

double boundary_norm(const MOFunction& psi, const DiscreteField& u) {
    return boundary_luxemburg_norm(psi, u).value;
}

std::pair<double, double> holder_pairing(const DiscreteField& u, const DiscreteField& v,
                                         const MOFunction& phi) {
    const Grid& g = u.grid();
    if (!g.same_layout(v.grid()))
        throw std::invalid_argument("holder_pairing: incompatible grids");
    const auto& w = g.volume_weights();
    const double lhs =
        kernels::block_reduce(g.size(), [&](std::size_t k) { return w[k] * std::abs(u[k] * v[k]); });
    const MOFunction phi_star = make_conjugate_function(phi);
    const double rhs = 2.0 * luxemburg_norm(phi, u).value * luxemburg_norm(phi_star, v).value;
    return {lhs, rhs};
}

double anisotropic_norm(const AnisotropicFamily& family, const DiscreteField& u) {
    const Grid& g = u.grid();
    if (family.size() != g.dim())
        throw std::invalid_argument("anisotropic_norm: family size does not match grid axes");
    double total = luxemburg_norm(family.phi_max(), u).value;
    for (int a = 0; a < g.dim(); ++a) {
        const DiscreteField du = axis_derivative(u, a);
        total += luxemburg_norm(family.component(a), du).value;
    }
    return total;
}

DiscreteField truncate(const DiscreteField& u, double n) {
    if (!(n > 0.0)) throw std::invalid_argument("truncate: level must be positive");
    DiscreteField out = u;
    for (auto& v : out.values()) v = std::clamp(v, -n, n);
    return out;
}

double l1_norm(const DiscreteField& u) {
    const Grid& g = u.grid();
    const auto& w = g.volume_weights();
    return kernels::block_reduce(g.size(), [&](std::size_t k) { return w[k] * std::abs(u[k]); });
}

}  // namespace orlicz
