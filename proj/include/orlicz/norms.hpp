#pragma once

#include <stdexcept>
#include <utility>

#include "orlicz/grid.hpp"
#include "orlicz/mo_function.hpp"

namespace orlicz {

struct NonFiniteModular : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NormReport {
    double value = 0.0;
    double modular_at_value = 0.0;  // modular of u/value; ~1 when value > 0
    int bisection_iterations = 0;
    std::pair<double, double> bracket{0.0, 0.0};
};

// integral of phi(x, |u(x)|) by the grid's tensor-trapezoid rule.
double modular(const MOFunction& phi, const DiscreteField& u);

// integral of phi(x, |u(x)|/lambda).
double modular_scaled(const MOFunction& phi, const DiscreteField& u, double lambda);

// Boundary counterparts over the face quadrature.
double boundary_modular_scaled(const MOFunction& phi, const DiscreteField& u, double lambda);

// Luxemburg norm: the lambda with modular(phi, u/lambda) = 1, by bisection on
// the decreasing modular map. Returns 0 directly for u == 0.
NormReport luxemburg_norm(const MOFunction& phi, const DiscreteField& u);

// Same construction with the boundary surface quadrature.
NormReport boundary_luxemburg_norm(const MOFunction& psi, const DiscreteField& u);
double boundary_norm(const MOFunction& psi, const DiscreteField& u);

// lhs = integral |u v|, rhs = 2 ||u||_phi ||v||_phi*; lhs <= rhs is the paired
// Hoelder contract.
std::pair<double, double> holder_pairing(const DiscreteField& u, const DiscreteField& v,
                                         const MOFunction& phi);

// ||u||_{phi_max} + sum_i ||d_i u||_{phi_i} with discrete partials.
double anisotropic_norm(const AnisotropicFamily& family, const DiscreteField& u);

// Nodal clamp to [-n, n].
DiscreteField truncate(const DiscreteField& u, double n);

// L^1 norm under the same quadrature (embedding experiments).
double l1_norm(const DiscreteField& u);

}  // namespace orlicz
