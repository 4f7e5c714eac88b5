#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "orlicz/point.hpp"

namespace orlicz {

// An x-dependent N-function phi(x,t): convex and nondecreasing in t,
// vanishing only at t=0, superlinear at infinity, sublinear at the origin.
// Evaluation is always taken at |t| (even extension in the second argument).
struct MOFunction {
    using Eval = std::function<double(const Point&, double)>;

    Eval evaluate;    // phi(x,t) for t >= 0; required
    Eval derivative;  // d phi / dt, optional (central-difference fallback otherwise)
    Eval inverse;     // generalized inverse s -> sup{tau : phi(x,tau) <= s}, optional

    std::string family_tag = "custom";
    bool derivable_in_t = false;
    bool lipschitz_in_x = false;

    double operator()(const Point& x, double t) const {
        return evaluate(x, t < 0 ? -t : t);
    }

    bool has_derivative() const { return static_cast<bool>(derivative); }
    bool has_inverse() const { return static_cast<bool>(inverse); }

    // d phi/dt at |t|; falls back to a central difference with
    // step h = max(1e-6, 1e-6*t) when no analytic derivative is present.
    double deriv(const Point& x, double t) const;
};

using ExponentField = std::function<double(const Point&)>;

// phi(x,t) = t^{p(x)}, p(x) > 1 on the domain. Analytic derivative and inverse.
MOFunction make_power(ExponentField p);
MOFunction make_power(double p);

// phi(x,t) = t^{p(x)} * log(e + t)^alpha. Analytic derivative, numeric inverse.
MOFunction make_power_log(ExponentField p, double alpha = 1.0);
MOFunction make_power_log(double p, double alpha = 1.0);

// Exponent field tabulated at the nodes of a uniform rectangular lattice over
// [lo,hi]^dim, interpolated multilinearly; phi(x,t) = t^{p(x)}.
MOFunction make_tabulated_power(int dim, const std::array<double, kMaxDim>& lo,
                                const std::array<double, kMaxDim>& hi,
                                const std::array<int, kMaxDim>& nodes,
                                std::vector<double> exponent_values);

// Arbitrary callable (test helpers, custom config expressions).
MOFunction make_custom(MOFunction::Eval phi, MOFunction::Eval dphi = nullptr,
                       MOFunction::Eval inv = nullptr);

// The conjugate phi*(x,s) packaged as an MOFunction. Power families get the
// closed form; everything else evaluates through the numeric transform.
MOFunction make_conjugate_function(const MOFunction& phi, bool allow_analytic = true);

// Result of the finite N-function probes (see spec'd invariants: zero at 0,
// monotone+convex slices, positivity, superlinearity surrogates, inf phi(x,1)>0).
struct NFunctionReport {
    bool pass = true;
    std::string failure;  // empty when pass
    double inf_phi_at_one = 0.0;
    Point witness_x;
    double witness_t = 0.0;
};

NFunctionReport probe_n_function(const MOFunction& phi, const std::vector<Point>& xs,
                                 double t_lo = 1e-6, double t_hi = 1e6);

// Midpoint-convexity probe of a single x-slice on a geometric t-grid.
bool probe_convex_slice(const MOFunction& phi, const Point& x, double t_lo = 1e-6,
                        double t_hi = 1e8, double rel_slack = 1e-10);

// The vector family (phi_1,...,phi_N) with the derived pointwise envelope
// functions phi_min and phi_max. Tie-breaking: lowest component index wins.
class AnisotropicFamily {
public:
    explicit AnisotropicFamily(std::vector<MOFunction> components);

    int size() const { return static_cast<int>(components_.size()); }
    const MOFunction& component(int i) const { return components_[static_cast<std::size_t>(i)]; }
    const std::vector<MOFunction>& components() const { return components_; }

    const MOFunction& phi_min() const { return phi_min_; }
    const MOFunction& phi_max() const { return phi_max_; }

    int attaining_index_min(const Point& x, double t) const;
    int attaining_index_max(const Point& x, double t) const;

private:
    std::vector<MOFunction> components_;
    MOFunction phi_min_;
    MOFunction phi_max_;
};

}  // namespace orlicz
