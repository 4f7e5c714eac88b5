#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "orlicz/mo_function.hpp"
#include "orlicz/point.hpp"

namespace orlicz {

// The supremum bracket could not be closed below this cap; the function grows
// too slowly in t to be an N-function (or the query is out of range).
struct BracketFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DivergenceSuspected : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr double kBracketCap = 1e12;

// phi*(x,s) = sup_{t>=0} { s t - phi(x,t) }.
// Derivable phi: bracketed bisection on the monotone derivative phi'(x,t)=s.
// Otherwise golden-section on the concave objective. Throws BracketFailure
// when no bracket exists below kBracketCap.
double conjugate(const MOFunction& phi, const Point& x, double s);

// Same transform for an arbitrary (possibly nonconvex) map h(x,.): a dense
// geometric scan locates the global maximum before local refinement.
double conjugate_of_map(const std::function<double(const Point&, double)>& h, const Point& x,
                        double s);

// h**(x,t) via double conjugation; equals the convex envelope of h(x,.).
double biconjugate(const std::function<double(const Point&, double)>& h, const Point& x,
                   double t);

// sup{ tau >= 0 : phi(x,tau) <= s }. Uses the analytic inverse when present.
double generalized_inverse(const MOFunction& phi, const Point& x, double s);

enum class Verdict { holds, fails, inconclusive };

std::string to_string(Verdict v);

struct GrowthWitness {
    Point x;
    double c = 0.0;
    double t = 0.0;
    double ratio = 0.0;
};

struct GrowthVerdict {
    Verdict verdict = Verdict::inconclusive;
    GrowthWitness witness;  // populated on fails (and with the worst case otherwise)
    std::string note;
};

// Probes psi(x,t)/phi(x,ct) -> 0 (Eq.-style "grows essentially more slowly")
// on a geometric t-grid up to t_max, per c in c_grid and per sampled x.
GrowthVerdict grows_essentially_slower(const MOFunction& psi, const MOFunction& phi,
                                       const std::vector<double>& c_grid, double t_max,
                                       const std::vector<Point>& x_samples);

struct Delta2Verdict {
    Verdict verdict = Verdict::inconclusive;
    double k_hat = 0.0;            // sup of phi(x,2t)/phi(x,t) over t >= 1
    double residual_supremum = 0;  // sup over t<1 of (phi(x,2t)-k_hat*phi(x,t))+, the h(x) surrogate
    GrowthWitness witness;
};

// Doubling-condition heuristic: k_hat bounded across the last two decades of t.
Delta2Verdict delta2_check(const MOFunction& phi, const std::vector<Point>& x_samples,
                           double t_max);

// K0_hat = max over samples of (g - eps*f)+ so that g <= eps*f + K0_hat holds on
// the whole sample set. Throws DivergenceSuspected when the positive part still
// grows across the final two decades of t.
double epsilon_bound_constant(const std::function<double(const Point&, double)>& f,
                              const std::function<double(const Point&, double)>& g, double eps,
                              const std::vector<Point>& x_samples,
                              const std::vector<double>& t_grid);

// Geometric grid with `per_decade` points per decade spanning [lo, hi].
std::vector<double> geometric_grid(double lo, double hi, int per_decade = 64);

// The convex envelope of phi_min packaged as an MOFunction. Slices that pass a
// convexity probe evaluate phi_min directly (the envelope of a convex function
// is itself); other slices are served from per-slice double-conjugation tables
// built on demand. Thread-safe after construction.
MOFunction make_biconjugate(const MOFunction& h);

}  // namespace orlicz
