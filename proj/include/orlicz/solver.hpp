#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "orlicz/problem.hpp"

namespace orlicz {

struct NonFiniteEnergy : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MinimizeOptions {
    double grad_tol = 1e-6;
    int max_iters = 5000;
    double armijo_c = 1e-4;
    double backtrack = 0.5;
    int memory = 10;
    int max_halvings = 60;
};

enum class Termination { gradient_tol, max_iters, line_search_failure };

const char* to_string(Termination t);

struct SolveReport {
    DiscreteField minimizer;
    std::vector<double> energy_history;         // per accepted iterate, nonincreasing
    std::vector<double> gradient_norm_history;  // weighted sup-norms
    Termination termination = Termination::max_iters;
    double weak_residual = 0.0;
    double nonnegativity_violation = 0.0;
    bool nonneg_check_skipped = false;
    bool clamped_restart = false;
    double post_restart_violation = 0.0;
};

// I(u) = sum_i int A_i(x, d_i u) + int b phi_max(x,u) - int F(x,u) - bint G(x,u).
double energy(const ProblemSpec& spec, const DiscreteField& u);

// Nodal vector g with g_k = <I'(u), e_k> (quadrature weights included).
DiscreteField gateaux_gradient(const ProblemSpec& spec, const DiscreteField& u);

// max_k |g_k| / w_k: the stationarity measure used for termination.
double weighted_gradient_sup(const ProblemSpec& spec, const DiscreteField& g);

// Limited-memory quasi-Newton descent with Armijo backtracking; steepest
// descent whenever a curvature pair is rejected.
SolveReport minimize(const ProblemSpec& spec, const DiscreteField& u0,
                     const MinimizeOptions& opts = {});

// max over seeded smooth unit test fields v of |<I'(u), v>|.
double weak_residual(const ProblemSpec& spec, const DiscreteField& u, int test_count,
                     std::uint64_t seed = 1234);

// Multistart minimize; returns the max pairwise sup-distance among minimizers.
double uniqueness_probe(const ProblemSpec& spec, int starts, std::uint64_t seed,
                        const MinimizeOptions& opts = {});

// Records the negative-part violation; optionally restarts from the clamped
// field when the structure promises a nonnegative solution.
void nonnegativity_enforce(const ProblemSpec& spec, SolveReport& report,
                           const MinimizeOptions& opts = {});

// Energies along t*w for the coercivity surrogate.
std::vector<double> coercivity_energies(const ProblemSpec& spec, const DiscreteField& w,
                                        const std::vector<double>& scales);

}  // namespace orlicz
