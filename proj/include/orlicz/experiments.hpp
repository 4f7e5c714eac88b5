#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "orlicz/grid.hpp"
#include "orlicz/mo_function.hpp"
#include "orlicz/sobolev.hpp"

namespace orlicz {

// Band-limited random field: truncated Fourier series with decay exponent 2
// and seeded coefficients. The same seed reproduces the same analytic field on
// any grid over the same box (refinement studies sample one function twice).
DiscreteField random_smooth_field(const Grid& grid, std::uint64_t seed, int max_mode = 3,
                                  double amplitude = 1.0);

std::uint64_t trial_seed(std::uint64_t master, int trial);

struct RatioStats {
    double max = 0.0;
    double mean = 0.0;
    double stddev = 0.0;
    int trials = 0;
    int filtered = 0;  // degenerate (≈0) fields excluded
    std::vector<double> ratios;
};

// r = ||u||_{(phi_min**)_*} / ||u||_{W^1 L_phivec} over seeded random fields.
RatioStats embedding_experiment(const AnisotropicFamily& family,
                                const std::shared_ptr<const SobolevConjugate>& sc,
                                const Grid& grid, int trials, std::uint64_t seed);

// r = ||u||_{L_psi(boundary)} / ||u||_{W^1 L_phivec}.
RatioStats trace_experiment(const AnisotropicFamily& family, const TraceFunction& tf,
                            const Grid& grid, int trials, std::uint64_t seed);

}  // namespace orlicz
