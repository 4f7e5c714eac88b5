#include "orlicz/experiments.hpp"

#include <cmath>
#include <random>

#include "orlicz/kernels.hpp"
#include "orlicz/norms.hpp"

namespace orlicz {

std::uint64_t trial_seed(std::uint64_t master, int trial) {
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(trial) + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

DiscreteField random_smooth_field(const Grid& grid, std::uint64_t seed, int max_mode,
                                  double amplitude) {
    struct Mode {
        std::array<int, kMaxDim> k{};
        double amp = 0.0;
        std::array<double, kMaxDim> phase{};
    };
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);

    const int dim = grid.dim();
    std::vector<Mode> modes;
    std::array<int, kMaxDim> k{};
    // iterate k in [0, max_mode]^dim, skipping k = 0
    const int count = static_cast<int>(std::pow(max_mode + 1, dim));
    for (int flat = 0; flat < count; ++flat) {
        int rem = flat;
        int ksum = 0;
        for (int a = dim - 1; a >= 0; --a) {
            k[static_cast<std::size_t>(a)] = rem % (max_mode + 1);
            rem /= (max_mode + 1);
            ksum += k[static_cast<std::size_t>(a)];
        }
        Mode m;
        m.k = k;
        int k2 = 0;
        for (int a = 0; a < dim; ++a) k2 += k[static_cast<std::size_t>(a)] * k[static_cast<std::size_t>(a)];
        m.amp = coeff(rng) / (1.0 + k2);
        for (int a = 0; a < dim; ++a) m.phase[static_cast<std::size_t>(a)] = phase(rng);
        if (ksum == 0) continue;  // rng draws kept grid-independent; constant handled below
        modes.push_back(m);
    }
    const double offset = coeff(rng);

    DiscreteField u(grid);
    kernels::parallel_for(grid.size(), [&](std::size_t idx) {
        const Point x = grid.node(idx);
        double v = 0.5 * offset;
        for (const Mode& m : modes) {
            double term = m.amp;
            for (int a = 0; a < dim; ++a) {
                const double xa_hat = (x[a] - grid.lo(a)) / (grid.hi(a) - grid.lo(a));
                if (m.k[static_cast<std::size_t>(a)] > 0)
                    term *= std::cos(M_PI * m.k[static_cast<std::size_t>(a)] * xa_hat +
                                     m.phase[static_cast<std::size_t>(a)]);
            }
            v += term;
        }
        u[idx] = amplitude * v;
    });
    return u;
}

namespace {

RatioStats collect_ratios(int trials, const std::vector<double>& raw,
                          const std::vector<char>& ok) {
    RatioStats st;
    st.trials = trials;
    for (int i = 0; i < trials; ++i) {
        if (!ok[static_cast<std::size_t>(i)]) {
            ++st.filtered;
            continue;
        }
        st.ratios.push_back(raw[static_cast<std::size_t>(i)]);
    }
    if (st.ratios.empty()) return st;
    double sum = 0.0;
    for (double r : st.ratios) {
        st.max = std::max(st.max, r);
        sum += r;
    }
    st.mean = sum / static_cast<double>(st.ratios.size());
    double var = 0.0;
    for (double r : st.ratios) var += (r - st.mean) * (r - st.mean);
    st.stddev = std::sqrt(var / static_cast<double>(st.ratios.size()));
    return st;
}

}  // namespace

RatioStats embedding_experiment(const AnisotropicFamily& family,
                                const std::shared_ptr<const SobolevConjugate>& sc,
                                const Grid& grid, int trials, std::uint64_t seed) {
    const MOFunction target = forward_function(sc);
    std::vector<double> raw(static_cast<std::size_t>(trials), 0.0);
    std::vector<char> ok(static_cast<std::size_t>(trials), 0);
    // warm the shared forward slice tables before the trial loop
    (void)sc->forward(grid.node(0), 1.0);
    kernels::parallel_for(static_cast<std::size_t>(trials), [&](std::size_t i) {
        const DiscreteField u =
            random_smooth_field(grid, trial_seed(seed, static_cast<int>(i)));
        if (u.max_abs() < 1e-12) return;
        const double denom = anisotropic_norm(family, u);
        if (!(denom > 0.0)) return;
        raw[i] = luxemburg_norm(target, u).value / denom;
        ok[i] = 1;
    });
    return collect_ratios(trials, raw, ok);
}

RatioStats trace_experiment(const AnisotropicFamily& family, const TraceFunction& tf,
                            const Grid& grid, int trials, std::uint64_t seed) {
    std::vector<double> raw(static_cast<std::size_t>(trials), 0.0);
    std::vector<char> ok(static_cast<std::size_t>(trials), 0);
    kernels::parallel_for(static_cast<std::size_t>(trials), [&](std::size_t i) {
        const DiscreteField u =
            random_smooth_field(grid, trial_seed(seed, static_cast<int>(i)));
        if (u.max_abs() < 1e-12) return;
        const double denom = anisotropic_norm(family, u);
        if (!(denom > 0.0)) return;
        raw[i] = boundary_norm(tf.psi_min, u) / denom;
        ok[i] = 1;
    });
    return collect_ratios(trials, raw, ok);
}

}  // namespace orlicz
