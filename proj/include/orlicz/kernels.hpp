#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace orlicz {

// Production kernels: OpenMP-parallel with deterministic fixed-block
// reductions, so results are byte-identical across thread counts.
namespace kernels {

inline constexpr std::size_t kBlock = 1024;

template <class Term>
double block_reduce(std::size_t n, Term&& term) {
    if (n == 0) return 0.0;
    const std::size_t nb = (n + kBlock - 1) / kBlock;
    std::vector<double> partial(nb, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long long b = 0; b < static_cast<long long>(nb); ++b) {
        const std::size_t begin = static_cast<std::size_t>(b) * kBlock;
        const std::size_t end = std::min(begin + kBlock, n);
        double s = 0.0;
        for (std::size_t i = begin; i < end; ++i) s += term(i);
        partial[static_cast<std::size_t>(b)] = s;
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

template <class Body>
void parallel_for(std::size_t n, Body&& body) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long long i = 0; i < static_cast<long long>(n); ++i)
        body(static_cast<std::size_t>(i));
}

}  // namespace kernels

// Plain serial loops kept as the reference implementation for tests and the
// kernel benchmark.
namespace reference {

template <class Term>
double block_reduce(std::size_t n, Term&& term) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += term(i);
    return s;
}

template <class Body>
void parallel_for(std::size_t n, Body&& body) {
    for (std::size_t i = 0; i < n; ++i) body(i);
}

}  // namespace reference

}  // namespace orlicz
