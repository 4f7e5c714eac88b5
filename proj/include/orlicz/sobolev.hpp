#pragma once

#include <memory>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "orlicz/convex_calculus.hpp"
#include "orlicz/detail/slice_key.hpp"
#include "orlicz/mo_function.hpp"

namespace orlicz {

struct QuadratureDivergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct QuadratureReport {
    double error_estimate = 0.0;
    int panels = 0;
};

struct IntegrabilityVerdict {
    Verdict verdict = Verdict::inconclusive;
    std::string note;
    double head_value = 0.0;   // converged value of the integral over (0,1]
    double tail_trend = 0.0;   // decade-over-decade growth factor of the tail
    Point witness;
};

// Probes the defining integral of the Sobolev conjugate: convergence of the
// head on (0,1] and divergence of the tail on [1,inf).
IntegrabilityVerdict check_integrability(const MOFunction& phi_mm, int dimension,
                                         const std::vector<Point>& x_samples);

// The Sobolev conjugate of phi_mm (an already-convex Musielak-Orlicz function,
// typically the envelope of phi_min). inverse_transform is the defining
// quadrature; forward inverts it by bracketed bisection, with optional
// per-x-slice tables for bulk evaluation.
class SobolevConjugate {
public:
    SobolevConjugate(MOFunction phi_mm, int dimension);

    int dimension() const { return n_; }
    const MOFunction& phi_mm() const { return phi_mm_; }

    double inverse_transform(const Point& x, double s, QuadratureReport* rep = nullptr) const;

    // sup{ s : inverse_transform(x,s) <= t }; table-backed when caching is on.
    double forward(const Point& x, double t) const;
    double forward_exact(const Point& x, double t) const;

    void enable_cache(bool on) { cache_enabled_ = on; }

private:
    struct ForwardSlice {
        std::vector<double> log_s, log_f;
        double forward(double t) const;
    };

    std::shared_ptr<const ForwardSlice> slice(const Point& x) const;
    double integrand(const Point& x, double t) const;
    double segment_integral(const Point& x, double s1, double s2) const;

    MOFunction phi_mm_;
    int n_;
    bool cache_enabled_ = true;
    mutable std::shared_mutex mu_;
    mutable std::unordered_map<detail::SliceKey, std::shared_ptr<const ForwardSlice>,
                               detail::SliceKeyHash>
        slices_;
};

// (N-1)/N power of the Sobolev conjugate; the boundary trace norm generator.
struct TraceFunction {
    MOFunction psi_min;
    int dimension = 0;
};

TraceFunction build_trace_function(const std::shared_ptr<const SobolevConjugate>& sc);

// Wraps sc->forward as an MOFunction (inverse = the defining quadrature).
MOFunction forward_function(const std::shared_ptr<const SobolevConjugate>& sc);

struct DerivativeGrowthVerdict {
    Verdict verdict = Verdict::inconclusive;
    double worst_ratio = 0.0;
    GrowthWitness witness;  // c field holds the axis index
};

// Central-difference probe of |d (phi_mm)_* / dx_i| <= c0 [ F + F^{1+nu} ]
// with steps of 1e-4 of the domain width per axis.
DerivativeGrowthVerdict check_derivative_growth(const SobolevConjugate& sc, double nu, double c0,
                                                const std::vector<Point>& x_samples,
                                                const std::vector<double>& t_grid,
                                                const std::array<double, kMaxDim>& domain_lo,
                                                const std::array<double, kMaxDim>& domain_hi);

}  // namespace orlicz
