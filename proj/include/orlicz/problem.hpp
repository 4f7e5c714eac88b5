#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "orlicz/convex_calculus.hpp"
#include "orlicz/grid.hpp"
#include "orlicz/mo_function.hpp"

namespace orlicz {

using ScalarField = std::function<double(const Point&)>;
using Caratheodory = std::function<double(const Point&, double)>;  // (x, s) -> value

struct Flux {
    Caratheodory a;               // a_i(x, s)
    Caratheodory antiderivative;  // A_i(x, s); numeric quadrature fallback when empty
};

// Comparison functions of the growth conditions, with their attached constants.
struct ComparisonData {
    std::vector<MOFunction> P;  // one per axis; growth gauges of the fluxes
    std::vector<double> c;      // c_i
    std::vector<ScalarField> d; // d_i(x)
    std::optional<MOFunction> R;
    ScalarField D_bound;        // D(x) paired with R
    std::optional<MOFunction> M;
    std::optional<MOFunction> H;
};

struct ProblemSpec {
    Grid grid;
    AnisotropicFamily family;
    MOFunction phi_min_envelope;  // convex envelope of phi_min (feeds M/H gauges)
    std::vector<Flux> fluxes;     // one per axis
    DiscreteField b;              // zero-order coefficient at the nodes
    double b0 = 1.0;
    Caratheodory f;  // source
    Caratheodory F;  // antiderivative of f; numeric fallback when empty
    Caratheodory g;  // boundary nonlinearity
    Caratheodory G;  // antiderivative of g; numeric fallback when empty
    double k1 = 1.0, k2 = 1.0;
    ComparisonData cmp;
    bool manufactured_mode = false;  // f depends on x only; sign checks skipped
    bool declares_f_nonneg = true;

    ProblemSpec(Grid grid_, AnisotropicFamily family_);
};

// The model flux a(x,s) = |s|^{p(x)-2} s with A(x,s) = |s|^{p(x)}/p(x).
Flux model_power_flux(ExponentField p);

// Signed integral of a Caratheodory map from 0 to s (antiderivative fallback).
double antiderivative_value(const Caratheodory& fn, const Point& x, double s);

struct ConditionVerdict {
    std::string key;  // paper identifier, e.g. "(a3).1" or "(1.5):delta2(M)"
    Verdict verdict = Verdict::inconclusive;
    bool required = false;   // gates solve/verify exit status
    bool warn_only = false;  // reported, never gating
    std::string witness;     // first violation or worst case
};

struct ValidationReport {
    std::vector<ConditionVerdict> conditions;

    bool hard_pass() const;  // every required row holds (or is inconclusive-but-not-failed)
    const ConditionVerdict* find(const std::string& key) const;
};

struct ValidateOptions {
    int sample_budget = 400;  // (x,s,t) cloud size per condition
    std::uint64_t seed = 2024;
    double s_range = 50.0;  // sample |s| up to this scale
    bool check_sobolev_relations = true;  // (2.3) rows through psi_min need the transform
};

ValidationReport validate(const ProblemSpec& spec, const ValidateOptions& opts = {});

}  // namespace orlicz
