#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "orlicz/expression.hpp"
#include "orlicz/problem.hpp"

namespace orlicz {

struct SemanticError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FamilyComponentCfg {
    std::string kind = "power";  // power | power-log | tabulated
    Expression p;                // exponent expression in x1..xN
};

struct ComparisonCfg {
    bool present = false;
    std::string kind = "power";
    Expression p;
};

// Parsed form of the versioned key-value config format (`orlicz-var v1`).
struct Config {
    int axes = 2;
    std::array<double, kMaxDim> lo{}, hi{};
    std::array<int, kMaxDim> resolution{};

    std::vector<FamilyComponentCfg> family;

    std::string flux_model = "power";  // power | custom
    std::vector<Expression> flux_a, flux_A;

    Expression b_expr;
    double b0 = 1.0;
    Expression f_expr, F_expr;
    Expression g_expr, G_expr;
    double k1 = 1.0, k2 = 1.0;

    std::array<ComparisonCfg, kMaxDim> P;
    ComparisonCfg R, M, H;
    Expression D_expr;
    std::array<Expression, kMaxDim> d_expr;
    std::array<double, kMaxDim> c_const{1.0, 1.0, 1.0, 1.0};

    double grad_tol = 1e-6;
    int max_iters = 5000;
    double armijo_c = 1e-4;
    double backtrack = 0.5;
    int memory = 10;
    std::uint64_t seed = 42;
    std::string mode = "standard";  // standard | manufactured
    Expression u_star;              // optional exact solution (manufactured runs)

    int trials = 100;
    std::string out_dir = "out";
};

Config parse_config(const std::string& text);
Config parse_config_file(const std::string& path);
std::string emit_config(const Config& cfg);
bool equivalent(const Config& a, const Config& b);

Grid build_grid(const Config& cfg);
AnisotropicFamily build_family(const Config& cfg);
MOFunction build_component(const Config& cfg, const FamilyComponentCfg& comp);
MOFunction build_comparison(const Config& cfg, const ComparisonCfg& cmp);
ProblemSpec build_problem(const Config& cfg);

}  // namespace orlicz
