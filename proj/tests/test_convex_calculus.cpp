#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "orlicz/convex_calculus.hpp"
#include "orlicz/mo_function.hpp"

using namespace orlicz;
using namespace testutil;

TEST_CASE("conjugate of the self-conjugate quadratic") {
    const auto phi = scalar_lambda_d([](double t) { return 0.5 * t * t; },
                                     [](double t) { return t; });
    CHECK(conjugate(phi, p2(0.5, 0.5), 3.0) == doctest::Approx(4.5).epsilon(1e-10));
}

TEST_CASE("conjugate at s=0 vanishes") {
    const auto phi = make_power(2.7);
    CHECK(conjugate(phi, p2(0.2, 0.2), 0.0) == 0.0);
}

TEST_CASE("conjugate of t^3/3 against the dense-grid oracle") {
    // closed form (2/3) s^{3/2}; frozen from the 1e7-point grid maximization
    const double frozen = 15.084944665313015;
    const auto oracle =
        conjugate_grid_oracle([](double t) { return t * t * t / 3.0; }, 8.0, 100.0, 10000000);
    CHECK(oracle == doctest::Approx(frozen).epsilon(1e-9));
    const auto phi = scalar_lambda_d([](double t) { return t * t * t / 3.0; },
                                     [](double t) { return t * t; });
    CHECK(conjugate(phi, p2(0, 0), 8.0) == doctest::Approx(frozen).epsilon(1e-10));
    // non-derivable path takes the golden-section route
    const auto phi_nd = scalar_lambda([](double t) { return t * t * t / 3.0; });
    CHECK(conjugate(phi_nd, p2(0, 0), 8.0) == doctest::Approx(frozen).epsilon(1e-9));
}

TEST_CASE("conjugate bracket failure for sublinear growth") {
    const auto lin = scalar_lambda_d([](double t) { return 2.0 * t; }, [](double) { return 2.0; });
    CHECK_THROWS_AS((void)conjugate(lin, p2(0, 0), 3.0), BracketFailure);
}

TEST_CASE("generalized inverse basics") {
    const auto sq = scalar_lambda([](double t) { return t * t; });
    CHECK(generalized_inverse(sq, p2(0, 0), 9.0) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(generalized_inverse(sq, p2(0, 0), 0.0) == 0.0);

    const auto px = make_power([](const Point& x) { return 2.0 + x[0] / 2.0 + 0.0 * x[1]; });
    // p(0.3,0.7)... exponent field chosen so p = 2.5 at the probe
    const auto p25 = make_power(2.5);
    const double expected = std::pow(2.0, 0.4);  // bisection oracle agrees to 1e-12
    CHECK(generalized_inverse(p25, p2(0.3, 0.7), 2.0) ==
          doctest::Approx(expected).epsilon(1e-12));
    // numeric path (no analytic inverse) matches
    auto p25_numeric = p25;
    p25_numeric.inverse = nullptr;
    CHECK(generalized_inverse(p25_numeric, p2(0.3, 0.7), 2.0) ==
          doctest::Approx(expected).epsilon(1e-10));
    (void)px;
}

TEST_CASE("biconjugate of a convex function is itself") {
    auto h = [](const Point&, double t) { return 0.5 * t * t; };
    CHECK(biconjugate(h, p2(0, 0), 2.0) == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(biconjugate(h, p2(0, 0), 0.0) == 0.0);
}

TEST_CASE("biconjugate of a nonconvex function is its envelope") {
    auto raw = [](double t) { return std::min(t * t, (t - 2.0) * (t - 2.0) + 1.0); };
    auto h = [raw](const Point&, double t) { return raw(t); };
    // common tangent of the two branches: y = t/2 - 1/16 on [1/4, 9/4]
    const double frozen = 0.4375;
    CHECK(convex_envelope_oracle(raw, 1.0) == doctest::Approx(frozen).epsilon(1e-6));
    CHECK(biconjugate(h, p2(0, 0), 1.0) == doctest::Approx(frozen).epsilon(1e-6));
    // domination h** <= h everywhere sampled
    for (double t = 0.0; t <= 6.0; t += 0.37)
        CHECK(biconjugate(h, p2(0, 0), t) <= raw(t) + 1e-10);
}

TEST_CASE("grows_essentially_slower verdicts") {
    const std::vector<double> cs{0.1, 1.0, 10.0};
    const auto xs = unit_square_probes();
    const auto t2 = make_power(2.0);
    const auto t3 = make_power(3.0);
    CHECK(grows_essentially_slower(t2, t3, cs, 1e6, xs).verdict == Verdict::holds);

    const auto same = grows_essentially_slower(t2, t2, cs, 1e6, xs);
    CHECK(same.verdict == Verdict::fails);
    CHECK(same.witness.c == doctest::Approx(0.1));

    const auto t2log = make_power_log(2.0, 1.0);
    CHECK(grows_essentially_slower(t2, t2log, cs, 1e6, xs).verdict == Verdict::holds);
}

TEST_CASE("delta2 doubling checks") {
    const auto xs = unit_square_probes();
    const auto d3 = delta2_check(make_power(3.0), xs, 1e6);
    CHECK(d3.verdict == Verdict::holds);
    CHECK(d3.k_hat == doctest::Approx(8.0).epsilon(1e-9));

    const auto expphi = scalar_lambda([](double t) { return std::exp(t) - t - 1.0; });
    const auto dexp = delta2_check(expphi, xs, 1e6);
    CHECK(dexp.verdict == Verdict::fails);

    const auto dlog = delta2_check(make_power_log(2.0, 1.0), xs, 1e6);
    CHECK(dlog.verdict == Verdict::holds);
    CHECK(dlog.k_hat >= 4.0);
    CHECK(dlog.k_hat <= 4.0 * (1.0 + std::log(2.0)) + 0.1);
}

TEST_CASE("epsilon bound constant of the comparison lemma") {
    const auto xs = unit_square_probes();
    const auto grid = geometric_grid(1e-6, 1e6, 64);
    auto f_sq = [](const Point&, double t) { return t * t; };
    auto g_lin = [](const Point&, double t) { return t; };
    CHECK(epsilon_bound_constant(f_sq, g_lin, 1.0, xs, grid) ==
          doctest::Approx(0.25).epsilon(1e-8));
    CHECK(epsilon_bound_constant(f_sq, f_sq, 1.0, xs, grid) == 0.0);

    auto g_15 = [](const Point&, double t) { return std::pow(t, 1.5); };
    double oracle = 0.0;  // dense 1-D grid maximization
    for (long long i = 0; i <= 2000000; ++i) {
        const double t = 200.0 * static_cast<double>(i) / 2000000.0;
        oracle = std::max(oracle, std::pow(t, 1.5) - 0.1 * t * t);
    }
    const double frozen = 105.46875;  // max at t = 56.25
    CHECK(oracle == doctest::Approx(frozen).epsilon(1e-8));
    CHECK(epsilon_bound_constant(f_sq, g_15, 0.1, xs, grid) ==
          doctest::Approx(frozen).epsilon(1e-8));

    // hypothesis violation: g grows faster than eps*f indefinitely
    auto g_cube = [](const Point&, double t) { return t * t * t; };
    CHECK_THROWS_AS((void)epsilon_bound_constant(f_sq, g_cube, 0.5, xs, grid),
                    DivergenceSuspected);
}

TEST_CASE("Young inequality over random triples") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> logu(-3.0, 3.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto fam = {make_power([](const Point& x) { return 1.5 + 0.4 * x[0]; }),
                      make_power_log(2.0, 1.0)};
    for (const auto& phi : fam) {
        for (int n = 0; n < 10000; ++n) {
            const Point x = p2(unit(rng), unit(rng));
            const double t = std::pow(10.0, logu(rng));
            const double s = std::pow(10.0, logu(rng));
            const double lhs = t * s;
            const double rhs = phi(x, t) + conjugate(phi, x, s);
            CHECK(lhs <= rhs + 1e-8 * (1.0 + lhs));
        }
    }
}

TEST_CASE("conjugate is an N-function on sampled slices") {
    const auto phi = make_power_log(1.7, 1.0);
    const Point x = p2(0.4, 0.6);
    double prev = 0.0;
    std::vector<double> ss, vs;
    for (double s : geometric_grid(1e-4, 1e4, 16)) {
        const double v = conjugate(phi, x, s);
        CHECK(v >= prev - 1e-12);
        prev = v;
        ss.push_back(s);
        vs.push_back(v);
    }
    for (std::size_t i = 0; i + 2 < ss.size(); ++i) {
        const double sm = 0.5 * (ss[i] + ss[i + 2]);
        const double w = (ss[i + 2] - sm) / (ss[i + 2] - ss[i]);
        const double chord = w * vs[i] + (1.0 - w) * vs[i + 2];
        CHECK(conjugate(phi, x, sm) <= chord + 1e-8 * (1.0 + std::abs(chord)));
    }
}

TEST_CASE("biconjugate idempotence on convex families") {
    const auto fams = {make_power(1.5), make_power(2.5), make_power_log(2.0, 1.0)};
    const Point x = p2(0.3, 0.3);
    for (const auto& phi : fams) {
        auto h = [&phi](const Point& xx, double t) { return phi.evaluate(xx, t); };
        for (double t : geometric_grid(1e-2, 1e2, 8)) {
            const double direct = phi(x, t);
            const double bc = biconjugate(h, x, t);
            CHECK(std::abs(bc - direct) <= 1e-6 * (1.0 + direct));
        }
    }
}

TEST_CASE("inverse sandwich prop2 and derivative sandwich prop3") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> logu(-3.0, 3.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto fams = {make_power(1.8), make_power([](const Point& x) { return 2.0 + x[1]; }),
                       make_power_log(2.2, 1.0)};
    for (const auto& phi : fams) {
        const MOFunction phi_star = make_conjugate_function(phi, false);
        for (int n = 0; n < 300; ++n) {
            const Point x = p2(unit(rng), unit(rng));
            const double s = std::pow(10.0, logu(rng));
            const double prod =
                generalized_inverse(phi_star, x, s) * generalized_inverse(phi, x, s);
            CHECK(s <= prod + 1e-8 * (1.0 + s));
            CHECK(prod <= 2.0 * s + 1e-8 * (1.0 + s));

            const double lhs = phi(x, s);
            const double mid = s * phi.deriv(x, s);
            const double rhs = phi(x, 2.0 * s);
            CHECK(lhs <= mid + 1e-8 * (1.0 + std::abs(mid)));
            CHECK(mid <= rhs + 1e-8 * (1.0 + rhs));
        }
    }
}

TEST_CASE("prop1: conjugate of its generalized inverse stays below s") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> logu(-2.0, 2.0);
    const auto phi = make_power(2.0);
    const MOFunction phi_star = make_conjugate_function(phi, false);
    for (int n = 0; n < 200; ++n) {
        const Point x = p2(0.5, 0.5);
        const double s = std::pow(10.0, logu(rng));
        const double tau = generalized_inverse(phi_star, x, s);
        CHECK(conjugate(phi, x, tau) <= s + 1e-8 * (1.0 + s));
    }
}

TEST_CASE("anisotropic family: envelope ordering and deterministic ties") {
    const auto fam = AnisotropicFamily({make_power(1.5), make_power(2.0), make_power(1.5)});
    const Point x = p2(0.2, 0.8);
    for (double t : geometric_grid(1e-3, 1e3, 8)) {
        const double mn = fam.phi_min()(x, t);
        const double mx = fam.phi_max()(x, t);
        for (int i = 0; i < fam.size(); ++i) {
            CHECK(mn <= fam.component(i)(x, t) + 1e-14);
            CHECK(fam.component(i)(x, t) <= mx + 1e-14);
        }
    }
    // equal components tie to the lowest index
    CHECK(fam.attaining_index_min(x, 1.0) == 0);
    CHECK(fam.attaining_index_max(x, 1.0) == 0);
    // below t=1 the larger exponent is smaller; above it is larger
    CHECK(fam.attaining_index_min(x, 0.5) == 1);
    CHECK(fam.attaining_index_max(x, 2.0) == 1);
    // max envelope remains convex
    CHECK(probe_convex_slice(fam.phi_max(), x));
}

TEST_CASE("cached envelope matches direct double conjugation") {
    // kinked min of two powers: genuinely nonconvex slice
    const auto fam = AnisotropicFamily({make_power(1.4), make_power(2.4)});
    const MOFunction env = make_biconjugate(fam.phi_min());
    const Point x = p2(0.25, 0.75);
    auto h = [&fam](const Point& xx, double t) { return fam.phi_min().evaluate(xx, t); };
    for (double t : {0.05, 0.3, 0.8, 1.0, 1.3, 2.5, 8.0, 50.0}) {
        const double direct = biconjugate(h, x, t);
        const double cached = env(x, t);
        CHECK(cached == doctest::Approx(direct).epsilon(2e-4));
        CHECK(cached <= fam.phi_min()(x, t) + 1e-10);
    }
    // convex-slice shortcut: single power family evaluates unchanged
    const MOFunction env2 = make_biconjugate(make_power(1.7));
    CHECK(env2(x, 3.0) == doctest::Approx(std::pow(3.0, 1.7)).epsilon(1e-12));
    // envelope inverse round-trips
    const double v = env(x, 2.5);
    CHECK(env.inverse(x, v) == doctest::Approx(2.5).epsilon(1e-3));
}
