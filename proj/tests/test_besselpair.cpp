#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "hardyforge/besselpair.hpp"

using namespace hardyforge;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> g;
    for (int i = 0; i < n; ++i) g.push_back(a + (b - a) * i / (n - 1));
    return g;
}

}  // namespace

TEST_CASE("ground state closed forms") {
    SUBCASE("classical Hardy") {
        WeightPair wp;
        wp.h = parse("x^(2-d)");
        wp.V = parse("1");
        wp.dom = {0.0, kInf, 3.0};
        wp.params = {{"d", 3.0}};
        Expr u = ground_state(wp);
        for (double x : {0.25, 1.0, 4.0})
            CHECK(u.eval(x, wp.params) == doctest::Approx(std::pow(x, -0.5)).epsilon(1e-12));
    }
    SUBCASE("equal weights give the constant 1") {
        WeightPair wp;
        wp.h = parse("(1+x^2)");
        wp.V = parse("(1+x^2)");
        wp.dom = {0.0, kInf, 3.0};
        Expr u = ground_state(wp);
        for (double x : {0.1, 2.0}) CHECK(u.eval(x) == doctest::Approx(1.0));
    }
    SUBCASE("hyperbolic pair") {
        WeightPair wp;
        wp.h = parse("r", "r");
        wp.V = parse("sinh(r)^(d-1)", "r");
        wp.dom = {0.0, kInf, 1.0};
        wp.params = {{"d", 3.0}};
        Expr u = ground_state(wp);
        for (double r : {0.5, 1.5})
            CHECK(u.eval(r, wp.params) ==
                  doctest::Approx(std::sqrt(r / (std::sinh(r) * std::sinh(r)))).epsilon(1e-12));
    }
}

TEST_CASE("ode residual") {
    auto grid = linspace(0.2, 5.0, 64);

    SUBCASE("exact ground state annihilates the classical equation") {
        double d = 3.0;
        Expr u = parse("x^((2-3)/2)");
        Expr W = parse("1/(4*x^2)");
        CHECK(ode_residual(u, parse("1"), W, d, grid) <= 1e-10);
    }
    SUBCASE("trivial pair") {
        CHECK(ode_residual(parse("1"), parse("1"), parse("0"), 3.0, grid) == 0.0);
    }
    SUBCASE("residual is linear in u") {
        Expr u = parse("x^2+1");
        Expr V = parse("1+x^2");
        Expr W = parse("1/(1+x^2)");
        double base = ode_residual(u, V, W, 2.0, grid);
        double scaled = ode_residual(Expr::constant(5.0) * u, V, W, 2.0, grid);
        CHECK(scaled == doctest::Approx(5.0 * base).epsilon(1e-10));
    }
    SUBCASE("wrong weight leaves a visible residual") {
        Expr u = parse("x^(-0.5)");
        CHECK(ode_residual(u, parse("1"), parse("1/x^2"), 3.0, grid) > 1e-2);
    }
}

TEST_CASE("problem validation and default initial point") {
    OdeProblem prob;
    prob.V = parse("1");
    prob.W = parse("0");
    prob.a = 0.25;
    prob.b = 4.0;
    CHECK(prob.initial_point() == doctest::Approx(1.0));  // geometric midpoint
    prob.a = -1.0;
    prob.b = 3.0;
    CHECK(prob.initial_point() == doctest::Approx(1.0));  // arithmetic midpoint
    prob.x0 = 10.0;
    CHECK_THROWS_AS(prob.validate(), std::invalid_argument);
    prob.x0 = 1.0;
    prob.step = 0.0;
    CHECK_THROWS_AS(prob.validate(), std::invalid_argument);
}

TEST_CASE("shooting the classical ground state") {
    OdeProblem prob;
    prob.V = parse("1");
    prob.W = parse("1/(4*x^2)");
    prob.d = 3.0;
    prob.a = 0.1;
    prob.b = 10.0;
    prob.x0 = 1.0;
    prob.u0 = 1.0;    // x^{-1/2} at 1
    prob.du0 = -0.5;  // derivative at 1
    prob.step = 1e-3;

    auto sol = shoot(prob);
    CHECK(sol.positive);
    CHECK(!sol.blew_up);
    REQUIRE(sol.samples.size() > 100);
    for (std::size_t i = 1; i < sol.samples.size(); ++i)
        CHECK(sol.samples[i].x > sol.samples[i - 1].x);
    for (std::size_t i = 0; i < sol.samples.size(); i += 97) {
        const auto& s = sol.samples[i];
        CHECK(s.u == doctest::Approx(std::pow(s.x, -0.5)).epsilon(1e-6));
    }
}

TEST_CASE("zero potential keeps a constant solution") {
    OdeProblem prob;
    prob.V = parse("1");
    prob.W = parse("0");
    prob.d = 1.0;
    prob.a = 0.0;
    prob.b = 2.0;
    prob.x0 = 1.0;
    prob.u0 = 1.0;
    prob.du0 = 0.0;
    auto sol = shoot(prob);
    CHECK(sol.positive);
    CHECK(sol.min_value == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("quadrupled weight oscillates") {
    OdeProblem prob;
    prob.V = parse("1");
    prob.W = parse("1/x^2");  // 4 times the critical weight
    prob.d = 3.0;
    prob.a = 0.01;
    prob.b = 50.0;
    prob.x0 = 1.0;
    prob.u0 = 1.0;
    prob.du0 = -0.5;
    auto sol = shoot(prob);
    CHECK(!sol.positive);
    CHECK(sol.min_value < 0.0);
}

TEST_CASE("blow-up is flagged and truncated") {
    OdeProblem prob;
    prob.V = parse("1");
    prob.W = parse("-100");  // exponential growth e^{10x}
    prob.d = 1.0;
    prob.a = 0.0;
    prob.b = 40.0;
    prob.x0 = 1.0;
    prob.u0 = 1.0;
    prob.du0 = 10.0;
    prob.step = 1e-2;
    auto sol = shoot(prob);
    CHECK(sol.blew_up);
    CHECK(sol.samples.back().x < prob.b);
}
