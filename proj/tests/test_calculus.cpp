#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "hardyforge/calculus.hpp"

using namespace hardyforge;

namespace {

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> g;
    for (int i = 0; i < n; ++i) g.push_back(a + (b - a) * i / (n - 1));
    return g;
}

double fd_j(const Expr& phi, double d, double x, const ParamBindings& p = {}) {
    double eps = 1e-5 * std::max(1.0, std::fabs(x));
    double f0 = phi.eval(x, p);
    double fp = phi.eval(x + eps, p);
    double fm = phi.eval(x - eps, p);
    double d1 = (fp - fm) / (2 * eps);
    double d2 = (fp - 2 * f0 + fm) / (eps * eps);
    double r = d1 / f0;
    double j = 0.25 * r * r - 0.5 * d2 / f0;
    if (d != 1.0) j -= (d - 1.0) / (2.0 * x) * r;
    return j;
}

}  // namespace

TEST_CASE("j_op of a constant vanishes") {
    Expr one = Expr::constant(1.0);
    for (double d : {1.0, 2.0, 3.5, 7.0}) {
        Expr j = j_op(one, d);
        for (double x : linspace(0.1, 5.0, 16)) CHECK(j.eval(x) == doctest::Approx(0.0));
    }
}

TEST_CASE("j_op reproduces the classical Hardy density") {
    Expr phi = parse("x^(2-d)");
    Expr j = j_op(phi, 3.0);
    ParamBindings p{{"d", 3.0}};
    CHECK(j.eval(2.0, p) == doctest::Approx(0.0625).epsilon(1e-12));
    for (double x : linspace(0.2, 8.0, 32))
        CHECK(j.eval(x, p) == doctest::Approx(0.25 / (x * x)).epsilon(1e-10));
}

TEST_CASE("j_op of e^x in one dimension is -1/4") {
    Expr j = j_op(parse("exp(x)"), 1.0);
    for (double x : linspace(-2.0, 2.0, 16))
        CHECK(j.eval(x) == doctest::Approx(-0.25).epsilon(1e-12));
}

TEST_CASE("power law closed form") {
    // J^d(x^p) = (-p^2/4 + p(2-d)/2) / x^2
    std::mt19937 rng(91);
    std::uniform_real_distribution<double> pd(-3.0, 3.0), dd(1.0, 6.0);
    for (int trial = 0; trial < 40; ++trial) {
        double p = pd(rng), d = dd(rng);
        Expr j = j_op(Expr::pow(Expr::variable(), Expr::constant(p)), d);
        double coeff = -p * p / 4.0 + p * (2.0 - d) / 2.0;
        for (double x : linspace(0.3, 4.0, 8)) {
            double want = coeff / (x * x);
            CHECK(j.eval(x) ==
                  doctest::Approx(want).epsilon(1e-10).scale(std::max(1.0, std::fabs(want))));
        }
    }
}

TEST_CASE("j_op ignores positive constant prefactors") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> cd(0.1, 10.0);
    std::vector<Expr> family = {parse("x^1.5"), parse("(1+x^2)^2"), parse("exp(0.3*x)"),
                                parse("sinh(x)"), parse("x*(1+x^2)")};
    for (const Expr& phi : family) {
        double c = cd(rng);
        Expr a = j_op(phi, 3.0);
        Expr b = j_op(Expr::constant(c) * phi, 3.0);
        for (double x : linspace(0.5, 3.0, 16))
            CHECK(std::fabs(a.eval(x) - b.eval(x)) <= 1e-10 * (1.0 + std::fabs(a.eval(x))));
    }
}

TEST_CASE("j_op agrees with finite differences") {
    std::vector<Expr> family = {parse("x^2.5"), parse("(1+x^2)^(-1)"), parse("exp(x)"),
                                parse("sinh(x)^2"), parse("x^2*exp(-0.5*x)")};
    for (const Expr& phi : family)
        for (double d : {1.0, 2.0, 3.0, 4.5}) {
            Expr j = j_op(phi, d);
            for (double x : linspace(0.5, 3.0, 12))
                CHECK(j.eval(x) == doctest::Approx(fd_j(phi, d, x)).epsilon(1e-5));
        }
}

TEST_CASE("i_radial is an alias of j_op") {
    ParamBindings p{{"d", 5.0}, {"a", 0.5}};
    Expr i = i_radial(parse("x^(-2*a)"), 5.0);
    CHECK(i.eval(1.0, p) == doctest::Approx(1.25).epsilon(1e-12));
    Expr phi = parse("(1+x^2)^0.7");
    Expr diff = (i_radial(phi, 2.5) - j_op(phi, 2.5)).simplified();
    for (double x : linspace(0.2, 4.0, 16)) CHECK(diff.eval(x) == doctest::Approx(0.0));
}

TEST_CASE("product rule identity") {
    auto grid = linspace(0.5, 3.0, 24);
    SUBCASE("monomials") {
        CHECK(product_rule_residual(parse("x^2"), parse("x^(-0.5)"), 3.0, grid) <= 1e-10);
    }
    SUBCASE("unit left factor") {
        CHECK(product_rule_residual(parse("1"), parse("(1+x^2)^2"), 2.0, grid) <= 1e-12);
    }
    SUBCASE("hyperbolic times exponential") {
        CHECK(product_rule_residual(parse("sinh(x)"), parse("exp(x)"), 2.0, grid) <= 1e-9);
    }
}

TEST_CASE("dimension shift identity") {
    auto grid = linspace(0.5, 3.0, 24);
    SUBCASE("classical pair") {
        ParamBindings p{{"d", 3.0}};
        CHECK(dimension_shift_residual(parse("x^(2-d)"), parse("1"), 3.0, grid, p) <= 1e-10);
        Expr both = (j_op(parse("x^(2-d)"), 3.0) - j_op(parse("1"), 3.0)).simplified();
        for (double x : grid)
            CHECK(both.eval(x, p) == doctest::Approx(0.25 / (x * x)).epsilon(1e-10));
    }
    SUBCASE("equal weights vanish") {
        CHECK(dimension_shift_residual(parse("(1+x^2)"), parse("(1+x^2)"), 4.0, grid) <= 1e-12);
    }
    SUBCASE("example pair") {
        ParamBindings p{{"d", 3.0}, {"alpha", 2.0}};
        CHECK(dimension_shift_residual(parse("(1+x^2)^((2-d)/2)"), parse("(1+x^2)^alpha"), 3.0,
                                       grid, p) <= 1e-9);
    }
}

TEST_CASE("randomized identity residuals") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> pd(-2.0, 2.0), sd(0.05, 0.6), dd(1.0, 5.0);
    auto grid = linspace(0.5, 2.5, 12);
    auto random_positive = [&]() {
        switch (rng() % 4) {
            case 0: return Expr::pow(Expr::variable(), Expr::constant(pd(rng)));
            case 1: return Expr::pow(parse("1+x^2"), Expr::constant(pd(rng)));
            case 2: return exp(Expr::constant(sd(rng)) * Expr::variable());
            default: return Expr::pow(sinh(Expr::variable()), Expr::constant(pd(rng)));
        }
    };
    for (int trial = 0; trial < 100; ++trial) {
        Expr phi = random_positive(), psi = random_positive();
        double d = dd(rng);
        CHECK(product_rule_residual(phi, psi, d, grid) <= 1e-9);
        CHECK(dimension_shift_residual(phi, psi, d, grid) <= 1e-9);
    }
}
