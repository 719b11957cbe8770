#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hardyforge/feller.hpp"

using namespace hardyforge;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

Domain interval(double l, double r, double d = 1.0) { return {l, r, d}; }

}  // namespace

TEST_CASE("domain validation") {
    CHECK_THROWS_AS(interval(1.0, 1.0).validate(), std::invalid_argument);
    CHECK_THROWS_AS(interval(2.0, 1.0).validate(), std::invalid_argument);
    CHECK_THROWS_AS(interval(-1.0, 1.0, 3.0).validate(), std::invalid_argument);
    CHECK_THROWS_AS(interval(0.0, 1.0, 0.5).validate(), std::invalid_argument);
    CHECK_NOTHROW(interval(-1.0, 1.0, 1.0).validate());
    CHECK_NOTHROW(interval(0.0, kInf, 3.0).validate());
}

TEST_CASE("default base point") {
    CHECK(default_base_point(interval(0.0, 1.0)) == doctest::Approx(0.5));
    CHECK(default_base_point(interval(0.0, kInf)) == doctest::Approx(1.0));
    CHECK(default_base_point(interval(3.0, kInf)) == doctest::Approx(4.0));
    CHECK(default_base_point(interval(-kInf, 0.0)) == doctest::Approx(-1.0));
}

TEST_CASE("scale integrand") {
    CHECK(scale_integrand(parse("1"), 1.0).eval(0.7) == doctest::Approx(1.0));
    Expr f = scale_integrand(parse("x*(1-x)"), 1.0);
    CHECK(f.eval(0.5) == doctest::Approx(4.0));
    ParamBindings p{{"d", 3.0}};
    Expr g = scale_integrand(parse("x^(2-d)"), 3.0);
    for (double x : {0.5, 1.0, 2.0})
        CHECK(g.eval(x, p) == doctest::Approx(1.0 / x).epsilon(1e-12));
}

TEST_CASE("adaptive simpson on smooth integrands") {
    CHECK(adaptive_simpson(parse("x^2"), 0.0, 1.0, 1e-12, {}) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-10));
    CHECK(adaptive_simpson(parse("exp(x)"), 0.0, 1.0, 1e-12, {}) ==
          doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-10));
    CHECK(adaptive_simpson(parse("1/x"), 1.0, 2.0, 1e-12, {}) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-10));
    CHECK_THROWS_AS(adaptive_simpson(parse("log(x)"), -1.0, 1.0, 1e-10, {}), EvalError);
}

TEST_CASE("endpoint classification against analytic antiderivatives") {
    FellerConfig cfg;
    Domain dom = interval(0.0, kInf);

    SUBCASE("x^-p toward zero") {
        struct Case {
            double p;
            bool divergent;
        };
        for (Case c : {Case{0.5, false}, Case{1.0, true}, Case{1.5, true}, Case{2.0, true}}) {
            Expr f = Expr::pow(Expr::variable(), Expr::constant(-c.p));
            auto v = classify_endpoint_integral(f, Endpoint::Left, dom, cfg);
            if (c.divergent) {
                CHECK(v.divergent());
                if (c.p == 1.0) CHECK(v.rate == RateTag::Log);
                if (c.p > 1.0) CHECK(v.rate == RateTag::Power);
            } else {
                CHECK(v.convergent());
                // antiderivative x^{1-p}/(1-p): integral from 0 to c=1
                CHECK(v.value == doctest::Approx(1.0 / (1.0 - c.p)).epsilon(1e-6));
            }
        }
    }
    SUBCASE("1/x toward infinity diverges logarithmically") {
        auto v = classify_endpoint_integral(parse("1/x"), Endpoint::Right, dom, cfg);
        CHECK(v.divergent());
        CHECK(v.rate == RateTag::Log);
    }
    SUBCASE("1/x^2 toward infinity converges to 1/c") {
        auto v = classify_endpoint_integral(parse("x^(-2)"), Endpoint::Right, dom, cfg);
        CHECK(v.convergent());
        CHECK(v.value == doctest::Approx(1.0).epsilon(1e-6));
    }
    SUBCASE("bounded integrand on a bounded ladder converges") {
        auto v = classify_endpoint_integral(parse("1"), Endpoint::Left, interval(0.0, 1.0), cfg);
        CHECK(v.convergent());
        CHECK(v.value == doctest::Approx(0.5).epsilon(1e-8));
    }
    SUBCASE("jacobi scale integrand diverges at both ends of (0,1)") {
        Expr f = parse("1/(x*(1-x))");
        auto l = classify_endpoint_integral(f, Endpoint::Left, interval(0.0, 1.0), cfg);
        auto r = classify_endpoint_integral(f, Endpoint::Right, interval(0.0, 1.0), cfg);
        CHECK(l.divergent());
        CHECK(r.divergent());
        CHECK(l.rate == RateTag::Log);
    }
    SUBCASE("slowly divergent 1/(x|log x|) toward zero") {
        auto v = classify_endpoint_integral(parse("1/(x*abs(log(x)))"), Endpoint::Left,
                                            interval(0.0, 0.5), cfg);
        CHECK(v.divergent());
    }
}

TEST_CASE("verdict evidence structure") {
    FellerConfig cfg;
    auto v = classify_endpoint_integral(parse("1/x"), Endpoint::Right, interval(0.0, kInf), cfg);
    REQUIRE(v.evidence.size() >= 3);
    double prev_partial = 0.0;
    double prev_inc = 0.0;
    for (std::size_t i = 0; i < v.evidence.size(); ++i) {
        CHECK(v.evidence[i].second >= prev_partial);
        double inc = v.evidence[i].second - prev_partial;
        if (i >= 1) CHECK(inc >= prev_inc - 1e-9);  // non-decreasing increments when divergent
        prev_partial = v.evidence[i].second;
        prev_inc = inc;
    }
}

TEST_CASE("extending the ladder never flips a settled verdict") {
    Domain dom = interval(0.0, kInf);
    for (const char* src : {"x^(-0.5)", "x^(-1.5)", "1/x"}) {
        Expr f = parse(src);
        FellerConfig small, big;
        small.shells = 12;
        big.shells = 24;
        auto a = classify_endpoint_integral(f, Endpoint::Left, dom, small);
        auto b = classify_endpoint_integral(f, Endpoint::Left, dom, big);
        if (a.kind != IntegralVerdict::Kind::Indeterminate) CHECK(a.kind == b.kind);
    }
}

TEST_CASE("recurrence verdicts") {
    FellerConfig cfg;

    SUBCASE("h = x(1-x) on (0,1) is recurrent") {
        auto v = recurrence_test(parse("x*(1-x)"), interval(0.0, 1.0), cfg);
        CHECK(v.recurrent == RecurrenceVerdict::Recurrent::Yes);
        CHECK(v.left.divergent());
        CHECK(v.right.divergent());
    }
    SUBCASE("interior ball weight is recurrent in d=3") {
        ParamBindings p{{"d", 3.0}, {"R", 1.0}};
        // h = 1/x - 1 cancels catastrophically within ~1e-12 of x = 1,
        // so the ladder stops before the noisy shells
        FellerConfig capped = cfg;
        capped.shells = 12;
        auto v = recurrence_test(parse("x^(2-d)-R^(2-d)"), interval(0.0, 1.0, 3.0), capped, p);
        CHECK(v.recurrent == RecurrenceVerdict::Recurrent::Yes);
    }
    SUBCASE("h = 1 on (0,1) is not recurrent") {
        auto v = recurrence_test(parse("1"), interval(0.0, 1.0), cfg);
        CHECK(v.recurrent == RecurrenceVerdict::Recurrent::No);
    }
    SUBCASE("(1+x^2)^alpha with alpha <= (2-d)/2 is recurrent") {
        ParamBindings p{{"alpha", -0.5}};
        auto v = recurrence_test(parse("(1+x^2)^alpha"), interval(0.0, kInf, 3.0), cfg, p);
        CHECK(v.recurrent == RecurrenceVerdict::Recurrent::Yes);
    }
    SUBCASE("combination rule") {
        // one convergent endpoint forces No even though the other diverges
        auto v = recurrence_test(parse("x^3"), interval(0.0, kInf), cfg);
        CHECK(v.left.divergent());
        CHECK(v.right.convergent());
        CHECK(v.recurrent == RecurrenceVerdict::Recurrent::No);
    }
}

TEST_CASE("recurrence is scale invariant") {
    FellerConfig cfg;
    for (double c : {0.01, 0.5, 7.0, 300.0}) {
        auto base = recurrence_test(parse("x*(1-x)"), interval(0.0, 1.0), cfg);
        auto scaled =
            recurrence_test(Expr::constant(c) * parse("x*(1-x)"), interval(0.0, 1.0), cfg);
        CHECK(base.recurrent == scaled.recurrent);
        auto base2 = recurrence_test(parse("1"), interval(0.0, 1.0), cfg);
        auto scaled2 = recurrence_test(Expr::constant(c), interval(0.0, 1.0), cfg);
        CHECK(base2.recurrent == scaled2.recurrent);
    }
}

TEST_CASE("interior base point is enforced") {
    FellerConfig cfg;
    cfg.base_point = 2.0;
    CHECK_THROWS_AS(
        classify_endpoint_integral(parse("1"), Endpoint::Left, interval(0.0, 1.0), cfg),
        std::invalid_argument);
}

TEST_CASE("quadrature failure yields indeterminate, not a guess") {
    FellerConfig cfg;
    // log(x-2) is undefined on most of (0,1): every shell fails
    auto v = classify_endpoint_integral(parse("log(x-2)"), Endpoint::Left, interval(0.0, 1.0),
                                        cfg);
    CHECK(v.kind == IntegralVerdict::Kind::Indeterminate);
    CHECK(!v.note.empty());
}
