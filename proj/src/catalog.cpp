#include "hardyforge/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hardyforge {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

CatalogEntry make(std::string name, std::string var, std::string h, std::string V,
                  std::string W, Domain dom, ParamBindings params,
                  WeightClass expected) {
    CatalogEntry e;
    e.name = std::move(name);
    e.var = std::move(var);
    e.h_src = std::move(h);
    e.V_src = std::move(V);
    e.W_src = std::move(W);
    e.wp.h = parse(e.h_src, e.var);
    e.wp.V = parse(e.V_src, e.var);
    e.wp.dom = dom;
    e.wp.params = std::move(params);
    e.expected_W = parse(e.W_src, e.var);
    e.expected_classification = expected;
    return e;
}

std::vector<CatalogEntry> build_entries() {
    std::vector<CatalogEntry> out;

    {
        auto e = make("jacobi01", "x", "x*(1-x)", "x^(beta+1)*(1-x)^(alpha+1)",
                      "((beta^2/4)*x^(beta-1)*(1-x)^(alpha+1)"
                      " + (alpha^2/4)*x^(beta+1)*(1-x)^(alpha-1)"
                      " - ((beta*alpha+beta+alpha)/2)*x^beta*(1-x)^alpha)"
                      " / (x^(beta+1)*(1-x)^(alpha+1))",
                      {0.0, 1.0, 1.0}, {{"alpha", 0.0}, {"beta", -1.0}},
                      WeightClass::Optimal);
        e.constants.push_back({"weighted density at midpoint",
                               ConstantCheck::Kind::ScaledWeight,
                               "x^(beta+1)*(1-x)^(alpha+1)", 0.5,
                               "(beta^2/4)*2^(1-beta-alpha-1)"
                               " + (alpha^2/4)*2^(-beta-1+1-alpha)"
                               " - ((beta*alpha+beta+alpha)/2)*2^(-beta-alpha)",
                               1e-10});
        e.truncations = {{0.05, 0.95, 400, false}, {0.01, 0.99, 1200, false}};
        e.residual = {0.01, 0.99, 200};
        e.feller.shells = 12;
        e.notes = "Jacobi-type weight on the unit interval";
        out.push_back(std::move(e));
    }

    {
        auto e = make("gegenbauer", "x", "1-x^2", "(1-x^2)^alpha",
                      "(alpha*(1-alpha)*(1-x^2)^(alpha-1)"
                      " + (1-alpha)^2*(1-x^2)^(alpha-2)) / (1-x^2)^alpha",
                      {-1.0, 1.0, 1.0}, {{"alpha", 0.5}}, WeightClass::Optimal);
        e.constants.push_back({"spectral gap", ConstantCheck::Kind::InfWV, "1", 0.0,
                               "1-alpha", 1e-8});
        e.truncations = {{-0.95, 0.95, 400, false}, {-0.99, 0.99, 1200, false}};
        e.residual = {-0.99, 0.99, 200};
        e.feller.shells = 12;
        e.notes = "Gegenbauer-type weight on (-1,1)";
        out.push_back(std::move(e));
    }

    {
        auto e = make("ball_interior", "x", "x^(2-d)-R^(2-d)", "1",
                      "((d-2)/2 * R^(d-2)/(x*(R^(d-2)-x^(d-2))))^2",
                      {0.0, 1.0, 3.0}, {{"d", 3.0}, {"R", 1.0}}, WeightClass::Optimal);
        e.constants.push_back({"interior constant", ConstantCheck::Kind::ScaledWeight,
                               "(x*(R^(d-2)-x^(d-2))/R^(d-2))^2", 0.5,
                               "((d-2)/2)^2", 1e-10});
        e.truncations = {{0.05, 0.95, 400, false}, {0.01, 0.99, 1200, false}};
        e.residual = {0.01, 0.99, 200};
        e.feller.shells = 12;
        e.notes = "unit-ball weight degenerating at the boundary";
        out.push_back(std::move(e));
    }

    {
        auto e = make("ckn", "x", "x^(2-d)", "x^(-2*a)",
                      "((d-2*a-2)/2)^2 / x^2", {0.0, kInf, 3.0},
                      {{"d", 3.0}, {"a", -1.0}, {"R", 1.0}}, WeightClass::Optimal);
        e.constants.push_back({"CKN constant", ConstantCheck::Kind::ScaledWeight,
                               "x^2", 1.7, "((d-2*a-2)/2)^2", 1e-10});
        e.constants.push_back({"boundary density at R", ConstantCheck::Kind::Boundary,
                               "1", 1.0, "(2-d+2*a)/(2*R^(2*a+1))", 1e-10});
        e.truncations = {{1e-2, 1e2, 500, true}, {1e-3, 1e3, 2000, true}};
        e.residual = {0.05, 50.0, 200};
        e.notes = "Caffarelli-Kohn-Nirenberg power weights";
        out.push_back(std::move(e));
    }

    {
        auto e = make("leray", "x", "x^(2-d)*(log(R)-log(x))", "1",
                      "((d-2)/2)^2/x^2 + 1/(4*(x*(log(R)-log(x)))^2)",
                      {0.0, 1.0, 2.0}, {{"d", 2.0}, {"R", 1.0}}, WeightClass::Optimal);
        e.constants.push_back({"Leray constant", ConstantCheck::Kind::ScaledWeight,
                               "(x*log(x))^2", 0.3, "1/4", 1e-10});
        e.truncations = {{0.05, 0.95, 400, false}, {0.01, 0.99, 1200, false}};
        e.residual = {0.01, 0.99, 200};
        e.feller.shells = 12;
        e.notes = "planar logarithmic weight on the unit disc";
        out.push_back(std::move(e));
    }

    {
        auto e = make("ball_log", "x", "x^(2-d)*(log(R)-log(x))", "1",
                      "((d-2)/2)^2/x^2 + 1/(4*(x*(log(R)-log(x)))^2)",
                      {0.0, 1.0, 3.0}, {{"d", 3.0}, {"R", 1.0}}, WeightClass::Optimal);
        // at x = 1/e both terms contribute 1/4 to W x^2
        e.constants.push_back({"two-term value", ConstantCheck::Kind::ScaledWeight,
                               "x^2", std::exp(-1.0), "((d-2)/2)^2 + 1/4", 1e-10});
        e.truncations = {{0.05, 0.95, 400, false}, {0.01, 0.99, 1200, false}};
        e.residual = {0.01, 0.99, 200};
        e.feller.shells = 12;
        e.notes = "logarithmic improvement of the interior inequality";
        out.push_back(std::move(e));
    }

    {
        auto e = make("exterior", "x", "(x-R)*x^(1-d)", "1",
                      "(d-1)*(d-3)/(4*x^2) + 1/(4*(x-R)^2)",
                      {1.0, kInf, 3.0}, {{"d", 3.0}, {"R", 1.0}}, WeightClass::Optimal);
        // for d = 3 the 1/x^2 part vanishes and 4 (x-R)^2 W is exactly 1
        e.constants.push_back({"remainder constant", ConstantCheck::Kind::ScaledWeight,
                               "4*(x-R)^2", 3.0, "(d-1)*(d-3)*(3-R)^2/9 + 1", 1e-10});
        e.truncations = {{1.05, 10.0, 500, false}, {1.02, 20.0, 2000, false}};
        e.residual = {1.05, 50.0, 200};
        e.notes = "exterior-domain weight singular on the inner sphere";
        out.push_back(std::move(e));
    }

    {
        auto e = make("one_plus_x2", "x", "(1+x^2)^((2-d)/2)", "(1+x^2)^alpha",
                      "( (2*alpha+d-2)^2/4*(1+x^2)^(alpha-1)"
                      " - (2*alpha+d-2)*(2*alpha-d-2)/4*(1+x^2)^(alpha-2) )"
                      " / (1+x^2)^alpha",
                      {0.0, kInf, 3.0}, {{"alpha", 2.0}, {"d", 3.0}},
                      WeightClass::Optimal);
        e.constants.push_back({"weight at origin", ConstantCheck::Kind::ScaledWeight,
                               "1", 1e-8,
                               "(2*alpha+d-2)^2/4 - (2*alpha+d-2)*(2*alpha-d-2)/4",
                               1e-10});
        e.truncations = {{0.1, 10.0, 500, true}, {0.02, 50.0, 1500, true}};
        e.residual = {0.1, 50.0, 200};
        e.notes = "smooth binomial weights; class depends on alpha";
        out.push_back(std::move(e));
    }

    {
        auto e = make("one_plus_x2_critical", "x", "(1+x^2)^(2-alpha)", "(1+x^2)^alpha",
                      "2*d*(alpha-1)/(1+x^2)", {0.0, kInf, 3.0},
                      {{"alpha", 4.0}, {"d", 3.0}}, WeightClass::Critical);
        e.constants.push_back({"weight at origin", ConstantCheck::Kind::ScaledWeight,
                               "1", 1e-8, "2*d*(alpha-1)", 1e-10});
        e.truncations = {{0.1, 10.0, 500, true}, {0.02, 50.0, 1500, true}};
        e.residual = {0.1, 50.0, 200};
        e.notes = "critical companion of one_plus_x2 above the optimal range";
        out.push_back(std::move(e));
    }

    {
        auto e = make("power_binomial", "x", "x^(2-d)", "(a+b*x^alpha)^beta/x^(2*m)",
                      "( (alpha^2*beta^2/4 - alpha^2*beta/2)"
                      "*(b*x^alpha/(a+b*x^alpha))^2"
                      " + (alpha^2*beta/2 + (d-2*m-2)/2*alpha*beta)"
                      "*(b*x^alpha/(a+b*x^alpha))"
                      " + ((d-2*m-2)/2)^2 ) / x^2",
                      {0.0, kInf, 3.0},
                      {{"a", 1.0}, {"b", 1.0}, {"alpha", 2.0}, {"beta", 1.0},
                       {"m", 0.0}, {"d", 3.0}},
                      WeightClass::Optimal);
        e.constants.push_back({"U(0)", ConstantCheck::Kind::ScaledWeight, "x^2", 1e-8,
                               "((d-2*m-2)/2)^2", 1e-12});
        e.constants.push_back({"U(1)", ConstantCheck::Kind::ScaledWeight, "x^2", 1e8,
                               "((alpha*beta+d-2*m-2)/2)^2", 1e-12});
        e.truncations = {{0.1, 10.0, 500, true}, {0.02, 50.0, 1500, true}};
        e.residual = {0.1, 50.0, 200};
        e.notes = "binomial-over-power weight with quadratic coefficient profile";
        out.push_back(std::move(e));
    }

    {
        auto e = make("gaussian", "x", "x^(2-d)", "x^(-delta)*exp(-gamma*x^2)",
                      "((d-delta-2)/2)^2/x^2 - (d-delta)*gamma + gamma^2*x^2",
                      {0.0, kInf, 3.0},
                      {{"d", 3.0}, {"delta", 3.0}, {"gamma", 1.0}},
                      WeightClass::Optimal);
        e.constants.push_back({"weight at 1", ConstantCheck::Kind::ScaledWeight, "1",
                               1.0, "((d-delta-2)/2)^2 - (d-delta)*gamma + gamma^2",
                               1e-10});
        e.policy.infinite_cutoff = 20.0;
        e.feller.ladder_factor = 2.0;
        e.truncations = {{0.1, 5.0, 500, false}, {0.05, 8.0, 1500, false}};
        e.residual = {0.1, 4.0, 200};
        e.notes = "Gaussian-damped power measure";
        out.push_back(std::move(e));
    }

    {
        auto e = make("hyperbolic_ak", "r", "r", "sinh(r)^(d-1)",
                      "1/(4*r^2) + (d-1)*(d-3)/(4*sinh(r)^2) + ((d-1)/2)^2",
                      {0.0, kInf, 1.0}, {{"d", 3.0}}, WeightClass::Optimal);
        e.constants.push_back({"leading coefficient", ConstantCheck::Kind::ScaledWeight,
                               "4*r^2", 1e-8, "1", 1e-12});
        e.policy.infinite_cutoff = 30.0;
        e.truncations = {{0.1, 10.0, 500, false}, {0.05, 20.0, 1500, false}};
        e.residual = {0.05, 20.0, 200};
        e.notes = "hyperbolic-space base case; geodesic volume folded into V";
        out.push_back(std::move(e));
    }

    {
        auto e = make("hyperbolic_family", "r", "r*(r/sinh(r))^alpha", "sinh(r)^(d-1)",
                      "(alpha+1)^2/(4*r^2)"
                      " + alpha*(alpha+1)/2*(r*coth(r)-1)/r^2"
                      " + (d+alpha-1)*(d-alpha-3)/(4*sinh(r)^2)"
                      " + ((d-1)^2-alpha^2)/4",
                      {0.0, kInf, 1.0}, {{"d", 4.0}, {"alpha", 1.0}},
                      WeightClass::Optimal);
        e.constants.push_back({"leading coefficient", ConstantCheck::Kind::ScaledWeight,
                               "4*r^2", 1e-8, "(alpha+1)^2", 1e-12});
        e.policy.infinite_cutoff = 30.0;
        e.truncations = {{0.1, 10.0, 500, false}, {0.05, 20.0, 1500, false}};
        e.residual = {0.05, 20.0, 200};
        e.notes = "interpolating family; the gap parameter follows the exponent";
        out.push_back(std::move(e));
    }

    {
        auto e = make("hyperbolic_beta", "r", "r*(r/sinh(r))^(d-3)",
                      "r^(-2*beta)*sinh(r)^(d-1)",
                      "((d-2-2*beta)/2)^2/r^2"
                      " + ((d-2)*(d-3)/2 - (d-1)*beta)*(r*coth(r)-1)/r^2"
                      " + (d-2)",
                      {0.0, kInf, 1.0}, {{"d", 4.0}, {"beta", 0.5}},
                      WeightClass::Optimal);
        e.constants.push_back({"leading coefficient", ConstantCheck::Kind::ScaledWeight,
                               "4*r^2", 1e-8, "(d-2-2*beta)^2", 1e-12});
        e.policy.infinite_cutoff = 30.0;
        e.truncations = {{0.1, 10.0, 500, false}, {0.05, 20.0, 1500, false}};
        e.residual = {0.05, 20.0, 200};
        e.notes = "power-tilted hyperbolic measure";
        out.push_back(std::move(e));
    }

    {
        auto e = make("hyperbolic_logcoth", "r", "sinh(r)*log(coth(r/2))",
                      "sinh(r)^(d-1)",
                      "((d-2)/2)^2/sinh(r)^2"
                      " + 1/(4*sinh(r)^2*log(coth(r/2))^2) + d*(d-2)/4",
                      {0.0, kInf, 1.0}, {{"d", 3.0}}, WeightClass::Optimal);
        e.policy.infinite_cutoff = 12.0;
        e.feller.ladder_factor = 2.0;
        e.truncations = {{0.1, 8.0, 500, false}, {0.05, 12.0, 1500, false}};
        e.residual = {0.05, 10.0, 200};
        e.notes = "log-coth weight; saturates double precision past r ~ 36";
        out.push_back(std::move(e));
    }

    {
        auto e = make("model_manifold", "r", "r", "(r*(1+r^2))^(d-1)",
                      "1/(4*r^2)"
                      " + (d-1)*(d-3)/4*((1+3*r^2)/(r*(1+r^2)))^2"
                      " + (d-1)/2*(6*r/(r*(1+r^2)))",
                      {0.0, kInf, 1.0}, {{"d", 3.0}}, WeightClass::Optimal);
        e.constants.push_back({"leading coefficient", ConstantCheck::Kind::ScaledWeight,
                               "4*r^2", 1e-8, "1", 1e-12});
        e.truncations = {{0.1, 10.0, 500, false}, {0.05, 50.0, 1500, true}};
        e.residual = {0.05, 50.0, 200};
        e.notes = "rotationally symmetric model with profile psi(r) = r(1+r^2)";
        out.push_back(std::move(e));
    }

    return out;
}

std::vector<double> residual_grid(const ResidualGrid& rg) {
    std::vector<double> g;
    g.reserve(rg.n);
    if (rg.a > 0.0) {
        double ratio = std::pow(rg.b / rg.a, 1.0 / (rg.n - 1));
        double x = rg.a;
        for (int i = 0; i < rg.n; ++i, x *= ratio) g.push_back(x);
    } else {
        for (int i = 0; i < rg.n; ++i)
            g.push_back(rg.a + (rg.b - rg.a) * i / (rg.n - 1));
    }
    return g;
}

}  // namespace

const std::vector<CatalogEntry>& list_entries() {
    static const std::vector<CatalogEntry> entries = build_entries();
    return entries;
}

const CatalogEntry* find_entry(const std::string& name) {
    for (const auto& e : list_entries())
        if (e.name == name) return &e;
    return nullptr;
}

EntryReport run_entry(const std::string& name, const ParamBindings& overrides) {
    const CatalogEntry* entry = find_entry(name);
    if (!entry) throw std::out_of_range("unknown catalog entry: " + name);

    WeightPair wp = entry->wp;
    for (const auto& [k, v] : overrides) {
        if (!wp.params.contains(k))
            throw std::invalid_argument("entry " + name + " has no parameter " + k);
        wp.params[k] = v;
    }
    if (wp.dom.d != 1.0 && overrides.contains("d")) wp.dom.d = overrides.at("d");

    EntryReport rep;
    rep.name = name;
    rep.params = wp.params;
    rep.expected_classification = entry->expected_classification;

    Expr W = derive_weight(wp);

    std::vector<double> grid = make_grid(wp.dom, entry->policy);
    double worst = 0.0, worst_at = grid.empty() ? 0.0 : grid.front();
    for (double x : grid) {
        double dw = W.eval(x, wp.params);
        double ew = entry->expected_W.eval(x, wp.params);
        double rel = std::fabs(dw - ew) / std::max(std::fabs(ew), 1e-12);
        if (rel > worst) {
            worst = rel;
            worst_at = x;
        }
    }
    rep.weight_deviation = worst;
    rep.deviation_at = worst_at;

    rep.hardy = classify(wp, entry->feller, entry->policy);
    rep.classification = rep.hardy.classification;
    rep.classification_match = rep.classification == entry->expected_classification;

    for (const ConstantCheck& c : entry->constants) {
        EntryReport::ConstantResult r;
        r.label = c.label;
        r.expected = parse(c.expected_src, entry->var).eval(1.0, wp.params);
        switch (c.kind) {
            case ConstantCheck::Kind::ScaledWeight:
                r.computed = W.eval(c.at, wp.params) *
                             parse(c.factor_src, entry->var).eval(c.at, wp.params);
                break;
            case ConstantCheck::Kind::InfWV:
                r.computed = spectral_lower_bounds(W, wp.V, wp.dom, entry->policy.n,
                                                   wp.params, entry->policy)
                                 .lambda;
                break;
            case ConstantCheck::Kind::Boundary:
                r.computed = boundary_density(wp).eval(c.at, wp.params);
                break;
        }
        r.match = std::fabs(r.computed - r.expected) <=
                  c.tol * std::max(1.0, std::fabs(r.expected));
        rep.constants.push_back(std::move(r));
    }

    rep.spectral = verify_inequality(wp, W, entry->truncations);

    Expr u = ground_state(wp);
    rep.ode_residual = ode_residual(u, wp.V, W, wp.dom.d, residual_grid(entry->residual),
                                    wp.params);

    bool constants_ok = std::all_of(rep.constants.begin(), rep.constants.end(),
                                    [](const auto& c) { return c.match; });
    rep.pass = rep.weight_deviation <= 1e-9 && rep.classification_match && constants_ok &&
               rep.spectral.pass && rep.ode_residual <= 1e-8;
    return rep;
}

}  // namespace hardyforge
