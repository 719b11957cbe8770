#include "hardyforge/besselpair.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hardyforge {

void OdeProblem::validate() const {
    if (!(a < b)) throw std::invalid_argument("empty integration interval");
    if (!(step > 0.0)) throw std::invalid_argument("step must be positive");
    double x0_ = initial_point();
    if (!(x0_ >= a && x0_ <= b))
        throw std::invalid_argument("initial point outside the interval");
}

double OdeProblem::initial_point() const {
    if (std::isfinite(x0)) return x0;
    return a > 0.0 ? std::sqrt(a * b) : 0.5 * (a + b);
}

Expr ground_state(const WeightPair& wp) {
    return Expr::pow(wp.h / wp.V, Expr::constant(0.5)).simplified();
}

double ode_residual(const Expr& u, const Expr& V, const Expr& W, double d,
                    std::span<const double> grid, const ParamBindings& params) {
    Expr du = u.derivative();
    Expr ddu = du.derivative();
    Expr dV = V.derivative();
    Expr drift = dV / V;
    if (d != 1.0) drift = drift + Expr::constant(d - 1.0) / Expr::variable();
    Expr residual = (ddu + drift * du + W * u).simplified();
    double worst = 0.0;
    for (double x : grid) worst = std::max(worst, std::fabs(residual.eval(x, params)));
    return worst;
}

namespace {

struct Rhs {
    const Expr& drift;
    const Expr& W;
    const ParamBindings& params;

    // state (u, v) with v = u'; returns (v, -drift v - W u)
    std::pair<double, double> operator()(double x, double u, double v) const {
        double q = drift.eval(x, params);
        double w = W.eval(x, params);
        return {v, -q * v - w * u};
    }
};

bool rk4_step(const Rhs& f, double& x, double& u, double& v, double h) {
    auto [k1u, k1v] = f(x, u, v);
    auto [k2u, k2v] = f(x + 0.5 * h, u + 0.5 * h * k1u, v + 0.5 * h * k1v);
    auto [k3u, k3v] = f(x + 0.5 * h, u + 0.5 * h * k2u, v + 0.5 * h * k2v);
    auto [k4u, k4v] = f(x + h, u + h * k3u, v + h * k3v);
    double nu = u + h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
    double nv = v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    if (!std::isfinite(nu) || !std::isfinite(nv)) return false;
    x += h;
    u = nu;
    v = nv;
    return true;
}

void integrate_direction(const Rhs& f, const OdeProblem& p, double target, int dir,
                         std::vector<OdeSolution::Sample>& out, bool& blew_up) {
    double x = p.initial_point();
    double u = p.u0;
    double v = p.du0;
    double h = dir * p.step;
    while (dir * (target - x) > 1e-15 * std::max(1.0, std::fabs(target))) {
        double remain = target - x;
        double hstep = dir * std::min(std::fabs(h), std::fabs(remain));
        double xt = x, ut = u, vt = v;
        bool ok;
        try {
            ok = rk4_step(f, xt, ut, vt, hstep);
        } catch (const EvalError&) {
            return;  // hit an endpoint singularity: keep what we have
        }
        if (ok) {
            double rel_u = std::fabs(ut - u) / std::max(1e-30, std::fabs(u));
            double rel_v = std::fabs(vt - v) / std::max(1e-30, std::fabs(v));
            if ((rel_u > 0.1 || rel_v > 0.1) && std::fabs(hstep) > 1e-12) {
                h = 0.5 * hstep;
                continue;
            }
        } else {
            if (std::fabs(hstep) > 1e-12) {
                h = 0.5 * hstep;
                continue;
            }
            blew_up = true;
            return;
        }
        x = xt;
        u = ut;
        v = vt;
        out.push_back({x, u, v});
        if (std::fabs(u) > 1e12 || std::fabs(v) > 1e12) {
            blew_up = true;
            return;
        }
        if (std::fabs(h) < p.step) h *= 2.0;  // recover after transient stiffness
    }
}

}  // namespace

OdeSolution shoot(const OdeProblem& problem) {
    problem.validate();
    Expr drift = (problem.V.derivative() / problem.V).simplified();
    if (problem.d != 1.0)
        drift = (drift + Expr::constant(problem.d - 1.0) / Expr::variable()).simplified();
    Rhs f{drift, problem.W, problem.params};

    OdeSolution sol;
    std::vector<OdeSolution::Sample> fwd, bwd;
    bool blew = false;
    integrate_direction(f, problem, problem.b, +1, fwd, blew);
    integrate_direction(f, problem, problem.a, -1, bwd, blew);
    sol.blew_up = blew;

    std::reverse(bwd.begin(), bwd.end());
    sol.samples = std::move(bwd);
    sol.samples.push_back({problem.initial_point(), problem.u0, problem.du0});
    sol.samples.insert(sol.samples.end(), fwd.begin(), fwd.end());

    double min_u = std::numeric_limits<double>::infinity();
    for (const auto& s : sol.samples) min_u = std::min(min_u, s.u);
    sol.min_value = min_u;
    sol.positive = min_u > 0.0;
    return sol;
}

}  // namespace hardyforge
