#include "hardyforge/hardy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hardyforge {

const char* to_string(WeightClass c) {
    switch (c) {
        case WeightClass::NoWeight: return "no-weight";
        case WeightClass::Critical: return "critical";
        case WeightClass::Optimal: return "optimal";
        case WeightClass::Indeterminate: return "indeterminate";
    }
    return "?";
}

std::vector<double> make_grid(const Domain& dom, const GridPolicy& policy) {
    dom.validate();
    double a = dom.left_finite() ? dom.l : -policy.infinite_cutoff;
    double b = dom.right_finite() ? dom.r : policy.infinite_cutoff;
    if (!(a < b)) throw std::invalid_argument("empty truncated domain");
    double span = b - a;
    double offset = policy.endpoint_offset_frac * (dom.left_finite() && dom.right_finite()
                                                       ? span
                                                       : std::max(1.0, std::fabs(a)));
    int cluster = std::max(8, policy.n / 4);
    int uniform = std::max(8, policy.n / 2);

    std::vector<double> grid;
    grid.reserve(2 * cluster + uniform + 1);

    auto add_cluster = [&](double endpoint, int dir) {
        double far = span / 4.0;
        double ratio = std::pow(far / offset, 1.0 / (cluster - 1));
        double dist = offset;
        for (int i = 0; i < cluster; ++i) {
            grid.push_back(endpoint + dir * dist);
            dist *= ratio;
        }
    };
    if (dom.left_finite()) add_cluster(a, +1);
    if (dom.right_finite()) add_cluster(b, -1);

    double u0 = dom.left_finite() ? a + span / 4.0 : a;
    double u1 = dom.right_finite() ? b - span / 4.0 : b;
    if (!dom.left_finite() && !dom.right_finite()) {
        u0 = a;
        u1 = b;
    }
    for (int i = 0; i <= uniform; ++i)
        grid.push_back(u0 + (u1 - u0) * i / uniform);
    grid.push_back(0.5 * (a + b));  // exact midpoint, a common minimizer

    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    std::erase_if(grid, [&](double x) { return !(x > dom.l && x < dom.r); });
    return grid;
}

Expr derive_weight(const WeightPair& wp) {
    return (j_op(wp.h, wp.dom.d) - j_op(wp.V, wp.dom.d)).simplified();
}

Positivity positivity_scan(const Expr& W, const Domain& dom, int n, const ParamBindings& params,
                           const GridPolicy& policy) {
    if (n < 64) throw std::invalid_argument("positivity scan requires n >= 64");
    GridPolicy p = policy;
    p.n = n;
    Positivity out;
    double min_margin = std::numeric_limits<double>::infinity();
    for (double x : make_grid(dom, p)) {
        double v;
        try {
            v = W.eval(x, params);
        } catch (const EvalError& e) {
            out.eval_error = true;
            out.note = std::string("evaluation error at x = ") + std::to_string(x) + ": " +
                       e.what();
            return out;
        }
        if (v < 0.0) {
            out.nonnegative = false;
            out.witness_x = x;
            out.witness_value = v;
            return out;
        }
        min_margin = std::min(min_margin, v);
    }
    out.nonnegative = true;
    out.min_margin = min_margin;
    return out;
}

IntegralVerdict optimality_test(const WeightPair& wp, const Expr& W, const FellerConfig& cfg) {
    Expr integrand = wp.h * W;
    if (wp.dom.d != 1.0)
        integrand = integrand * Expr::pow(Expr::variable(), Expr::constant(wp.dom.d - 1.0));
    integrand = integrand.simplified();
    IntegralVerdict left =
        classify_endpoint_integral(integrand, Endpoint::Left, wp.dom, cfg, wp.params);
    IntegralVerdict right =
        classify_endpoint_integral(integrand, Endpoint::Right, wp.dom, cfg, wp.params);
    if (left.divergent()) {
        left.note = "diverges at left endpoint";
        return left;
    }
    if (right.divergent()) {
        right.note = "diverges at right endpoint";
        return right;
    }
    IntegralVerdict out;
    out.evidence = left.evidence;
    out.evidence.insert(out.evidence.end(), right.evidence.begin(), right.evidence.end());
    if (left.convergent() && right.convergent()) {
        out.kind = IntegralVerdict::Kind::Convergent;
        out.value = left.value + right.value;
    } else {
        out.kind = IntegralVerdict::Kind::Indeterminate;
        out.note = !left.note.empty() ? left.note : right.note;
    }
    return out;
}

Expr boundary_density(const WeightPair& wp) {
    Expr dh = wp.h.derivative();
    Expr dV = wp.V.derivative();
    return (Expr::constant(0.5) * ((dh / wp.h) * wp.V - dV)).simplified();
}

SpectralBounds spectral_lower_bounds(const Expr& W, const Expr& V, const Domain& dom, int n,
                                     const ParamBindings& params, const GridPolicy& policy) {
    if (n < 64) throw std::invalid_argument("spectral bounds require n >= 64");
    GridPolicy p = policy;
    p.n = n;
    SpectralBounds out;
    double best_wv = std::numeric_limits<double>::infinity();
    double best_w = std::numeric_limits<double>::infinity();
    for (double x : make_grid(dom, p)) {
        double w = W.eval(x, params);
        double wv = w * V.eval(x, params);
        if (wv < best_wv) {
            best_wv = wv;
            out.lambda_at = x;
        }
        if (w < best_w) {
            best_w = w;
            out.lambda_prime_at = x;
        }
    }
    out.lambda = best_wv;
    out.lambda_prime = best_w;
    return out;
}

QuadPositivity quadratic_positivity(const QuadraticForm& q) {
    double q0 = q.c;
    double q1 = q.a + q.b + q.c;
    double min01 = std::min(q0, q1);
    if (q.a > 0.0) {
        double A = q.axis();
        if (A > 0.0 && A < 1.0) min01 = std::min(min01, -q.discriminant() / (4.0 * q.a));
    } else if (q.a < 0.0) {
        // concave: minimum sits at an endpoint, nothing more to check
    }
    if (min01 > 0.0) return QuadPositivity::PositiveOn01;
    if (min01 == 0.0) return QuadPositivity::Boundary;
    return QuadPositivity::NotPositive;
}

HardyReport classify(const WeightPair& wp, const FellerConfig& cfg, const GridPolicy& policy) {
    wp.dom.validate();
    HardyReport rep;
    rep.boundary = boundary_density(wp);

    // (1) If the V-form itself is recurrent there is nothing to gain.
    rep.V_recurrence = recurrence_test(wp.V, wp.dom, cfg, wp.params);
    if (rep.V_recurrence.recurrent == RecurrenceVerdict::Recurrent::Yes) {
        rep.classification = WeightClass::NoWeight;
        rep.note = "the V-weighted form is recurrent; no Hardy weight exists";
        return rep;
    }

    // (2) Recurrence of the h-form is the precondition for criticality.
    rep.h_recurrence = recurrence_test(wp.h, wp.dom, cfg, wp.params);
    rep.W = derive_weight(wp);
    if (rep.h_recurrence.recurrent != RecurrenceVerdict::Recurrent::Yes) {
        rep.classification = WeightClass::Indeterminate;
        rep.note = rep.h_recurrence.recurrent == RecurrenceVerdict::Recurrent::No
                       ? "the h-weighted form is not recurrent"
                       : "h-form recurrence is indeterminate";
        return rep;
    }

    // (3) The derived weight must be non-negative.
    rep.positivity = positivity_scan(rep.W, wp.dom, policy.n, wp.params, policy);
    if (rep.positivity.eval_error) {
        rep.classification = WeightClass::Indeterminate;
        rep.note = rep.positivity.note;
        return rep;
    }
    if (!rep.positivity.nonnegative) {
        rep.classification = WeightClass::Indeterminate;
        rep.note = "derived weight is negative at x = " + std::to_string(rep.positivity.witness_x);
        return rep;
    }

    // (4) Optimality: divergence of the hW integral.
    rep.optimality = optimality_test(wp, rep.W, cfg);
    switch (rep.optimality.kind) {
        case IntegralVerdict::Kind::Divergent:
            rep.classification = WeightClass::Optimal;
            break;
        case IntegralVerdict::Kind::Convergent:
            rep.classification = WeightClass::Critical;
            break;
        case IntegralVerdict::Kind::Indeterminate:
            rep.classification = WeightClass::Indeterminate;
            rep.note = "optimality integral indeterminate";
            break;
    }

    try {
        rep.bounds = spectral_lower_bounds(rep.W, wp.V, wp.dom, policy.n, wp.params, policy);
    } catch (const EvalError& e) {
        rep.note += std::string(rep.note.empty() ? "" : "; ") +
                    "spectral bounds unavailable: " + e.what();
    }
    return rep;
}

}  // namespace hardyforge
