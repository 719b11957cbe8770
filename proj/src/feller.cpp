#include "hardyforge/feller.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hardyforge {

bool Domain::left_finite() const { return std::isfinite(l); }
bool Domain::right_finite() const { return std::isfinite(r); }

void Domain::validate() const {
    if (!(l < r)) throw std::invalid_argument("domain requires l < r");
    if (d < 1.0) throw std::invalid_argument("domain requires d >= 1");
    if (d > 1.0 && l < 0.0)
        throw std::invalid_argument("radial measure t^{d-1} requires l >= 0 when d > 1");
}

double default_base_point(const Domain& dom) {
    if (dom.left_finite() && dom.right_finite()) return 0.5 * (dom.l + dom.r);
    if (dom.left_finite()) return std::max(1.0, dom.l + 1.0);
    if (dom.right_finite()) return std::min(-1.0, dom.r - 1.0);
    return 0.0;
}

Expr scale_integrand(const Expr& h, double d) {
    if (d == 1.0) return (Expr::constant(1.0) / h).simplified();
    Expr vol = Expr::pow(Expr::variable(), Expr::constant(d - 1.0));
    return (Expr::constant(1.0) / (h * vol)).simplified();
}

namespace {

double simpson(double fa, double fm, double fb, double h) {
    return (fa + 4.0 * fm + fb) * h / 6.0;
}

double simpson_rec(const Expr& f, const ParamBindings& p, double a, double m, double b,
                   double fa, double fm, double fb, double whole, double tol, int depth) {
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f.eval(lm, p), frm = f.eval(rm, p);
    double left = simpson(fa, flm, fm, m - a);
    double right = simpson(fm, frm, fb, b - m);
    double err = left + right - whole;
    if (depth <= 0 || std::fabs(err) <= 15.0 * tol)
        return left + right + err / 15.0;  // Richardson
    return simpson_rec(f, p, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, p, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const Expr& f, double a, double b, double tol,
                        const ParamBindings& params) {
    if (a == b) return 0.0;
    double m = 0.5 * (a + b);
    double fa = f.eval(a, params), fm = f.eval(m, params), fb = f.eval(b, params);
    double whole = simpson(fa, fm, fb, b - a);
    double scaled_tol = tol * std::max(1.0, std::fabs(whole));
    return simpson_rec(f, params, a, m, b, fa, fm, fb, whole, scaled_tol, 24);
}

namespace {

// Least-squares slope of log|increment| against log(shell scale).
double increment_slope(const std::vector<double>& scales, const std::vector<double>& incs) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < incs.size(); ++i) {
        if (incs[i] <= 0.0) continue;
        double lx = std::log(scales[i]), ly = std::log(incs[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n < 2) return 0.0;
    double denom = n * sxx - sx * sx;
    if (denom == 0.0) return 0.0;
    return (n * sxy - sx * sy) / denom;
}

RateTag tag_from_slope(double slope) {
    return std::fabs(slope) <= 0.05 ? RateTag::Log : RateTag::Power;
}

IntegralVerdict classify_from_evidence(const std::vector<double>& scales,
                                       const std::vector<double>& incs, double total,
                                       const FellerConfig& cfg, bool ladder_complete,
                                       std::string note) {
    IntegralVerdict v;
    v.note = std::move(note);
    double running = 0.0;
    for (std::size_t i = 0; i < incs.size(); ++i) {
        running += incs[i];
        v.evidence.emplace_back(scales[i], running);
    }
    if (incs.size() < 3) {
        v.kind = IntegralVerdict::Kind::Indeterminate;
        if (v.note.empty()) v.note = "insufficient shell evidence";
        return v;
    }
    if (total > cfg.divergence_magnitude_threshold) {
        v.kind = IntegralVerdict::Kind::Divergent;
        double slope = increment_slope(scales, incs);
        v.rate = tag_from_slope(slope);
        v.rate_exponent = slope;
        return v;
    }

    std::size_t window = std::min<std::size_t>(8, incs.size() - 1);
    std::vector<double> ratios;
    bool zero_tail = true;
    for (std::size_t i = incs.size() - window; i < incs.size(); ++i) {
        double prev = incs[i - 1];
        if (prev > 0.0) zero_tail = false;
        ratios.push_back(prev > 0.0 ? incs[i] / prev : 0.0);
    }
    if (zero_tail || incs.back() <= 1e-300 * std::max(1.0, total)) {
        v.kind = IntegralVerdict::Kind::Convergent;
        v.value = total;
        return v;
    }

    double rmax = *std::max_element(ratios.begin(), ratios.end());
    double rlast = ratios.back();

    if (rmax <= cfg.tail_decay_ratio) {
        // Geometric decay; extrapolate the remaining tail.
        v.kind = IntegralVerdict::Kind::Convergent;
        double tail = ladder_complete && rlast < 1.0 ? incs.back() * rlast / (1.0 - rlast) : 0.0;
        v.value = total + tail;
        return v;
    }
    // The divergence test only trusts the settled tail of the ladder; early
    // shells may still carry transients from the base point.
    std::size_t dwin = std::min<std::size_t>(4, ratios.size());
    double rmin_tail = *std::min_element(ratios.end() - dwin, ratios.end());
    if (rmin_tail >= 1.0 - 1e-3) {
        v.kind = IntegralVerdict::Kind::Divergent;
        double slope = increment_slope(scales, incs);
        v.rate = tag_from_slope(slope);
        v.rate_exponent = slope;
        return v;
    }
    // Increment ratios climbing toward 1 signal slow (logarithmic-family)
    // divergence. Estimate the effective decay exponent q from I_k ~ k^{-q};
    // the borderline is q = 1 (harmonic), and we only claim divergence with
    // a clear margin below the convergent side.
    bool climbing = rlast > cfg.tail_decay_ratio;
    for (std::size_t i = 1; i < ratios.size() && climbing; ++i)
        if (ratios[i] < ratios[i - 1] - 1e-3) climbing = false;
    if (climbing && rlast < 1.0) {
        double k = static_cast<double>(incs.size() - 1);
        double q = std::log(rlast) / std::log(k / (k + 1.0));
        if (q <= 1.5) {
            v.kind = IntegralVerdict::Kind::Divergent;
            double slope = increment_slope(scales, incs);
            v.rate = tag_from_slope(slope);
            v.rate_exponent = slope;
            return v;
        }
    }
    v.kind = IntegralVerdict::Kind::Indeterminate;
    if (v.note.empty()) v.note = "shell increments neither clearly decaying nor clearly divergent";
    return v;
}

}  // namespace

IntegralVerdict classify_endpoint_integral(const Expr& f, Endpoint ep, const Domain& dom,
                                           const FellerConfig& cfg,
                                           const ParamBindings& params) {
    dom.validate();
    double c = std::isnan(cfg.base_point) ? default_base_point(dom) : cfg.base_point;
    if (!(c > dom.l && c < dom.r))
        throw std::invalid_argument("base point must be strictly interior");

    double target = ep == Endpoint::Left ? dom.l : dom.r;
    bool finite = std::isfinite(target);
    double lambda = cfg.ladder_factor;

    // Shell boundaries x_0 = c, x_1, ... approaching the endpoint.
    std::vector<double> bounds{c};
    if (finite) {
        double dist = std::fabs(c - target);
        for (int k = 1; k <= cfg.shells; ++k) {
            dist /= lambda;
            bounds.push_back(ep == Endpoint::Left ? target + dist : target - dist);
        }
    } else {
        double mag = std::max(1.0, std::fabs(c));
        for (int k = 1; k <= cfg.shells; ++k) {
            mag *= lambda;
            bounds.push_back(ep == Endpoint::Left ? -mag : mag);
        }
    }

    std::vector<double> scales;  // shell scale used for rate fitting
    std::vector<double> incs;
    double total = 0.0;
    bool failed = false;
    std::string note;
    for (int k = 0; k + 1 < static_cast<int>(bounds.size()); ++k) {
        double a = bounds[k], b = bounds[k + 1];
        double inc;
        try {
            inc = std::fabs(adaptive_simpson(f, std::min(a, b), std::max(a, b), cfg.quad_tol,
                                             params));
        } catch (const EvalError& e) {
            failed = true;
            note = std::string("quadrature failure in shell ") + std::to_string(k) + ": " +
                   e.what();
            break;
        }
        total += inc;
        scales.push_back(finite ? std::fabs(bounds[k + 1] - target) : std::fabs(bounds[k + 1]));
        incs.push_back(inc);
        if (total > cfg.divergence_magnitude_threshold) break;  // already divergent
    }

    IntegralVerdict v = classify_from_evidence(scales, incs, total, cfg,
                                               static_cast<int>(incs.size()) == cfg.shells,
                                               note);
    if (failed && v.kind != IntegralVerdict::Kind::Divergent) {
        // Not enough clean evidence before the failure; stay honest.
        v.kind = IntegralVerdict::Kind::Indeterminate;
        v.value = std::numeric_limits<double>::quiet_NaN();
        v.note = note;
    }
    return v;
}

RecurrenceVerdict recurrence_test(const Expr& h, const Domain& dom, const FellerConfig& cfg,
                                  const ParamBindings& params) {
    Expr f = scale_integrand(h, dom.d);
    RecurrenceVerdict rv;
    rv.left = classify_endpoint_integral(f, Endpoint::Left, dom, cfg, params);
    rv.right = classify_endpoint_integral(f, Endpoint::Right, dom, cfg, params);
    if (rv.left.divergent() && rv.right.divergent())
        rv.recurrent = RecurrenceVerdict::Recurrent::Yes;
    else if (rv.left.convergent() || rv.right.convergent())
        rv.recurrent = RecurrenceVerdict::Recurrent::No;
    else
        rv.recurrent = RecurrenceVerdict::Recurrent::Indeterminate;
    return rv;
}

}  // namespace hardyforge
