#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "hardyforge/expr.hpp"

namespace hardyforge {

/// Open interval (l, r) with effective dimension d. Endpoints may be
/// infinite. For d > 1 the measure weight t^{d-1} requires l >= 0.
struct Domain {
    double l = 0.0;
    double r = 1.0;
    double d = 1.0;

    bool left_finite() const;
    bool right_finite() const;
    void validate() const;  // throws std::invalid_argument
};

struct FellerConfig {
    // Base point c in (l, r); NaN selects the default (midpoint of a finite
    // interval, max(1, l+1) when r is infinite).
    double base_point = std::numeric_limits<double>::quiet_NaN();
    double ladder_factor = 4.0;
    int shells = 24;
    double quad_tol = 1e-10;
    double divergence_magnitude_threshold = 1e6;
    double tail_decay_ratio = 0.9;
};

enum class RateTag { Power, Log, Unclassified };

struct IntegralVerdict {
    enum class Kind { Convergent, Divergent, Indeterminate };
    Kind kind = Kind::Indeterminate;
    double value = std::numeric_limits<double>::quiet_NaN();  // Convergent only
    RateTag rate = RateTag::Unclassified;                     // Divergent only
    double rate_exponent = 0.0;                               // Power rate
    // (shell endpoint, partial integral) per completed shell.
    std::vector<std::pair<double, double>> evidence;
    std::string note;

    bool divergent() const { return kind == Kind::Divergent; }
    bool convergent() const { return kind == Kind::Convergent; }
};

struct RecurrenceVerdict {
    IntegralVerdict left;
    IntegralVerdict right;
    enum class Recurrent { Yes, No, Indeterminate };
    Recurrent recurrent = Recurrent::Indeterminate;
};

enum class Endpoint { Left, Right };

double default_base_point(const Domain& dom);

/// 1/(h(t) t^{d-1}); plain 1/h(t) when d = 1.
Expr scale_integrand(const Expr& h, double d);

/// Integrates f over a geometric shell ladder approaching the endpoint and
/// classifies divergence of the improper integral from the evidence.
IntegralVerdict classify_endpoint_integral(const Expr& f, Endpoint ep, const Domain& dom,
                                           const FellerConfig& cfg,
                                           const ParamBindings& params = {});

/// Feller's test: the h-weighted form is recurrent iff the scale integral
/// diverges at both endpoints.
RecurrenceVerdict recurrence_test(const Expr& h, const Domain& dom, const FellerConfig& cfg,
                                  const ParamBindings& params = {});

/// Adaptive composite Simpson quadrature; throws EvalError on non-finite
/// integrand values. Exposed for reuse and testing.
double adaptive_simpson(const Expr& f, double a, double b, double tol,
                        const ParamBindings& params);

}  // namespace hardyforge
