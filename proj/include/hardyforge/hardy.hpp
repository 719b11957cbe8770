#pragma once

#include <string>
#include <vector>

#include "hardyforge/calculus.hpp"
#include "hardyforge/feller.hpp"

namespace hardyforge {

/// A candidate pair (h, V) of strictly positive radial weights on dom.
struct WeightPair {
    Expr h;
    Expr V;
    Domain dom;
    ParamBindings params;
};

/// Grid construction policy for scans and infima: geometric clustering near
/// finite endpoints, truncation of infinite ones.
struct GridPolicy {
    int n = 512;
    double endpoint_offset_frac = 1e-6;  // closest point, as a fraction of span (or 1)
    double infinite_cutoff = 1e3;        // |x| truncation for infinite endpoints
};

std::vector<double> make_grid(const Domain& dom, const GridPolicy& policy);

struct Positivity {
    bool nonnegative = false;
    double min_margin = 0.0;   // valid when nonnegative
    double witness_x = 0.0;    // valid when !nonnegative
    double witness_value = 0.0;
    bool eval_error = false;
    std::string note;
};

enum class WeightClass { NoWeight, Critical, Optimal, Indeterminate };

const char* to_string(WeightClass c);

struct SpectralBounds {
    double lambda = 0.0;        // inf W*V over the grid
    double lambda_at = 0.0;
    double lambda_prime = 0.0;  // inf W over the grid
    double lambda_prime_at = 0.0;
};

struct HardyReport {
    Expr W;
    RecurrenceVerdict h_recurrence;
    RecurrenceVerdict V_recurrence;
    Positivity positivity;
    WeightClass classification = WeightClass::Indeterminate;
    IntegralVerdict optimality;
    SpectralBounds bounds;
    Expr boundary;
    std::string note;
};

/// W = J^d(h) - J^d(V), the synthesized Hardy weight.
Expr derive_weight(const WeightPair& wp);

Positivity positivity_scan(const Expr& W, const Domain& dom, int n, const ParamBindings& params,
                           const GridPolicy& policy = {});

/// Classifies the optimality integral of h*W*t^{d-1} over dom: Divergent if
/// either endpoint diverges, Convergent if both converge with finite total.
IntegralVerdict optimality_test(const WeightPair& wp, const Expr& W, const FellerConfig& cfg);

/// Radial boundary correction density B = (1/2)(h'/h * V - V').
Expr boundary_density(const WeightPair& wp);

SpectralBounds spectral_lower_bounds(const Expr& W, const Expr& V, const Domain& dom, int n,
                                     const ParamBindings& params, const GridPolicy& policy = {});

/// q(X) = a X^2 + b X + c on (0,1), with axis and discriminant.
struct QuadraticForm {
    double a = 0.0, b = 0.0, c = 0.0;
    double axis() const { return a != 0.0 ? -b / (2.0 * a) : 0.0; }
    double discriminant() const { return b * b - 4.0 * a * c; }
};

enum class QuadPositivity { PositiveOn01, NotPositive, Boundary };

QuadPositivity quadratic_positivity(const QuadraticForm& q);

/// Full certificate chain: V-form recurrence (NoWeight gate), h-form
/// recurrence, weight positivity, optimality integral, spectral bounds and
/// boundary density. Any Indeterminate sub-verdict degrades the class.
HardyReport classify(const WeightPair& wp, const FellerConfig& cfg, const GridPolicy& policy = {});

}  // namespace hardyforge
