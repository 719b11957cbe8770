#pragma once

#include <span>
#include <vector>

#include "hardyforge/hardy.hpp"

namespace hardyforge {

/// Initial-value setup for the radial equation
/// u'' + ((d-1)/x + V'/V) u' + W u = 0 on [a, b].
struct OdeProblem {
    Expr V;
    Expr W;
    double d = 1.0;
    double a = 0.0;
    double b = 1.0;
    double x0 = std::numeric_limits<double>::quiet_NaN();  // NaN: default midpoint
    double u0 = 1.0;
    double du0 = 0.0;
    double step = 1e-3;
    ParamBindings params;

    void validate() const;
    double initial_point() const;
};

struct OdeSolution {
    struct Sample {
        double x, u, du;
    };
    std::vector<Sample> samples;  // strictly increasing in x
    bool positive = false;
    double min_value = 0.0;
    bool blew_up = false;
};

/// sqrt(h/V), the positive solution seeding every derived weight.
Expr ground_state(const WeightPair& wp);

/// Max over the grid of |u'' + ((d-1)/x + V'/V) u' + W u| with all
/// derivatives taken symbolically.
double ode_residual(const Expr& u, const Expr& V, const Expr& W, double d,
                    std::span<const double> grid, const ParamBindings& params = {});

/// Classical fourth-order one-step integration from x0 outward to both ends,
/// halving the step whenever u or u' moves by more than 10% in one step.
/// Solutions exceeding 1e12 in magnitude are truncated and flagged.
OdeSolution shoot(const OdeProblem& problem);

}  // namespace hardyforge
