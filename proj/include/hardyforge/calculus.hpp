#pragma once

#include <span>

#include "hardyforge/expr.hpp"

namespace hardyforge {

/// J^d(phi) = (1/4)(phi'/phi)^2 - (1/2)(phi''/phi) - ((d-1)/(2x))(phi'/phi),
/// the radial second-order operator behind every derived weight. d may be
/// any real >= 1; d = 1 drops the drift term.
Expr j_op(const Expr& phi, double d);

/// Radial reduction of I(phi); identical to j_op by construction.
Expr i_radial(const Expr& phi, double d);

/// Max over the grid of |J^d(phi psi) - [J^d(phi) + J^d(psi) - (1/2)(phi'/phi)(psi'/psi)]|.
double product_rule_residual(const Expr& phi, const Expr& psi, double d,
                             std::span<const double> grid, const ParamBindings& params = {});

/// Max over the grid of |(J^d(h) - J^d(V)) - (J^1(h x^{d-1}) - J^1(V x^{d-1}))|.
double dimension_shift_residual(const Expr& h, const Expr& V, double d,
                                std::span<const double> grid, const ParamBindings& params = {});

}  // namespace hardyforge
