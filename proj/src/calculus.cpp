#include "hardyforge/calculus.hpp"

#include <cmath>

namespace hardyforge {

Expr j_op(const Expr& phi, double d) {
    Expr p = phi.simplified();
    Expr dp = p.derivative();
    Expr ddp = dp.derivative();
    Expr ratio = dp / p;
    Expr result = Expr::constant(0.25) * ratio * ratio - Expr::constant(0.5) * (ddp / p);
    if (d != 1.0) {
        Expr x = Expr::variable();
        result = result - (Expr::constant((d - 1.0) / 2.0) / x) * ratio;
    }
    return result.simplified();
}

Expr i_radial(const Expr& phi, double d) { return j_op(phi, d); }

double product_rule_residual(const Expr& phi, const Expr& psi, double d,
                             std::span<const double> grid, const ParamBindings& params) {
    Expr lhs = j_op(phi * psi, d);
    Expr cross = Expr::constant(0.5) * (phi.derivative() / phi) * (psi.derivative() / psi);
    Expr rhs = (j_op(phi, d) + j_op(psi, d) - cross).simplified();
    double worst = 0.0;
    for (double x : grid)
        worst = std::max(worst, std::fabs(lhs.eval(x, params) - rhs.eval(x, params)));
    return worst;
}

double dimension_shift_residual(const Expr& h, const Expr& V, double d,
                                std::span<const double> grid, const ParamBindings& params) {
    Expr x = Expr::variable();
    Expr vol = Expr::pow(x, Expr::constant(d - 1.0));
    Expr lhs = (j_op(h, d) - j_op(V, d)).simplified();
    Expr rhs = (j_op(h * vol, 1.0) - j_op(V * vol, 1.0)).simplified();
    double worst = 0.0;
    for (double t : grid)
        worst = std::max(worst, std::fabs(lhs.eval(t, params) - rhs.eval(t, params)));
    return worst;
}

}  // namespace hardyforge
