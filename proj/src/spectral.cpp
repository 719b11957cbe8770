#include "hardyforge/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hardyforge {

void SturmLiouvilleProblem::validate() const {
    dom.validate();
    if (!(a > dom.l && b < dom.r && a < b))
        throw std::invalid_argument("truncation must lie strictly inside the domain");
    if (n < 16) throw std::invalid_argument("grid size must be >= 16");
    if (log_mapped && !(a > 0.0))
        throw std::invalid_argument("log-mapped grids require a positive interval");
}

namespace {

double radial_volume(double t, double d) { return d == 1.0 ? 1.0 : std::pow(t, d - 1.0); }

double check(double v, const char* what) {
    if (!std::isfinite(v)) throw EvalError(std::string("non-finite coefficient in ") + what);
    return v;
}

}  // namespace

Assembled assemble(const SturmLiouvilleProblem& problem, const Expr& V, const Expr& W,
                   const ParamBindings& params) {
    problem.validate();
    const int n = problem.n;
    const double d = problem.dom.d;

    // With s the computational coordinate and x = phi(s), the quotient
    // int u'^2 p dx / int u^2 m dx becomes int (du/ds)^2 (p/phi') ds over
    // int u^2 (m phi') ds. The identity map keeps phi' = 1.
    auto to_x = [&](double s) { return problem.log_mapped ? std::exp(s) : s; };
    auto jac = [&](double s) { return problem.log_mapped ? std::exp(s) : 1.0; };
    double sa = problem.log_mapped ? std::log(problem.a) : problem.a;
    double sb = problem.log_mapped ? std::log(problem.b) : problem.b;
    double ds = (sb - sa) / (n + 1);

    auto stiff_w = [&](double s) {
        double x = to_x(s);
        return check(V.eval(x, params) * radial_volume(x, d) / jac(s), "stiffness");
    };
    auto mass_w = [&](double s) {
        double x = to_x(s);
        double m = radial_volume(x, d) * jac(s);
        if (problem.mass != MassKind::Lebesgue) m *= V.eval(x, params);
        if (problem.mass == MassKind::Hardy) m *= W.eval(x, params);
        return check(m, "mass");
    };

    Assembled sys;
    sys.diag.resize(n);
    sys.off.resize(n - 1);
    sys.mass.resize(n);
    sys.grid.resize(n);

    std::vector<double> p_mid(n + 1);
    for (int i = 0; i <= n; ++i) p_mid[i] = stiff_w(sa + ds * (i + 0.5));
    for (int i = 0; i < n; ++i) {
        double s = sa + ds * (i + 1);
        sys.grid[i] = to_x(s);
        sys.diag[i] = (p_mid[i] + p_mid[i + 1]) / ds;
        if (i + 1 < n) sys.off[i] = -p_mid[i + 1] / ds;
        double m = mass_w(s) * ds;
        if (m < 0.0) throw EvalError("negative mass weight at a node");
        sys.mass[i] = m;
    }
    return sys;
}

int inertia_count(const Assembled& sys, double sigma) {
    const std::size_t n = sys.diag.size();
    int count = 0;
    double prev = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        double di = sys.diag[i] - sigma * sys.mass[i];
        if (i > 0) {
            double b = sys.off[i - 1];
            di -= b * b / prev;
        }
        if (di == 0.0) di = -1e-300;  // graze: count as a crossing
        if (di < 0.0) ++count;
        prev = di;
    }
    return count;
}

double eigenvalue_k(const Assembled& sys, int k) {
    if (k < 1) throw std::invalid_argument("eigenvalue index starts at 1");
    // Bracket: Gershgorin-style upper bound for generalized eigenvalues.
    double hi = 1.0;
    double min_mass = std::numeric_limits<double>::infinity();
    for (double m : sys.mass)
        if (m > 0.0) min_mass = std::min(min_mass, m);
    if (!std::isfinite(min_mass)) throw std::invalid_argument("mass is identically zero");
    for (std::size_t i = 0; i < sys.diag.size(); ++i) {
        double row = std::fabs(sys.diag[i]);
        if (i > 0) row += std::fabs(sys.off[i - 1]);
        if (i + 1 < sys.diag.size()) row += std::fabs(sys.off[i]);
        hi = std::max(hi, row / min_mass);
    }
    double lo = -hi;
    while (inertia_count(sys, hi) < k) hi *= 2.0;
    for (int iter = 0; iter < 200; ++iter) {
        double mid = 0.5 * (lo + hi);
        if (inertia_count(sys, mid) >= k)
            hi = mid;
        else
            lo = mid;
        if (hi - lo <= 1e-10 * std::max(1.0, std::fabs(hi))) break;
    }
    return 0.5 * (lo + hi);
}

namespace {

// Inverse iteration with a tridiagonal LU solve (partial pivoting).
std::vector<double> inverse_iteration(const Assembled& sys, double shift) {
    const std::size_t n = sys.diag.size();
    std::vector<double> v(n, 1.0);
    for (int attempt = 0; attempt < 5; ++attempt) {
        double sigma = shift * (1.0 + attempt * 1e-8) + attempt * 1e-14;
        std::vector<double> dl(n), dd(n), du(n), du2(n);
        for (std::size_t i = 0; i < n; ++i) {
            dd[i] = sys.diag[i] - sigma * sys.mass[i];
            if (i + 1 < n) {
                dl[i] = sys.off[i];
                du[i] = sys.off[i];
            }
        }
        bool ok = true;
        std::vector<int> piv(n, 0);
        // LU with partial pivoting for a tridiagonal matrix (a la dgttrf).
        for (std::size_t i = 0; i + 1 < n; ++i) {
            du2[i] = 0.0;
            if (std::fabs(dd[i]) >= std::fabs(dl[i])) {
                if (dd[i] == 0.0) { ok = false; break; }
                double f = dl[i] / dd[i];
                dl[i] = f;
                dd[i + 1] -= f * du[i];
            } else {
                double f = dd[i] / dl[i];
                dd[i] = dl[i];
                dl[i] = f;
                double tmp = du[i];
                du[i] = dd[i + 1];
                dd[i + 1] = tmp - f * dd[i + 1];
                if (i + 2 < n) {
                    du2[i] = du[i + 1];
                    du[i + 1] = -f * du[i + 1];
                }
                piv[i] = 1;
            }
        }
        if (!ok || dd[n - 1] == 0.0) continue;

        for (int sweep = 0; sweep < 4; ++sweep) {
            std::vector<double> y = v;
            // forward substitution with pivoting
            for (std::size_t i = 0; i + 1 < n; ++i) {
                if (piv[i]) std::swap(y[i], y[i + 1]);
                y[i + 1] -= dl[i] * y[i];
            }
            // back substitution
            y[n - 1] /= dd[n - 1];
            if (n >= 2) {
                y[n - 2] = (y[n - 2] - du[n - 2] * y[n - 1]) / dd[n - 2];
                for (std::ptrdiff_t i = static_cast<std::ptrdiff_t>(n) - 3; i >= 0; --i)
                    y[i] = (y[i] - du[i] * y[i + 1] - du2[i] * y[i + 2]) / dd[i];
            }
            double norm = 0.0;
            for (double t : y) norm = std::max(norm, std::fabs(t));
            if (!(norm > 0.0) || !std::isfinite(norm)) { ok = false; break; }
            for (double& t : y) t /= norm;
            v = std::move(y);
        }
        if (ok) break;
    }
    return v;
}

}  // namespace

SpectralResult min_rayleigh(const SturmLiouvilleProblem& problem, const Expr& V, const Expr& W,
                            const ParamBindings& params) {
    Assembled sys = assemble(problem, V, W, params);
    SpectralResult res;
    res.min_eigenvalue = eigenvalue_k(sys, 1);
    res.grid = sys.grid;
    res.eigenvector = inverse_iteration(sys, res.min_eigenvalue);
    // Normalize in the mass inner product.
    double mnorm = 0.0;
    for (std::size_t i = 0; i < res.eigenvector.size(); ++i)
        mnorm += sys.mass[i] * res.eigenvector[i] * res.eigenvector[i];
    if (mnorm > 0.0)
        for (double& t : res.eigenvector) t /= std::sqrt(mnorm);
    res.refinement_history.emplace_back(problem.n, res.min_eigenvalue);
    return res;
}

VerificationReport verify_inequality(const WeightPair& wp, const Expr& W,
                                     std::span<const Truncation> truncations) {
    VerificationReport rep;
    double prev = std::numeric_limits<double>::infinity();
    bool monotone = true;
    bool all_above = true;
    for (const Truncation& tr : truncations) {
        SturmLiouvilleProblem problem;
        problem.dom = wp.dom;
        problem.a = tr.a;
        problem.b = tr.b;
        problem.n = tr.n;
        problem.mass = MassKind::Hardy;
        problem.log_mapped = tr.log_mapped;
        Assembled sys;
        try {
            sys = assemble(problem, wp.V, W, wp.params);
        } catch (const EvalError& e) {
            rep.inconclusive = true;
            rep.note = e.what();
            return rep;
        }
        double total_mass = 0.0;
        for (double m : sys.mass) total_mass += m;
        if (total_mass <= 1e-300) {
            rep.vacuous = true;
            rep.levels.push_back({tr, std::numeric_limits<double>::infinity()});
            continue;
        }
        double q = eigenvalue_k(sys, 1);
        rep.levels.push_back({tr, q});
        if (q < 1.0 - 1e-6) all_above = false;
        if (q > prev + 1e-8) monotone = false;
        prev = q;
    }
    rep.pass = rep.vacuous || (all_above && monotone);
    if (rep.vacuous) rep.note = "vacuous: the weight vanishes on the truncation";
    return rep;
}

}  // namespace hardyforge
