#pragma once

#include <span>
#include <vector>

#include "hardyforge/hardy.hpp"

namespace hardyforge {

enum class MassKind { Lebesgue, Weighted, Hardy };  // t^{d-1}, V t^{d-1}, W V t^{d-1}

/// Dirichlet-truncated discretization of the weighted Rayleigh quotient
/// on [a, b] strictly inside the domain.
struct SturmLiouvilleProblem {
    Domain dom;
    double a = 0.0;
    double b = 1.0;
    int n = 256;  // interior grid points
    MassKind mass = MassKind::Hardy;
    bool log_mapped = false;  // uniform grid in log x (positive intervals)

    void validate() const;
};

struct Assembled {
    std::vector<double> diag;  // stiffness tridiagonal
    std::vector<double> off;
    std::vector<double> mass;  // diagonal mass matrix
    std::vector<double> grid;  // interior nodes in the original coordinate
};

/// Second-order finite differences with Dirichlet conditions at both cutoffs;
/// stiffness from midpoint values of p = V t^{d-1}, mass from nodal values.
Assembled assemble(const SturmLiouvilleProblem& problem, const Expr& V, const Expr& W,
                   const ParamBindings& params);

/// Number of generalized eigenvalues of (K, M) strictly below sigma,
/// by the Sturm-sequence inertia count of K - sigma M.
int inertia_count(const Assembled& sys, double sigma);

/// k-th smallest generalized eigenvalue (k = 1 is the bottom), by bisection
/// on the inertia count to relative tolerance 1e-10.
double eigenvalue_k(const Assembled& sys, int k);

struct SpectralResult {
    double min_eigenvalue = 0.0;
    std::vector<double> eigenvector;
    std::vector<double> grid;
    std::vector<std::pair<int, double>> refinement_history;
};

SpectralResult min_rayleigh(const SturmLiouvilleProblem& problem, const Expr& V, const Expr& W,
                            const ParamBindings& params);

struct Truncation {
    double a = 0.0;
    double b = 1.0;
    int n = 256;
    bool log_mapped = false;
};

struct VerificationReport {
    struct Level {
        Truncation truncation;
        double quotient = 0.0;
    };
    std::vector<Level> levels;
    bool pass = false;
    bool vacuous = false;       // W essentially zero on the truncations
    bool inconclusive = false;
    std::string note;
};

/// Checks the discrete quotient against 1 for each truncation; PASS iff every
/// quotient >= 1 - 1e-6 and the sequence is non-increasing (1e-8 slack).
VerificationReport verify_inequality(const WeightPair& wp, const Expr& W,
                                     std::span<const Truncation> truncations);

}  // namespace hardyforge
