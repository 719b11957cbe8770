#pragma once

#include <string>
#include <vector>

#include "hardyforge/besselpair.hpp"
#include "hardyforge/spectral.hpp"

namespace hardyforge {

/// A scalar expectation checked against the synthesized weight. The expected
/// value is an expression in the entry parameters so overrides propagate.
struct ConstantCheck {
    enum class Kind { ScaledWeight, InfWV, Boundary };

    std::string label;
    Kind kind = Kind::ScaledWeight;
    std::string factor_src = "1";  // ScaledWeight: computed = W(at) * factor(at)
    double at = 1.0;
    std::string expected_src;
    double tol = 1e-10;
};

struct ResidualGrid {
    double a = 0.1;
    double b = 10.0;
    int n = 200;
};

struct CatalogEntry {
    std::string name;
    std::string var = "x";
    std::string h_src;
    std::string V_src;
    std::string W_src;  // closed form the synthesis must reproduce
    WeightPair wp;
    Expr expected_W;
    WeightClass expected_classification = WeightClass::Optimal;
    std::vector<ConstantCheck> constants;
    std::vector<Truncation> truncations;
    GridPolicy policy;
    FellerConfig feller;
    ResidualGrid residual;
    std::string notes;
};

const std::vector<CatalogEntry>& list_entries();

const CatalogEntry* find_entry(const std::string& name);

struct EntryReport {
    std::string name;
    ParamBindings params;
    double weight_deviation = 0.0;  // max relative pointwise deviation
    double deviation_at = 0.0;
    WeightClass classification = WeightClass::Indeterminate;
    WeightClass expected_classification = WeightClass::Indeterminate;
    bool classification_match = false;

    struct ConstantResult {
        std::string label;
        double expected = 0.0;
        double computed = 0.0;
        bool match = false;
    };
    std::vector<ConstantResult> constants;

    VerificationReport spectral;
    double ode_residual = 0.0;
    HardyReport hardy;
    bool pass = false;
};

/// Runs the full pipeline for one entry: weight synthesis against the closed
/// form, classification, constants, truncated spectral verification and the
/// ground-state ODE residual. Overrides rebind entry parameters.
EntryReport run_entry(const std::string& name, const ParamBindings& overrides = {});

}  // namespace hardyforge
