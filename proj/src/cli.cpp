#include "hardyforge/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <json.hpp>
#include <limits>

#include "hardyforge/catalog.hpp"

namespace hardyforge {

namespace {

using nlohmann::json;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitIndeterminate = 2;
constexpr int kExitUsage = 64;

double parse_endpoint(const std::string& s) {
    if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw CLI::ValidationError("interval", "bad endpoint: " + s);
    return v;
}

struct CommonFlags {
    std::string interval = "0:inf";
    double dim = 1.0;
    std::string var = "x";
    std::vector<std::string> param_flags;
    bool as_json = false;

    void attach(CLI::App* cmd, bool with_domain = true) {
        if (with_domain) {
            cmd->add_option("--interval", interval, "domain as l:r (inf accepted)");
            cmd->add_option("--dim", dim, "effective dimension d >= 1");
        }
        cmd->add_option("--var", var, "free variable name in expressions");
        cmd->add_option("--param", param_flags, "parameter binding name=value (repeatable)");
        cmd->add_flag("--json", as_json, "emit a JSON report");
    }

    Domain domain() const {
        auto colon = interval.find(':');
        if (colon == std::string::npos)
            throw CLI::ValidationError("interval", "expected l:r");
        Domain dom;
        dom.l = parse_endpoint(interval.substr(0, colon));
        dom.r = parse_endpoint(interval.substr(colon + 1));
        dom.d = dim;
        dom.validate();
        return dom;
    }

    ParamBindings params() const {
        ParamBindings out;
        for (const std::string& p : param_flags) {
            auto eq = p.find('=');
            if (eq == std::string::npos)
                throw CLI::ValidationError("param", "expected name=value: " + p);
            out[p.substr(0, eq)] = parse_endpoint(p.substr(eq + 1));
        }
        return out;
    }

    json params_json() const {
        json j = json::object();
        for (const auto& [k, v] : params()) j[k] = v;
        return j;
    }
};

json envelope(const std::string& command, json params, json result) {
    json j;
    j["schema"] = kJsonSchema;
    j["version"] = kCliVersion;
    j["command"] = command;
    j["params"] = std::move(params);
    j["result"] = std::move(result);
    return j;
}

const char* kind_name(IntegralVerdict::Kind k) {
    switch (k) {
        case IntegralVerdict::Kind::Convergent: return "convergent";
        case IntegralVerdict::Kind::Divergent: return "divergent";
        case IntegralVerdict::Kind::Indeterminate: return "indeterminate";
    }
    return "?";
}

const char* rate_name(RateTag t) {
    switch (t) {
        case RateTag::Power: return "power";
        case RateTag::Log: return "log";
        case RateTag::Unclassified: return "unclassified";
    }
    return "?";
}

const char* recurrent_name(RecurrenceVerdict::Recurrent r) {
    switch (r) {
        case RecurrenceVerdict::Recurrent::Yes: return "yes";
        case RecurrenceVerdict::Recurrent::No: return "no";
        case RecurrenceVerdict::Recurrent::Indeterminate: return "indeterminate";
    }
    return "?";
}

json verdict_json(const IntegralVerdict& v) {
    json j;
    j["kind"] = kind_name(v.kind);
    if (v.convergent()) j["value"] = v.value;
    if (v.divergent()) {
        j["rate"] = rate_name(v.rate);
        j["rate_exponent"] = v.rate_exponent;
    }
    json ev = json::array();
    for (const auto& [scale, partial] : v.evidence) ev.push_back({scale, partial});
    j["evidence"] = std::move(ev);
    if (!v.note.empty()) j["note"] = v.note;
    return j;
}

json recurrence_json(const RecurrenceVerdict& r) {
    json j;
    j["left"] = verdict_json(r.left);
    j["right"] = verdict_json(r.right);
    j["recurrent"] = recurrent_name(r.recurrent);
    return j;
}

json hardy_json(const HardyReport& rep) {
    json j;
    j["classification"] = to_string(rep.classification);
    j["weight"] = rep.W.render();
    j["boundary_density"] = rep.boundary.render();
    j["h_recurrence"] = recurrence_json(rep.h_recurrence);
    j["V_recurrence"] = recurrence_json(rep.V_recurrence);
    json pos;
    pos["nonnegative"] = rep.positivity.nonnegative;
    if (rep.positivity.nonnegative) {
        pos["min_margin"] = rep.positivity.min_margin;
    } else if (!rep.positivity.eval_error) {
        pos["witness_x"] = rep.positivity.witness_x;
        pos["witness_value"] = rep.positivity.witness_value;
    }
    if (rep.positivity.eval_error) pos["eval_error"] = rep.positivity.note;
    j["positivity"] = std::move(pos);
    j["optimality"] = verdict_json(rep.optimality);
    json b;
    b["lambda"] = rep.bounds.lambda;
    b["lambda_at"] = rep.bounds.lambda_at;
    b["lambda_prime"] = rep.bounds.lambda_prime;
    b["lambda_prime_at"] = rep.bounds.lambda_prime_at;
    j["spectral_bounds"] = std::move(b);
    if (!rep.note.empty()) j["note"] = rep.note;
    return j;
}

json spectral_json(const VerificationReport& rep) {
    json j;
    json levels = json::array();
    for (const auto& l : rep.levels) {
        json lev;
        lev["a"] = l.truncation.a;
        lev["b"] = l.truncation.b;
        lev["n"] = l.truncation.n;
        lev["log_mapped"] = l.truncation.log_mapped;
        lev["quotient"] = l.quotient;
        levels.push_back(std::move(lev));
    }
    j["levels"] = std::move(levels);
    j["pass"] = rep.pass;
    j["vacuous"] = rep.vacuous;
    j["inconclusive"] = rep.inconclusive;
    if (!rep.note.empty()) j["note"] = rep.note;
    return j;
}

json entry_json(const EntryReport& rep) {
    json j;
    j["name"] = rep.name;
    json params = json::object();
    for (const auto& [k, v] : rep.params) params[k] = v;
    j["params"] = std::move(params);
    j["weight_deviation"] = rep.weight_deviation;
    j["deviation_at"] = rep.deviation_at;
    j["classification"] = to_string(rep.classification);
    j["expected_classification"] = to_string(rep.expected_classification);
    j["classification_match"] = rep.classification_match;
    json cs = json::array();
    for (const auto& c : rep.constants) {
        json cj;
        cj["label"] = c.label;
        cj["expected"] = c.expected;
        cj["computed"] = c.computed;
        cj["match"] = c.match;
        cs.push_back(std::move(cj));
    }
    j["constants"] = std::move(cs);
    j["spectral"] = spectral_json(rep.spectral);
    j["ode_residual"] = rep.ode_residual;
    j["pass"] = rep.pass;
    return j;
}

void emit(std::ostream& out, bool as_json, const json& j, const std::string& text) {
    if (as_json)
        out << j.dump(2) << "\n";
    else
        out << text;
}

int classification_exit(WeightClass c) {
    return c == WeightClass::Indeterminate ? kExitIndeterminate : kExitPass;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"hardy-forge: synthesis and verification of weighted Hardy inequalities"};
    app.require_subcommand(1);
    // --h is a weight flag, so help gets no short form anywhere.
    app.set_help_flag("--help", "print usage");
    auto sub = [&app](const std::string& name, const std::string& desc) {
        CLI::App* cmd = app.add_subcommand(name, desc);
        cmd->set_help_flag("--help", "print usage");
        return cmd;
    };

    // --- jd ---------------------------------------------------------------
    auto* jd_cmd = sub("jd", "apply the radial operator J^d to an expression");
    std::string jd_phi;
    std::vector<double> jd_at;
    CommonFlags jd_flags;
    jd_cmd->add_option("--phi", jd_phi, "expression for phi")->required();
    jd_cmd->add_option("--at", jd_at, "evaluation points (repeatable)");
    jd_flags.attach(jd_cmd, true);

    // --- weight / classify --------------------------------------------------
    struct PairFlags {
        std::string h, V = "1";
        CommonFlags common;
        FellerConfig feller;
        GridPolicy policy;

        void attach(CLI::App* cmd) {
            cmd->add_option("--h", h, "recurrent weight h")->required();
            cmd->add_option("--V", V, "reference weight V");
            common.attach(cmd, true);
            cmd->add_option("--base-point", feller.base_point, "shell ladder base point");
            cmd->add_option("--shells", feller.shells, "shell count");
            cmd->add_option("--ladder-factor", feller.ladder_factor, "shell growth factor");
            cmd->add_option("--grid-n", policy.n, "scan grid size");
            cmd->add_option("--cutoff", policy.infinite_cutoff,
                            "truncation radius for infinite endpoints");
        }

        WeightPair pair() const {
            WeightPair wp;
            wp.h = parse(h, common.var);
            wp.V = parse(V, common.var);
            wp.dom = common.domain();
            wp.params = common.params();
            return wp;
        }

        json echo() const {
            json p;
            p["h"] = h;
            p["V"] = V;
            p["interval"] = common.interval;
            p["dim"] = common.dim;
            p["bindings"] = common.params_json();
            return p;
        }
    };

    auto* weight_cmd = sub("weight", "synthesize the Hardy weight W for (h, V)");
    PairFlags weight_flags;
    weight_flags.attach(weight_cmd);

    auto* classify_cmd =
        sub("classify", "full certificate chain for a weight pair");
    PairFlags classify_flags;
    classify_flags.attach(classify_cmd);

    // --- feller -------------------------------------------------------------
    auto* feller_cmd = sub("feller", "recurrence test for a weight");
    PairFlags feller_flags;
    feller_flags.attach(feller_cmd);

    // --- spectrum -----------------------------------------------------------
    auto* spectrum_cmd =
        sub("spectrum", "discrete Rayleigh quotients on truncations");
    PairFlags spectrum_flags;
    spectrum_flags.attach(spectrum_cmd);
    std::vector<std::string> truncate_flags;
    bool spectrum_log = false;
    int spectrum_n = 500;
    spectrum_cmd->add_option("--truncate", truncate_flags,
                             "truncation a:b (repeatable, coarse to fine)");
    spectrum_cmd->add_option("--n", spectrum_n, "interior grid points per truncation");
    spectrum_cmd->add_flag("--log-grid", spectrum_log, "uniform grid in log x");

    // --- bessel -------------------------------------------------------------
    auto* bessel_cmd =
        sub("bessel", "ground-state residual and shooting for (V, W)");
    PairFlags bessel_flags;
    bessel_flags.attach(bessel_cmd);
    double bessel_x0 = std::numeric_limits<double>::quiet_NaN();
    double bessel_step = 1e-3;
    std::string bessel_range;
    bessel_cmd->add_option("--x0", bessel_x0, "initial point (default geometric midpoint)");
    bessel_cmd->add_option("--step", bessel_step, "base integration step");
    bessel_cmd->add_option("--range", bessel_range, "integration interval a:b");

    // --- catalog ------------------------------------------------------------
    auto* catalog_cmd = sub("catalog", "run the example regression catalog");
    auto* catalog_list = catalog_cmd->add_subcommand("list", "list entries");
    auto* catalog_run = catalog_cmd->add_subcommand("run", "run one entry or --all");
    catalog_cmd->require_subcommand(1);
    std::string catalog_name;
    bool catalog_all = false;
    bool catalog_json = false;
    std::vector<std::string> catalog_params;
    std::vector<std::string> catalog_perturb;
    catalog_list->add_flag("--json", catalog_json, "emit a JSON report");
    catalog_run->add_option("name", catalog_name, "entry name");
    catalog_run->add_flag("--all", catalog_all, "run every entry concurrently");
    catalog_run->add_flag("--json", catalog_json, "emit a JSON report");
    catalog_run->add_option("--param", catalog_params, "parameter override name=value");
    catalog_run->add_option("--perturb", catalog_perturb,
                            "testing hook: shift an expected constant, label=delta");

    try {
        std::vector<const char*> argv;
        argv.reserve(args.size() + 1);
        argv.push_back("hardy-forge");
        for (const auto& a : args) argv.push_back(a.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kExitPass;
        }
        err << e.what() << "\n";
        return kExitUsage;
    }

    auto started = std::chrono::steady_clock::now();
    auto wall_note = [&](bool as_json) {
        if (as_json) return;  // JSON payload stays timestamp-free by design
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - started)
                      .count();
        err << "wall: " << ms << " ms\n";
    };

    try {
        if (jd_cmd->parsed()) {
            Expr phi = parse(jd_phi, jd_flags.var);
            Expr result = j_op(phi, jd_flags.dim);
            json values = json::array();
            std::string text = "J^" + std::to_string(jd_flags.dim) + " = " + result.render() +
                               "\n";
            for (double x : jd_at) {
                double v = result.eval(x, jd_flags.params());
                values.push_back({x, v});
                text += "  at " + std::to_string(x) + ": " + std::to_string(v) + "\n";
            }
            json p;
            p["phi"] = jd_phi;
            p["dim"] = jd_flags.dim;
            p["bindings"] = jd_flags.params_json();
            json r;
            r["expression"] = result.render();
            r["values"] = std::move(values);
            emit(out, jd_flags.as_json, envelope("jd", p, r), text);
            wall_note(jd_flags.as_json);
            return kExitPass;
        }

        if (weight_cmd->parsed() || classify_cmd->parsed()) {
            PairFlags& f = weight_cmd->parsed() ? weight_flags : classify_flags;
            WeightPair wp = f.pair();
            HardyReport rep = classify(wp, f.feller, f.policy);
            json r = hardy_json(rep);
            std::string text = std::string("W = ") + rep.W.render() + "\n" +
                               "classification: " + to_string(rep.classification) + "\n";
            if (!rep.note.empty()) text += "note: " + rep.note + "\n";
            const char* cmd = weight_cmd->parsed() ? "weight" : "classify";
            emit(out, f.common.as_json, envelope(cmd, f.echo(), r), text);
            wall_note(f.common.as_json);
            return classification_exit(rep.classification);
        }

        if (feller_cmd->parsed()) {
            WeightPair wp = feller_flags.pair();
            RecurrenceVerdict v =
                recurrence_test(wp.h, wp.dom, feller_flags.feller, wp.params);
            std::string text = std::string("recurrent: ") + recurrent_name(v.recurrent) +
                               " (left " + kind_name(v.left.kind) + ", right " +
                               kind_name(v.right.kind) + ")\n";
            emit(out, feller_flags.common.as_json,
                 envelope("feller", feller_flags.echo(), recurrence_json(v)), text);
            wall_note(feller_flags.common.as_json);
            return v.recurrent == RecurrenceVerdict::Recurrent::Indeterminate
                       ? kExitIndeterminate
                       : kExitPass;
        }

        if (spectrum_cmd->parsed()) {
            WeightPair wp = spectrum_flags.pair();
            Expr W = derive_weight(wp);
            std::vector<Truncation> truncations;
            for (const std::string& t : truncate_flags) {
                auto colon = t.find(':');
                if (colon == std::string::npos)
                    throw CLI::ValidationError("truncate", "expected a:b");
                truncations.push_back({parse_endpoint(t.substr(0, colon)),
                                       parse_endpoint(t.substr(colon + 1)), spectrum_n,
                                       spectrum_log});
            }
            if (truncations.empty()) {
                Domain dom = wp.dom;
                double a = dom.left_finite() ? dom.l : -spectrum_flags.policy.infinite_cutoff;
                double b = dom.right_finite() ? dom.r : spectrum_flags.policy.infinite_cutoff;
                double pad = 0.01 * (b - a);
                truncations.push_back({a + pad, b - pad, spectrum_n, spectrum_log});
            }
            VerificationReport rep = verify_inequality(wp, W, truncations);
            std::string text;
            for (const auto& l : rep.levels)
                text += "quotient on [" + std::to_string(l.truncation.a) + ", " +
                        std::to_string(l.truncation.b) + "]: " + std::to_string(l.quotient) +
                        "\n";
            text += rep.pass ? "PASS\n" : (rep.inconclusive ? "INCONCLUSIVE\n" : "FAIL\n");
            emit(out, spectrum_flags.common.as_json,
                 envelope("spectrum", spectrum_flags.echo(), spectral_json(rep)), text);
            wall_note(spectrum_flags.common.as_json);
            if (rep.inconclusive) return kExitIndeterminate;
            return rep.pass ? kExitPass : kExitFail;
        }

        if (bessel_cmd->parsed()) {
            WeightPair wp = bessel_flags.pair();
            Expr W = derive_weight(wp);
            Expr u = ground_state(wp);

            OdeProblem prob;
            prob.V = wp.V;
            prob.W = W;
            prob.d = wp.dom.d;
            if (!bessel_range.empty()) {
                auto colon = bessel_range.find(':');
                if (colon == std::string::npos)
                    throw CLI::ValidationError("range", "expected a:b");
                prob.a = parse_endpoint(bessel_range.substr(0, colon));
                prob.b = parse_endpoint(bessel_range.substr(colon + 1));
            } else {
                prob.a = wp.dom.left_finite() ? wp.dom.l + 0.01 : -10.0;
                prob.b = wp.dom.right_finite() ? wp.dom.r - 0.01
                                               : bessel_flags.policy.infinite_cutoff;
            }
            prob.x0 = bessel_x0;
            prob.step = bessel_step;
            prob.params = wp.params;
            double x0 = prob.initial_point();
            prob.u0 = u.eval(x0, wp.params);
            prob.du0 = u.derivative().eval(x0, wp.params);
            OdeSolution sol = shoot(prob);

            std::vector<double> grid;
            for (int i = 0; i < 64; ++i)
                grid.push_back(prob.a + (prob.b - prob.a) * (i + 1) / 66.0);
            double res = ode_residual(u, wp.V, W, wp.dom.d, grid, wp.params);

            json r;
            r["ground_state"] = u.render();
            r["ode_residual"] = res;
            r["positive"] = sol.positive;
            r["min_value"] = sol.min_value;
            r["blew_up"] = sol.blew_up;
            r["samples"] = sol.samples.size();
            std::string text = "ground state: " + u.render() + "\n" +
                               "ode residual: " + std::to_string(res) + "\n" +
                               (sol.positive ? "positive solution\n"
                                             : "solution changes sign\n");
            emit(out, bessel_flags.common.as_json,
                 envelope("bessel", bessel_flags.echo(), r), text);
            wall_note(bessel_flags.common.as_json);
            return sol.positive ? kExitPass : kExitFail;
        }

        if (catalog_list->parsed()) {
            json entries = json::array();
            std::string text;
            for (const auto& e : list_entries()) {
                json je;
                je["name"] = e.name;
                je["h"] = e.h_src;
                je["V"] = e.V_src;
                je["expected_W"] = e.W_src;
                je["var"] = e.var;
                json params = json::object();
                for (const auto& [k, v] : e.wp.params) params[k] = v;
                je["params"] = std::move(params);
                je["expected_classification"] = to_string(e.expected_classification);
                je["notes"] = e.notes;
                entries.push_back(std::move(je));
                text += e.name + ": h = " + e.h_src + ", V = " + e.V_src + "\n";
            }
            json r;
            r["entries"] = std::move(entries);
            emit(out, catalog_json, envelope("catalog list", json::object(), r), text);
            wall_note(catalog_json);
            return kExitPass;
        }

        if (catalog_run->parsed()) {
            if (!catalog_all && catalog_name.empty()) {
                err << "catalog run needs an entry name or --all\n";
                return kExitUsage;
            }
            ParamBindings overrides;
            for (const std::string& p : catalog_params) {
                auto eq = p.find('=');
                if (eq == std::string::npos)
                    throw CLI::ValidationError("param", "expected name=value");
                overrides[p.substr(0, eq)] = parse_endpoint(p.substr(eq + 1));
            }

            std::vector<EntryReport> reports;
            if (catalog_all) {
                std::vector<std::future<EntryReport>> futures;
                for (const auto& e : list_entries())
                    futures.push_back(std::async(std::launch::async, [&e, &overrides] {
                        return run_entry(e.name, overrides);
                    }));
                for (auto& f : futures) reports.push_back(f.get());
            } else {
                reports.push_back(run_entry(catalog_name, overrides));
            }

            for (const std::string& p : catalog_perturb) {
                auto eq = p.rfind('=');
                if (eq == std::string::npos)
                    throw CLI::ValidationError("perturb", "expected label=delta");
                std::string label = p.substr(0, eq);
                double delta = parse_endpoint(p.substr(eq + 1));
                for (auto& rep : reports)
                    for (auto& c : rep.constants)
                        if (c.label == label) {
                            c.expected += delta;
                            c.match = std::fabs(c.computed - c.expected) <=
                                      1e-10 * std::max(1.0, std::fabs(c.expected));
                            rep.pass = rep.pass && c.match;
                        }
            }

            bool all_pass = true;
            json jreports = json::array();
            std::string text;
            for (const auto& rep : reports) {
                all_pass = all_pass && rep.pass;
                jreports.push_back(entry_json(rep));
                text += rep.name + ": " + (rep.pass ? "PASS" : "FAIL") + " (" +
                        to_string(rep.classification) + ", deviation " +
                        std::to_string(rep.weight_deviation) + ")\n";
            }
            json p;
            p["all"] = catalog_all;
            if (!catalog_name.empty()) p["name"] = catalog_name;
            json r;
            r["reports"] = std::move(jreports);
            r["pass"] = all_pass;
            emit(out, catalog_json, envelope("catalog run", p, r), text);
            wall_note(catalog_json);
            return all_pass ? kExitPass : kExitFail;
        }
    } catch (const CLI::ValidationError& e) {
        err << e.what() << "\n";
        return kExitUsage;
    } catch (const ParseError& e) {
        err << "expression error at offset " << e.offset() << ": " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << e.what() << "\n";
        return kExitUsage;
    } catch (const std::out_of_range& e) {
        err << e.what() << "\n";
        return kExitUsage;
    } catch (const EvalError& e) {
        err << "evaluation error: " << e.what() << "\n";
        return kExitIndeterminate;
    }

    err << "no subcommand\n";
    return kExitUsage;
}

}  // namespace hardyforge
