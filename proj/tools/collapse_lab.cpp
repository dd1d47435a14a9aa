#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "collapse/analytic.hpp"
#include "collapse/offspring.hpp"
#include "collapse/simulate.hpp"
#include "collapse/sweep.hpp"
#include "collapse/validate.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

using collapse::Axis;
using collapse::CriticalRate;
using collapse::Model;
using collapse::ModelParams;
using nlohmann::json;

int worker_threads() {
    if (const char* env = std::getenv("COLLAPSE_LAB_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

Model parse_model(const std::string& tag) {
    if (tag == "c1") return Model::C1;
    if (tag == "c2") return Model::C2;
    if (tag == "c3") return Model::C3;
    throw CLI::ValidationError("--model", "must be one of c1, c2, c3");
}

// Axis syntax: "min:max:steps" (steps = cell count) or "a:b" for an
// inclusive integer range.
Axis parse_axis(const std::string& name, const std::string& text) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : text) {
        if (ch == ':') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    parts.push_back(cur);
    try {
        if (parts.size() == 2)
            return Axis::integer_range(name, std::stoi(parts[0]), std::stoi(parts[1]));
        if (parts.size() == 3)
            return Axis{name, std::stod(parts[0]), std::stod(parts[1]), std::stoi(parts[2])};
    } catch (const std::exception&) {
    }
    throw CLI::ValidationError("--" + name, "axis syntax is min:max:steps or a:b");
}

std::string critical_str(const CriticalRate& c) {
    return c.is_infinite ? "inf" : collapse::format_g12(c.value);
}

json params_json(const ModelParams& p) {
    json j{{"p", p.p}, {"lambda", p.lambda}, {"r", p.r}};
    if (p.m) j["m"] = *p.m;
    return j;
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

void emit_report(const json& report, bool as_json) {
    if (as_json) {
        std::cout << report.dump(2) << "\n";
        return;
    }
    // flat text rendering; wall_time_s last so consumers can strip it
    for (const auto& [key, value] : report.items()) {
        if (key == "wall_time_s") continue;
        if (value.is_number_float()) {
            std::cout << key << " = " << collapse::format_g12(value.get<double>()) << "\n";
        } else if (value.is_string()) {
            std::cout << key << " = " << value.get<std::string>() << "\n";
        } else {
            std::cout << key << " = " << value.dump() << "\n";
        }
    }
    if (report.contains("wall_time_s"))
        std::cout << "wall_time_s = " << report["wall_time_s"].get<double>() << "\n";
}

struct CommonFlags {
    std::string model = "c2";
    double p = 0.5;
    double lambda = 1.0;
    double r = 0.0;
    int m = 0;

    ModelParams params() const {
        ModelParams out{p, r, lambda, m > 0 ? std::optional<int>(m) : std::nullopt};
        return out;
    }
};

int cmd_analytic(const CommonFlags& flags, bool want_critical, bool as_json) {
    Timer timer;
    const Model model = parse_model(flags.model);
    ModelParams params = flags.params();
    if (model == Model::C3 && !params.m)
        throw CLI::ValidationError("--m", "model c3 requires the graph degree m");
    if (model != Model::C3) params.m.reset();
    params.validate();

    json report;
    report["command"] = "analytic";
    report["model"] = flags.model;
    report["params"] = params_json(params);
    const collapse::ExtinctionEstimate est = collapse::extinction(model, params);
    report["rho"] = est.probability;
    report["method"] = collapse::method_name(est.method);
    switch (model) {
        case Model::C1:
            report["survives"] = est.probability < 1.0;
            break;
        case Model::C2:
            report["mean_offspring"] = collapse::mean_C2(params);
            report["survives"] = collapse::survives_C2(params);
            break;
        case Model::C3:
            report["mean_offspring"] = collapse::mean_C3(params);
            report["survives"] = collapse::survives_C3(params);
            break;
    }
    if (want_critical) {
        const CriticalRate c = collapse::critical_lambda(model, params.p, params.r, params.m);
        report["critical_lambda"] = critical_str(c);
    }
    report["version"] = kVersion;
    report["wall_time_s"] = timer.seconds();
    emit_report(report, as_json);
    return 0;
}

int cmd_simulate(const CommonFlags& flags, const collapse::SimConfig& config, bool as_json) {
    Timer timer;
    const Model model = parse_model(flags.model);
    ModelParams params = flags.params();
    if (model == Model::C3 && !params.m)
        throw CLI::ValidationError("--m", "model c3 requires the graph degree m");
    if (model != Model::C3) params.m.reset();
    params.validate();
    config.validate();

    const collapse::ExtinctionEstimate est =
        collapse::estimate_extinction(model, params, config, worker_threads());

    json report;
    report["command"] = "simulate";
    report["model"] = flags.model;
    report["params"] = params_json(params);
    report["replicates"] = config.replicates;
    report["seed"] = config.base_seed;
    report["estimate"] = est.probability;
    report["ci_half_width"] = est.ci_half_width;
    report["censored_fraction"] = est.censored_fraction;
    report["analytic"] = collapse::extinction(model, params).probability;
    report["version"] = kVersion;
    report["wall_time_s"] = timer.seconds();
    emit_report(report, as_json);

    if (est.censored_fraction > 0.5) {
        std::cerr << "error: censored_fraction " << est.censored_fraction
                  << " exceeds 0.5; estimate unreliable\n";
        return 2;
    }
    return 0;
}

int cmd_sweep(const std::string& kind, const CommonFlags& flags, const std::string& p_spec,
              const std::string& lambda_spec, const std::string& m_spec,
              const std::string& out_path, bool as_json) {
    Timer timer;
    collapse::SweepTable table;
    if (kind == "phase") {
        const Model model = parse_model(flags.model);
        ModelParams fixed = flags.params();
        if (model != Model::C3) fixed.m.reset();
        table = collapse::phase_grid(model, fixed, parse_axis("p", p_spec),
                                     parse_axis("lambda", lambda_spec),
                                     /*compute_extinction=*/true, worker_threads());
    } else if (kind == "critical") {
        const Model model = parse_model(flags.model);
        table = collapse::critical_curve_table(
            model, flags.r, model == Model::C3 ? std::optional<int>(flags.m) : std::nullopt,
            parse_axis("p", p_spec));
    } else if (kind == "strategy") {
        table = collapse::strategy_comparison(parse_axis("m", m_spec), parse_axis("p", p_spec));
    } else {
        throw CLI::ValidationError("--kind", "must be one of phase, critical, strategy");
    }
    table.metadata["version"] = kVersion;

    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot open output file " << out_path << "\n";
        return 2;
    }
    collapse::write_csv(table, out);
    out.flush();
    if (!out) {
        std::cerr << "error: write failed for " << out_path << "\n";
        return 2;
    }

    long long ok = 0, failed = 0, survive = 0, disp = 0, nodisp = 0, tie = 0;
    for (const auto& cell : table.cells) {
        (cell.status == collapse::CellStatus::Ok ? ok : failed)++;
        if (cell.survives && *cell.survives) ++survive;
        if (cell.label == "dispersion_better") ++disp;
        if (cell.label == "no_dispersion_better") ++nodisp;
        if (cell.label == "tie") ++tie;
    }
    json report;
    report["command"] = "sweep";
    report["kind"] = kind;
    report["out"] = out_path;
    report["cells"] = table.cells.size();
    report["cells_ok"] = ok;
    report["cells_failed"] = failed;
    if (kind == "phase") report["cells_surviving"] = survive;
    if (kind == "strategy") {
        report["dispersion_better"] = disp;
        report["no_dispersion_better"] = nodisp;
        report["tie"] = tie;
    }
    report["version"] = kVersion;
    report["wall_time_s"] = timer.seconds();
    emit_report(report, as_json);
    return 0;
}

int cmd_validate(double tol_scale, bool as_json) {
    const std::vector<collapse::CheckResult> checks = collapse::run_validation(tol_scale);
    bool all_ok = true;
    if (as_json) {
        json rows = json::array();
        for (const auto& c : checks) {
            rows.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
            all_ok = all_ok && c.passed;
        }
        json report{{"command", "validate"}, {"checks", rows}, {"version", kVersion}};
        std::cout << report.dump(2) << "\n";
    } else {
        for (const auto& c : checks) {
            std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << "  (" << c.detail << ")\n";
            all_ok = all_ok && c.passed;
        }
        std::cout << (all_ok ? "all checks passed" : "validation FAILED") << "\n";
    }
    return all_ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"survival/extinction analysis of populations under binomial and geometric "
                 "catastrophes, with and without dispersion"};
    app.require_subcommand(1);
    bool as_json = false;
    app.add_flag("--json", as_json, "emit the run report as JSON");

    CommonFlags flags;
    collapse::SimConfig config;
    bool want_critical = false;
    std::string kind = "phase", p_spec = "0.1:0.9:9", lambda_spec = "0.1:2:20",
                m_spec = "2:10", out_path = "sweep.csv";
    double tol_scale = 1.0;

    auto add_params = [&](CLI::App* cmd) {
        cmd->add_option("--model", flags.model, "model: c1, c2 or c3");
        cmd->add_option("--p", flags.p, "per-exposure survival probability, in (0,1)");
        cmd->add_option("--lambda", flags.lambda, "birth rate, > 0");
        cmd->add_option("--r", flags.r, "geometric-effect mixing weight, in [0,1]");
        cmd->add_option("--m", flags.m, "graph degree (c3 only)");
    };

    CLI::App* analytic = app.add_subcommand("analytic", "closed-form and fixed-point queries");
    add_params(analytic);
    analytic->add_flag("--critical", want_critical, "also compute the critical birth rate");

    CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo extinction estimate");
    add_params(simulate);
    simulate->add_option("--n", config.replicates, "replicate count");
    simulate->add_option("--seed", config.base_seed, "base RNG seed");
    simulate->add_option("--gen-cap", config.generation_cap, "generation cap");
    simulate->add_option("--pop-cap", config.population_cap, "population escape cap");
    simulate->add_option("--step-cap", config.step_cap, "embedded-chain step cap (c1)");

    CLI::App* sweep = app.add_subcommand("sweep", "parameter-grid tables, CSV output");
    add_params(sweep);
    sweep->add_option("--kind", kind, "phase, critical or strategy");
    sweep->add_option("--p-axis", p_spec, "p axis, min:max:steps");
    sweep->add_option("--lambda-axis", lambda_spec, "lambda axis, min:max:steps");
    sweep->add_option("--m-axis", m_spec, "m range a:b (strategy)");
    sweep->add_option("-o,--out", out_path, "output CSV path");

    CLI::App* validate = app.add_subcommand("validate", "built-in cross-check suite");
    validate->add_option("--tol-scale", tol_scale, "tolerance multiplier (testing hook)")
        ->group("");  // hidden

    CLI11_PARSE(app, argc, argv);

    try {
        if (analytic->parsed()) return cmd_analytic(flags, want_critical, as_json);
        if (simulate->parsed()) return cmd_simulate(flags, config, as_json);
        if (sweep->parsed())
            return cmd_sweep(kind, flags, p_spec, lambda_spec, m_spec, out_path, as_json);
        if (validate->parsed()) return cmd_validate(tol_scale, as_json);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
