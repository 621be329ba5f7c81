// Batch experiment driver for the binary interval consensus toolkit.
//
// Subcommands: sim, delta, bounds, analytic, survival, sweep.
// Output goes to --out <path> or stdout; CSV by default, JSON with
// --format json where supported.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "consensus/experiment.hpp"

namespace {

using consensus::ExperimentSpec;
using consensus::GraphFamily;

std::vector<double> parse_range(const std::string& text) {
    // lo:hi:step, inclusive of hi up to rounding
    double lo, hi, step;
    if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3 || step <= 0.0)
        throw CLI::ValidationError("expected lo:hi:step with positive step: " + text);
    std::vector<double> out;
    for (int k = 0;; ++k) {
        double v = lo + k * step;
        if (v > hi + step * 1e-9) break;
        out.push_back(v);
    }
    return out;
}

void add_common(CLI::App* cmd, ExperimentSpec& spec, std::string& graph, std::string& out_path,
                std::string& format) {
    cmd->add_option("--graph", graph, "complete|path|cycle|star|er|file")->required();
    cmd->add_option("--n", spec.n, "node count");
    cmd->add_option("--c", spec.c, "ER edge-density constant (p_n = c log(n)/n)");
    cmd->add_option("--file", spec.file, "edge-list file (with --graph file)");
    cmd->add_option("--alpha", [&spec](const std::vector<std::string>& v) {
        spec.alpha = std::stod(v[0]);
        return true;
    }, "initial majority fraction; s0 = ceil(alpha n)");
    cmd->add_option("--s0", [&spec](const std::vector<std::string>& v) {
        spec.s0 = std::stoi(v[0]);
        return true;
    }, "initial count of state-0 nodes");
    cmd->add_option("--s1", [&spec](const std::vector<std::string>& v) {
        spec.s1 = std::stoi(v[0]);
        return true;
    }, "initial count of state-1 nodes");
    cmd->add_option("--seed", spec.seed, "base RNG seed");
    cmd->add_option("--out", out_path, "output file (default stdout)");
    cmd->add_option("--format", format, "csv|json");
    cmd->add_option("--placement", spec.placement, "prefix|random initial placement");
    cmd->add_option("--tmax", [&spec](const std::vector<std::string>& v) {
        spec.t_max = std::stod(v[0]);
        return true;
    }, "truncation time");
    cmd->add_flag("--serial", [&spec](std::int64_t) { spec.parallel = false; },
                  "disable OpenMP parallel trials/enumeration");
}

GraphFamily parse_family(const std::string& g) {
    if (g == "complete") return GraphFamily::Complete;
    if (g == "path") return GraphFamily::Path;
    if (g == "cycle") return GraphFamily::Cycle;
    if (g == "star") return GraphFamily::Star;
    if (g == "er") return GraphFamily::ErdosRenyi;
    if (g == "file") return GraphFamily::File;
    throw CLI::ValidationError("unknown graph family: " + g);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"binary interval consensus: simulation and analytics driver"};
    app.require_subcommand(1);

    ExperimentSpec spec;
    std::string graph, out_path, format = "csv", grid_text, alpha_grid_text;

    auto* sim = app.add_subcommand("sim", "Monte Carlo phase durations with CIs and bounds");
    add_common(sim, spec, graph, out_path, format);
    sim->add_option("--trials", spec.trials, "number of independent trials");
    sim->add_option("--trace", spec.trace_path, "write the event log of trial 0 to this CSV");

    auto* delta = app.add_subcommand("delta", "spectral decay rate delta(Q, alpha)");
    add_common(delta, spec, graph, out_path, format);
    delta->add_option("--method", spec.delta_method, "auto|exhaustive|closed|sampled");
    delta->add_option("--samples", spec.delta_samples, "subset samples for --method sampled");

    auto* bounds = app.add_subcommand("bounds", "expected convergence-time bounds");
    add_common(bounds, spec, graph, out_path, format);
    bounds->add_option("--method", spec.delta_method, "auto|exhaustive|closed|sampled");

    auto* analytic = app.add_subcommand("analytic", "exact formulas and dominant terms");
    add_common(analytic, spec, graph, out_path, format);
    analytic->add_option("--hub-state", spec.hub_state, "star initial hub state: 0|1");

    auto* survival = app.add_subcommand("survival", "empirical phase survival curves");
    add_common(survival, spec, graph, out_path, format);
    survival->add_option("--trials", spec.trials, "number of independent trials");
    survival->add_option("--grid", grid_text, "time grid lo:hi:step")->required();

    auto* sweep = app.add_subcommand("sweep", "sim over a grid of alpha values");
    add_common(sweep, spec, graph, out_path, format);
    sweep->add_option("--trials", spec.trials, "number of independent trials");
    sweep->add_option("--alpha-grid", alpha_grid_text, "alpha grid lo:hi:step")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        spec.graph = parse_family(graph);
        if (format == "json")
            spec.format = consensus::OutputFormat::Json;
        else if (format != "csv")
            throw CLI::ValidationError("format must be csv or json");
        if (!grid_text.empty()) spec.grid = parse_range(grid_text);
        if (!alpha_grid_text.empty()) spec.alpha_grid = parse_range(alpha_grid_text);
        if (sim->parsed()) spec.kind = ExperimentSpec::Kind::Sim;
        if (delta->parsed()) spec.kind = ExperimentSpec::Kind::Delta;
        if (bounds->parsed()) spec.kind = ExperimentSpec::Kind::Bounds;
        if (analytic->parsed()) spec.kind = ExperimentSpec::Kind::Analytic;
        if (survival->parsed()) spec.kind = ExperimentSpec::Kind::Survival;
        if (sweep->parsed()) spec.kind = ExperimentSpec::Kind::Sweep;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    auto result = consensus::run_experiment(spec);
    if (result.exit_code != 0) {
        std::cerr << "error: " << result.diagnostic << "\n";
        return result.exit_code;
    }
    if (out_path.empty()) {
        std::cout << result.output;
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) {
            std::cerr << "error: cannot write " << out_path << "\n";
            return 1;
        }
        out << result.output;
    }
    return 0;
}
