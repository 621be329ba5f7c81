#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "consensus/contact_matrix.hpp"

namespace consensus {

enum class GraphFamily { Complete, Path, Cycle, Star, ErdosRenyi, File };
enum class OutputFormat { Csv, Json };

/// One batch experiment: a graph source, an initial split, and what to run.
struct ExperimentSpec {
    enum class Kind { Sim, Delta, Bounds, Analytic, Survival, Sweep };

    Kind kind = Kind::Sim;
    GraphFamily graph = GraphFamily::Complete;
    int n = 0;
    double c = 0.0;               // ER density constant
    std::string file;             // edge-list path for GraphFamily::File
    std::optional<double> alpha;  // s0 = ceil(alpha n) when given
    std::optional<int> s0, s1;
    int trials = 1000;
    std::uint64_t seed = 0;
    OutputFormat format = OutputFormat::Csv;
    std::string placement = "prefix";  // prefix | random
    std::optional<double> t_max;
    std::string delta_method = "auto";  // auto | exhaustive | closed | sampled
    int delta_samples = 2000;
    std::vector<double> grid;          // survival time grid
    std::vector<double> alpha_grid;    // sweep alphas
    std::string hub_state = "0";       // star analytic: initial hub state
    std::string trace_path;            // optional per-event CSV of trial 0
    bool parallel = true;
};

struct ExperimentResult {
    int exit_code = 0;      // 0 ok, 1 generation/numerical failure, 2 usage
    std::string output;     // table or JSON document
    std::string diagnostic; // non-empty on failure
};

ContactMatrix build_graph(const ExperimentSpec& spec);

/// Resolves (s0, s1) from either explicit counts or alpha (s0 = ceil(alpha n)).
void resolve_counts(const ExperimentSpec& spec, int n, int& s0, int& s1);

/// Runs the experiment and renders its output. Deterministic given the spec:
/// the same spec and seed produce byte-identical output.
ExperimentResult run_experiment(const ExperimentSpec& spec);

}  // namespace consensus
