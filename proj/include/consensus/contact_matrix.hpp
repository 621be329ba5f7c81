#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace consensus {

/// Symmetric nonnegative matrix of pairwise contact rates over n nodes.
/// Entry (i, j) is the rate of the Poisson process at whose instants nodes
/// i and j interact. Immutable after construction; the induced graph
/// (edges where the rate is positive) is validated to be connected.
///
/// Node indices are 0-based internally. All external text formats use
/// 1-based indices.
class ContactMatrix {
public:
    static constexpr int kMaxNodes = 4096;

    struct Edge {
        int i;
        int j;  // i < j
        double rate;
    };

    /// Takes a dense row-major n*n rate matrix. Throws std::invalid_argument
    /// on asymmetry, nonzero diagonal, negative rates, or a disconnected
    /// induced graph.
    ContactMatrix(int n, std::vector<double> rates);

    int size() const { return n_; }

    double rate(int i, int j) const { return rates_[static_cast<std::size_t>(i) * n_ + j]; }

    /// Total contact rate of node i: sum_j q_{i,j}.
    double row_sum(int i) const { return row_sums_[i]; }

    /// Sum of q_{i,j} over unordered pairs; the aggregate event rate of the
    /// contact process.
    double total_rate() const { return total_rate_; }

    /// Edges with positive rate, ordered by (i, j), i < j.
    const std::vector<Edge>& edges() const { return edges_; }

private:
    int n_;
    std::vector<double> rates_;
    std::vector<double> row_sums_;
    std::vector<Edge> edges_;
    double total_rate_ = 0.0;
};

struct ErParams {
    int n = 0;
    double c = 0.0;  // edge density constant: p_n = c log(n) / n
    std::uint64_t seed = 0;
    int max_attempts = 100;  // resamples before giving up on connectivity
};

/// Thrown when rejection sampling fails to produce a connected graph.
class GenerationFailure : public std::runtime_error {
public:
    GenerationFailure(const std::string& what, int attempts)
        : std::runtime_error(what), attempts(attempts) {}
    int attempts;
};

// Named topologies with the rate normalizations used throughout:
// complete and star edges fire at rate 1/(n-1), path and cycle edges at
// rate 1.
ContactMatrix complete_graph(int n);
ContactMatrix path_graph(int n);
ContactMatrix cycle_graph(int n);
ContactMatrix star_graph(int n);  // node 1 (index 0) is the hub

/// G(n, p_n) with p_n = c log(n)/n and positive rates 1/((n-1) p_n).
/// Resamples with an incremented sub-seed until connected, up to
/// max_attempts; throws GenerationFailure after that.
ContactMatrix erdos_renyi_graph(const ErParams& params);

/// Parses the edge-list text format: first line `n`, then one line
/// `i j rate` per unordered pair with 1 <= i < j <= n and rate > 0.
/// `#` starts a comment line. Throws std::invalid_argument with the
/// offending line number on malformed input, duplicate pairs, or a
/// disconnected graph.
ContactMatrix load_edge_list(const std::string& text);

/// Inverse of load_edge_list.
std::string to_edge_list(const ContactMatrix& q);

}  // namespace consensus
