#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace consensus {

/// The four protocol states in their natural order 0 < e0 < e1 < 1.
enum class NodeState : std::uint8_t { Zero = 0, E0 = 1, E1 = 2, One = 3 };

/// Compact text encoding for traces and fixtures: 0 A B 1.
char state_char(NodeState s);
NodeState state_from_char(char c);

/// The pairwise update rules. Returns the post-contact pair; any pair not
/// covered by a rule is returned unchanged. Symmetric: apply_contact(b, a)
/// is the swap of apply_contact(a, b).
///
/// Rules (switches change the multiset of states, swaps only permute it):
///   (0, 1)  -> (e1, e0)     (e0, 0)  -> (0, e0)   swap
///   (e0, 1) -> (1, e1)      (e1, 1)  -> (1, e1)   swap
///   (e1, 0) -> (0, e0)      (e0, e1) -> (e1, e0)  swap
std::pair<NodeState, NodeState> apply_contact(NodeState a, NodeState b);

/// Per-node state vector with cached occupancy counts.
class Configuration {
public:
    explicit Configuration(std::vector<NodeState> states);

    int size() const { return static_cast<int>(states_.size()); }
    NodeState state(int i) const { return states_[i]; }
    int count(NodeState s) const { return counts_[static_cast<int>(s)]; }

    /// Applies the contact rule to nodes i and j in place, keeping counts
    /// in sync. Returns true if either state changed.
    bool contact(int i, int j);

    /// count(0) - count(1); invariant under every contact rule.
    int conserved_difference() const {
        return counts_[0] - counts_[static_cast<int>(NodeState::One)];
    }

    std::string to_string() const;
    static Configuration from_string(const std::string& text);

private:
    std::vector<NodeState> states_;
    std::array<int, 4> counts_{};
};

/// Initial condition: s0 nodes in state 0 and s1 nodes in state 1, placed
/// either as a prefix of 0s (the contiguous-block convention for cycles),
/// uniformly at random, or at explicitly listed positions for the 1s.
struct InitSpec {
    enum class Placement { Prefix, Random, Explicit };

    int s0 = 0;
    int s1 = 0;
    Placement placement = Placement::Prefix;
    std::uint64_t placement_seed = 0;   // for Placement::Random
    std::vector<int> one_nodes;         // for Placement::Explicit (0-based)
};

/// Realizes an InitSpec on n nodes. Throws std::invalid_argument if
/// s0 + s1 != n, counts are negative, or an explicit list is inconsistent.
Configuration make_initial(int n, const InitSpec& init);

}  // namespace consensus
