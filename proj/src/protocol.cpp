#include "consensus/protocol.hpp"

#include <algorithm>
#include <stdexcept>

#include "consensus/rng.hpp"

namespace consensus {

char state_char(NodeState s) {
    switch (s) {
        case NodeState::Zero: return '0';
        case NodeState::E0: return 'A';
        case NodeState::E1: return 'B';
        case NodeState::One: return '1';
    }
    throw std::invalid_argument("bad NodeState");
}

NodeState state_from_char(char c) {
    switch (c) {
        case '0': return NodeState::Zero;
        case 'A': return NodeState::E0;
        case 'B': return NodeState::E1;
        case '1': return NodeState::One;
    }
    throw std::invalid_argument(std::string("bad state character '") + c + "'");
}

std::pair<NodeState, NodeState> apply_contact(NodeState a, NodeState b) {
    using S = NodeState;
    if (a == S::Zero && b == S::One) return {S::E1, S::E0};   // rule 1
    if (a == S::One && b == S::Zero) return {S::E0, S::E1};
    if (a == S::E0 && b == S::One) return {S::One, S::E1};    // rule 2
    if (a == S::One && b == S::E0) return {S::E1, S::One};
    if (a == S::E1 && b == S::Zero) return {S::Zero, S::E0};  // rule 3
    if (a == S::Zero && b == S::E1) return {S::E0, S::Zero};
    if (a == S::E0 && b == S::Zero) return {S::Zero, S::E0};  // rule 4 (swap)
    if (a == S::Zero && b == S::E0) return {S::E0, S::Zero};
    if (a == S::E1 && b == S::One) return {S::One, S::E1};    // rule 5 (swap)
    if (a == S::One && b == S::E1) return {S::E1, S::One};
    if (a == S::E0 && b == S::E1) return {S::E1, S::E0};      // rule 6 (swap)
    if (a == S::E1 && b == S::E0) return {S::E0, S::E1};
    return {a, b};
}

Configuration::Configuration(std::vector<NodeState> states) : states_(std::move(states)) {
    if (states_.empty()) throw std::invalid_argument("empty configuration");
    for (NodeState s : states_) ++counts_[static_cast<int>(s)];
}

bool Configuration::contact(int i, int j) {
    auto [ai, aj] = apply_contact(states_[i], states_[j]);
    if (ai == states_[i] && aj == states_[j]) return false;
    --counts_[static_cast<int>(states_[i])];
    --counts_[static_cast<int>(states_[j])];
    states_[i] = ai;
    states_[j] = aj;
    ++counts_[static_cast<int>(ai)];
    ++counts_[static_cast<int>(aj)];
    return true;
}

std::string Configuration::to_string() const {
    std::string out;
    out.reserve(states_.size());
    for (NodeState s : states_) out.push_back(state_char(s));
    return out;
}

Configuration Configuration::from_string(const std::string& text) {
    std::vector<NodeState> states;
    states.reserve(text.size());
    for (char c : text) states.push_back(state_from_char(c));
    return Configuration(std::move(states));
}

Configuration make_initial(int n, const InitSpec& init) {
    if (init.s0 < 0 || init.s1 < 0 || init.s0 + init.s1 != n)
        throw std::invalid_argument("init counts must be nonnegative and sum to n");
    std::vector<NodeState> states(n, NodeState::Zero);
    switch (init.placement) {
        case InitSpec::Placement::Prefix:
            std::fill(states.begin() + init.s0, states.end(), NodeState::One);
            break;
        case InitSpec::Placement::Random: {
            std::fill(states.begin() + init.s0, states.end(), NodeState::One);
            Rng rng(mix64(init.placement_seed));
            for (int i = n - 1; i > 0; --i)  // Fisher-Yates
                std::swap(states[i], states[rng.below(static_cast<std::uint64_t>(i) + 1)]);
            break;
        }
        case InitSpec::Placement::Explicit: {
            if (static_cast<int>(init.one_nodes.size()) != init.s1)
                throw std::invalid_argument("explicit placement must list exactly s1 nodes");
            for (int i : init.one_nodes) {
                if (i < 0 || i >= n) throw std::invalid_argument("explicit node index out of range");
                if (states[i] == NodeState::One)
                    throw std::invalid_argument("explicit node index repeated");
                states[i] = NodeState::One;
            }
            break;
        }
    }
    return Configuration(std::move(states));
}

}  // namespace consensus
