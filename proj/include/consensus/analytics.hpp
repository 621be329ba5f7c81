#pragma once

#include <optional>
#include <string>
#include <vector>

#include "consensus/protocol.hpp"

namespace consensus {

/// The general convergence-time bounds in terms of delta(Q, alpha):
/// each phase is bounded by (log n + 1)/delta in expectation.
struct PhaseBounds {
    double t1;
    double t2;
    double total;  // t1 + t2
};

PhaseBounds theorem_bound(double delta, double n);

/// Exact expected phase-1 duration on the complete graph with rates
/// 1/(n-1). For s0 > s1 this is the harmonic-number closed form
/// (n-1)/(s0-s1) (H_{s1} + H_{s0-s1} - H_{s0}); for a draw (s0 = s1) the
/// contact-epoch sum (n-1) sum_i 1/((s0-i)(s1-i)).
double expected_t1_complete(int n, int s0, int s1);

/// The same quantity as the raw sum over contact epochs; kept as the
/// second algebraic route for cross-checking.
double expected_t1_complete_epoch_sum(int n, int s0, int s1);

enum class MarginRegime { LinearN, LogN, Intermediate };

struct MarginAsymptotics {
    double value;          // (1/mu) log(n mu)
    MarginRegime regime;
    double dominant_term;  // regime-specific leading term
};

/// Classifies the complete-graph phase-1 scaling by the voting margin mu:
/// Theta(n) when mu ~ 1/n, Theta(log n) for constant mu, and
/// (1-a)/2 n^a log(n) for mu = n^{-a}. The split is by the exponent
/// a = -log(mu)/log(n) with cutoffs at 0.1 and 0.9.
MarginAsymptotics margin_asymptotics(int n, double mu);

/// Mean hitting times of the depletion marker in the star's embedded hub
/// chain at mode i (i ones already depleted), started from hub state 0, 1,
/// or e respectively.
struct StarHittingTimes {
    double phi0;
    double phi1;
    double phie;
};

/// Closed forms. Mode populations are x0 = s0 - i, x1 = s1 - i,
/// xe = (n - s0 - s1) + 2i. Requires 0 <= i < s1.
StarHittingTimes star_hitting_times(int n, int s0, int s1, int mode);

/// Independent route: solves the 3x3 first-step system by elimination.
StarHittingTimes star_hitting_oracle(int n, int s0, int s1, int mode);

/// Exact expected phase-1 duration on the star: the mode-0 sojourn for the
/// given hub start plus the sum of phi_e over modes 1..s1-1. hub_initial
/// must be Zero or One.
double expected_t1_star(int n, int s0, int s1, NodeState hub_initial);

/// Leading term of the star phase-1 time: n log(n) / ((2a-1)(3-2a)).
double star_t1_dominant_term(int n, int s0, int s1);

/// phi(x) = x log(x) + 1 - x on [0, 1], with phi(0) = 1 by continuity.
double phi(double x);

/// Inverse of phi on [0, 1], by bisection to 1e-12.
double phi_inverse(double y);

/// High-probability phase-duration bound for G(n, c log(n)/n):
/// log(n) / ((2a-1) phi^{-1}(2/(c(2a-1)))), O(1) term omitted.
double er_time_bound(int n, double c, double alpha);

/// Bundle of the bounds and exact values known for one graph family,
/// with provenance notes naming the formula behind each number.
struct AnalyticReport {
    std::string graph_family;
    int n = 0;
    int s0 = 0;
    int s1 = 0;
    double delta = 0.0;
    double bound_t1 = 0.0;
    double bound_t2 = 0.0;
    double bound_total = 0.0;
    std::optional<double> exact_t1;
    std::optional<double> dominant_term;
    std::vector<std::string> notes;
};

std::string to_json(const AnalyticReport& r);

}  // namespace consensus
