#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "consensus/contact_matrix.hpp"
#include "consensus/protocol.hpp"

namespace consensus {

/// One applied contact, as seen by an event observer.
struct EventRecord {
    long index;
    double time;
    int i;
    int j;
    NodeState i_before;
    NodeState j_before;
    NodeState i_after;
    NodeState j_after;
};

using EventObserver = std::function<void(const EventRecord&)>;

/// Result of one simulated run. t1 is the instant the last state-1 node is
/// depleted; t2 the further elapsed time until the last e1 node is depleted.
/// Either is absent when the run was truncated at t_max before reaching it;
/// t2 is also absent for a draw (s0 = s1), where phase 2 cannot terminate.
struct TrialOutcome {
    std::optional<double> t1;
    std::optional<double> t2;
    long total_events = 0;
    Configuration final;
    bool draw = false;
    bool truncated = false;
    /// Final states all in {0, e0} with exactly s0-s1 zeros and 2 s1 e0s.
    bool correct = false;
};

/// t_max heuristic: 50 (2/delta)(log n + 1) when an estimate of delta is
/// available, else 1e6 time units.
double default_t_max(std::optional<double> delta_hat, int n);

/// Exact continuous-time simulation of the contact process: aggregate
/// exponential clock of rate sum_{i<j} q_{i,j}, categorical edge choice by
/// binary search on the cumulative rate table, update rules applied per
/// contact. Requires s0 >= s1 (state 0 is the majority convention).
TrialOutcome simulate_trial(const ContactMatrix& q, const InitSpec& init, std::uint64_t seed,
                            double t_max = 1e6, const EventObserver* observer = nullptr);

struct MonteCarloSummary {
    int trials = 0;
    int completed = 0;   // trials with both phases finished (or draws at t1)
    int truncated = 0;
    int draws = 0;
    double mean_t1 = 0.0;
    double ci95_t1 = 0.0;  // 1.96 sd / sqrt(k)
    double mean_t2 = 0.0;
    double ci95_t2 = 0.0;
    bool t2_usable = false;  // false when no trial produced a t2
    std::uint64_t base_seed = 0;
};

/// trials independent runs with seeds derived from base_seed. Trials may run
/// on OpenMP threads; aggregation is a reduction in trial-index order, so
/// the summary is identical with parallel on or off. Truncated trials are
/// counted and excluded from the phase statistics they did not reach.
MonteCarloSummary run_monte_carlo(const ContactMatrix& q, const InitSpec& init, int trials,
                                  std::uint64_t base_seed, double t_max = 1e6,
                                  bool parallel = true);

struct SurvivalCurve {
    std::vector<double> grid;
    std::vector<double> phase1;  // fraction of trials with T1 > t
    std::vector<double> phase2;  // fraction with T1 + T2 > t
    int trials = 0;
};

/// Empirical survival probabilities of phase-1 and phase-2 completion on a
/// strictly increasing, nonnegative time grid. Truncated trials count as
/// surviving past every grid point they did not resolve.
SurvivalCurve survival_curve(const ContactMatrix& q, const InitSpec& init, int trials,
                             const std::vector<double>& grid, std::uint64_t base_seed,
                             double t_max = 1e6, bool parallel = true);

/// Trial log line in the debugging CSV format
/// (event_index,time,i,j,state_i_before,...); indices 1-based.
std::string event_csv_header();
std::string event_csv_row(const EventRecord& e);

}  // namespace consensus
