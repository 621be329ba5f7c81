#include "consensus/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "consensus/rng.hpp"

namespace consensus {

double default_t_max(std::optional<double> delta_hat, int n) {
    if (delta_hat && *delta_hat > 0.0)
        return 50.0 * (2.0 / *delta_hat) * (std::log(static_cast<double>(n)) + 1.0);
    return 1e6;
}

TrialOutcome simulate_trial(const ContactMatrix& q, const InitSpec& init, std::uint64_t seed,
                            double t_max, const EventObserver* observer) {
    const int n = q.size();
    if (init.s1 > init.s0)
        throw std::invalid_argument("simulate_trial: convention is s0 >= s1 (state 0 majority)");
    Configuration cfg = make_initial(n, init);

    // Cumulative rate table over the positive-rate edges.
    const auto& edges = q.edges();
    std::vector<double> cumulative(edges.size());
    double total = 0.0;
    for (std::size_t k = 0; k < edges.size(); ++k) {
        total += edges[k].rate;
        cumulative[k] = total;
    }

    const bool draw = init.s0 == init.s1;
    Rng rng(seed);
    double t = 0.0;
    long events = 0;
    std::optional<double> t1, t2;
    if (cfg.count(NodeState::One) == 0) {
        t1 = 0.0;
        if (cfg.count(NodeState::E1) == 0) t2 = 0.0;
    }

    while (!(t1 && (t2 || draw))) {
        double dt = rng.exponential(total);
        if (t + dt > t_max) break;
        t += dt;
        ++events;
        double u = rng.uniform01() * total;
        std::size_t k = std::lower_bound(cumulative.begin(), cumulative.end(), u) -
                        cumulative.begin();
        if (k >= edges.size()) k = edges.size() - 1;
        const int i = edges[k].i, j = edges[k].j;

        if (observer) {
            EventRecord rec{events, t, i, j, cfg.state(i), cfg.state(j), NodeState::Zero,
                            NodeState::Zero};
            cfg.contact(i, j);
            rec.i_after = cfg.state(i);
            rec.j_after = cfg.state(j);
            (*observer)(rec);
        } else {
            cfg.contact(i, j);
        }

        if (!t1 && cfg.count(NodeState::One) == 0) {
            t1 = t;
            if (draw) break;
        }
        if (t1 && !t2 && !draw && cfg.count(NodeState::E1) == 0) t2 = t - *t1;
    }

    TrialOutcome out{t1, t2, events, std::move(cfg), draw, false, false};
    out.truncated = !(out.t1 && (out.t2 || draw));
    if (!draw && out.t2) {
        const int d = init.s0 - init.s1;
        out.correct = out.final.count(NodeState::One) == 0 &&
                      out.final.count(NodeState::E1) == 0 &&
                      out.final.count(NodeState::Zero) == d &&
                      out.final.count(NodeState::E0) == 2 * init.s1;
    }
    return out;
}

namespace {

void mean_ci(const std::vector<double>& xs, double& mean, double& ci) {
    const std::size_t k = xs.size();
    if (k == 0) {
        mean = ci = 0.0;
        return;
    }
    double s = 0.0;
    for (double x : xs) s += x;
    mean = s / k;
    if (k < 2) {
        ci = 0.0;
        return;
    }
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    ci = 1.96 * std::sqrt(ss / (k - 1)) / std::sqrt(static_cast<double>(k));
}

std::vector<TrialOutcome> run_trials(const ContactMatrix& q, const InitSpec& init, int trials,
                                     std::uint64_t base_seed, double t_max, bool parallel) {
    if (trials < 1) throw std::invalid_argument("need at least one trial");
    std::vector<TrialOutcome> outcomes;
    outcomes.reserve(trials);
    for (int k = 0; k < trials; ++k)
        outcomes.emplace_back(TrialOutcome{{}, {}, 0, Configuration({NodeState::Zero}), false,
                              false, false});
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (int k = 0; k < trials; ++k)
        outcomes[k] = simulate_trial(q, init, trial_seed(base_seed, k), t_max);
    return outcomes;
}

}  // namespace

MonteCarloSummary run_monte_carlo(const ContactMatrix& q, const InitSpec& init, int trials,
                                  std::uint64_t base_seed, double t_max, bool parallel) {
    if (trials < 2) throw std::invalid_argument("run_monte_carlo: need at least 2 trials");
    auto outcomes = run_trials(q, init, trials, base_seed, t_max, parallel);

    MonteCarloSummary s;
    s.trials = trials;
    s.base_seed = base_seed;
    std::vector<double> t1s, t2s;
    for (const auto& o : outcomes) {  // trial-index order: deterministic
        if (o.truncated) ++s.truncated;
        if (o.draw) ++s.draws;
        if (o.t1) t1s.push_back(*o.t1);
        if (o.t2) t2s.push_back(*o.t2);
        if (!o.truncated) ++s.completed;
    }
    mean_ci(t1s, s.mean_t1, s.ci95_t1);
    mean_ci(t2s, s.mean_t2, s.ci95_t2);
    s.t2_usable = !t2s.empty();
    return s;
}

SurvivalCurve survival_curve(const ContactMatrix& q, const InitSpec& init, int trials,
                             const std::vector<double>& grid, std::uint64_t base_seed,
                             double t_max, bool parallel) {
    for (std::size_t g = 0; g < grid.size(); ++g)
        if (grid[g] < 0.0 || (g > 0 && grid[g] <= grid[g - 1]))
            throw std::invalid_argument("survival_curve: grid must be nonnegative, strictly increasing");
    auto outcomes = run_trials(q, init, trials, base_seed, t_max, parallel);

    SurvivalCurve c;
    c.grid = grid;
    c.trials = trials;
    c.phase1.assign(grid.size(), 0.0);
    c.phase2.assign(grid.size(), 0.0);
    for (const auto& o : outcomes) {
        for (std::size_t g = 0; g < grid.size(); ++g) {
            if (!o.t1 || *o.t1 > grid[g]) c.phase1[g] += 1.0;
            if (!o.t1 || !o.t2 || *o.t1 + *o.t2 > grid[g]) c.phase2[g] += 1.0;
        }
    }
    for (std::size_t g = 0; g < grid.size(); ++g) {
        c.phase1[g] /= trials;
        c.phase2[g] /= trials;
    }
    return c;
}

std::string event_csv_header() {
    return "event_index,time,i,j,state_i_before,state_j_before,state_i_after,state_j_after";
}

std::string event_csv_row(const EventRecord& e) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%ld,%.12g,%d,%d,%c,%c,%c,%c", e.index, e.time, e.i + 1,
                  e.j + 1, state_char(e.i_before), state_char(e.j_before), state_char(e.i_after),
                  state_char(e.j_after));
    return buf;
}

}  // namespace consensus
