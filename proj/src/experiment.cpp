#include "consensus/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "consensus/analytics.hpp"
#include "consensus/rng.hpp"
#include "consensus/simulator.hpp"
#include "consensus/spectral.hpp"

namespace consensus {

namespace {

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

const char* family_name(GraphFamily f) {
    switch (f) {
        case GraphFamily::Complete: return "complete";
        case GraphFamily::Path: return "path";
        case GraphFamily::Cycle: return "cycle";
        case GraphFamily::Star: return "star";
        case GraphFamily::ErdosRenyi: return "er";
        case GraphFamily::File: return "file";
    }
    return "?";
}

struct DeltaInfo {
    std::optional<double> delta;
    std::string formula;  // provenance note for the metadata block
    std::optional<SpectralResult> result;
};

DeltaInfo resolve_delta(const ExperimentSpec& spec, const ContactMatrix& q, int s0, int s1) {
    const int n = q.size();
    const double alpha = static_cast<double>(s0) / n;
    const std::string& m = spec.delta_method;
    DeltaInfo info;

    auto closed = [&]() -> bool {
        switch (spec.graph) {
            case GraphFamily::Complete:
                info.delta = closed_form_complete(n, s0, s1);
                info.formula = "complete_closed_form";
                return true;
            case GraphFamily::Path:
                info.delta = closed_form_path(n, alpha);
                info.formula = "path_closed_form";
                return true;
            case GraphFamily::Cycle:
                info.delta = closed_form_cycle(n, alpha);
                info.formula = "cycle_closed_form";
                return true;
            case GraphFamily::Star:
                info.delta = closed_form_star(n, alpha);
                info.formula = "star_closed_form";
                return true;
            case GraphFamily::ErdosRenyi:
                info.delta = delta_er_bound(n, spec.c, alpha);
                info.formula = "er_spectral_lower_bound";
                return true;
            default:
                return false;
        }
    };

    if (m == "closed" || (m == "auto" && spec.graph != GraphFamily::File)) {
        if (!closed()) throw std::invalid_argument("no closed form for this graph source");
        return info;
    }
    if (m == "exhaustive" || (m == "auto" && n <= enumeration_guard_limit())) {
        SpectralResult r = delta_exhaustive(q, s0, s1, spec.parallel);
        info.delta = r.delta;
        info.formula = "exhaustive_enumeration";
        info.result = r;
        return info;
    }
    if (m == "sampled" || m == "auto") {
        SpectralResult r = delta_sampled(q, s0, s1, spec.delta_samples, spec.seed);
        info.delta = r.delta;
        info.formula = "sampled_upper_estimate";
        info.result = r;
        return info;
    }
    throw std::invalid_argument("unknown delta method '" + m + "'");
}

std::optional<double> exact_t1(const ExperimentSpec& spec, int n, int s0, int s1,
                               std::string& formula) {
    if (spec.graph == GraphFamily::Complete) {
        formula = "harmonic_closed_form";
        return expected_t1_complete(n, s0, s1);
    }
    if (spec.graph == GraphFamily::Star && s1 >= 1) {
        // Prefix placement puts the hub (node 1) in state 0.
        formula = "star_mode_sum";
        return expected_t1_star(n, s0, s1, NodeState::Zero);
    }
    return std::nullopt;
}

InitSpec make_init(const ExperimentSpec& spec, int s0, int s1) {
    InitSpec init;
    init.s0 = s0;
    init.s1 = s1;
    if (spec.placement == "prefix")
        init.placement = InitSpec::Placement::Prefix;
    else if (spec.placement == "random") {
        init.placement = InitSpec::Placement::Random;
        init.placement_seed = spec.seed ^ 0xa5a5a5a5a5a5a5a5ULL;
    } else
        throw std::invalid_argument("placement must be 'prefix' or 'random'");
    return init;
}

std::string meta_block(const ExperimentSpec& spec, int n, int s0, int s1) {
    std::ostringstream out;
    out << "# graph=" << family_name(spec.graph) << " n=" << n;
    if (spec.graph == GraphFamily::ErdosRenyi) out << " c=" << fmt(spec.c);
    if (spec.graph == GraphFamily::File) out << " file=" << spec.file;
    out << " s0=" << s0 << " s1=" << s1;
    if (spec.alpha) out << " alpha=" << fmt(*spec.alpha) << " rounding=ceil_alpha_n";
    out << " seed=" << spec.seed << " placement=" << spec.placement << '\n';
    return out.str();
}

struct SimRow {
    std::optional<double> alpha;
    int n, s0, s1;
    MonteCarloSummary mc;
    std::optional<double> bound_t1;
    std::optional<double> exact;
};

std::string render_sim(const ExperimentSpec& spec, const std::vector<SimRow>& rows,
                       const std::string& delta_formula, const std::string& exact_formula,
                       bool sweep) {
    auto opt = [&](const std::optional<double>& v) { return v ? fmt(*v) : std::string(); };
    if (spec.format == OutputFormat::Json) {
        nlohmann::json j;
        j["meta"] = {{"graph", family_name(spec.graph)},
                     {"seed", spec.seed},
                     {"trials", spec.trials},
                     {"placement", spec.placement},
                     {"delta_formula", delta_formula},
                     {"exact_formula", exact_formula}};
        j["rows"] = nlohmann::json::array();
        for (const auto& r : rows) {
            nlohmann::json row{{"n", r.n},          {"s0", r.s0},
                               {"s1", r.s1},        {"mean_t1", r.mc.mean_t1},
                               {"ci_t1", r.mc.ci95_t1}, {"mean_t2", r.mc.mean_t2},
                               {"ci_t2", r.mc.ci95_t2}, {"truncated", r.mc.truncated},
                               {"draws", r.mc.draws}};
            if (r.alpha) row["alpha"] = *r.alpha;
            if (r.bound_t1) row["bound_t1"] = *r.bound_t1;
            if (r.exact) row["exact_t1"] = *r.exact;
            if (!r.mc.t2_usable) row["t2_unusable"] = true;
            j["rows"].push_back(row);
        }
        return j.dump(2) + "\n";
    }
    std::ostringstream out;
    out << "# consensus " << (sweep ? "sweep" : "sim") << '\n';
    out << meta_block(spec, rows.front().n, rows.front().s0, rows.front().s1);
    out << "# trials=" << spec.trials << " delta_formula=" << delta_formula
        << " exact_formula=" << (exact_formula.empty() ? "none" : exact_formula) << '\n';
    if (sweep) out << "alpha,margin,";
    out << "n,s0,s1,mean_t1,ci_t1,mean_t2,ci_t2,bound_t1,exact_t1,truncated,draws\n";
    for (const auto& r : rows) {
        if (sweep) out << fmt(*r.alpha) << ',' << fmt(2.0 * *r.alpha - 1.0) << ',';
        out << r.n << ',' << r.s0 << ',' << r.s1 << ',' << fmt(r.mc.mean_t1) << ','
            << fmt(r.mc.ci95_t1) << ',' << fmt(r.mc.mean_t2) << ',' << fmt(r.mc.ci95_t2) << ','
            << opt(r.bound_t1) << ',' << opt(r.exact) << ',' << r.mc.truncated << ','
            << r.mc.draws << '\n';
    }
    return out.str();
}

SimRow run_one_sim(const ExperimentSpec& spec, const ContactMatrix& q, int s0, int s1,
                   std::string& delta_formula, std::string& exact_formula,
                   std::optional<double> alpha) {
    SimRow row;
    row.alpha = alpha;
    row.n = q.size();
    row.s0 = s0;
    row.s1 = s1;

    std::optional<double> delta;
    if (s0 > s1) {
        try {
            DeltaInfo d = resolve_delta(spec, q, s0, s1);
            delta = d.delta;
            delta_formula = d.formula;
        } catch (const std::domain_error&) {
            // outside a bound's validity regime: bound column stays empty
            delta_formula = "unavailable";
        }
    }
    double t_max = spec.t_max ? *spec.t_max : default_t_max(delta, q.size());
    InitSpec init = make_init(spec, s0, s1);

    if (!spec.trace_path.empty()) {
        std::ofstream trace(spec.trace_path);
        trace << event_csv_header() << '\n';
        EventObserver obs = [&trace](const EventRecord& e) { trace << event_csv_row(e) << '\n'; };
        simulate_trial(q, init, trial_seed(spec.seed, 0), t_max, &obs);
    }

    row.mc = run_monte_carlo(q, init, spec.trials, spec.seed, t_max, spec.parallel);
    if (delta) row.bound_t1 = theorem_bound(*delta, q.size()).t1;
    row.exact = exact_t1(spec, q.size(), s0, s1, exact_formula);
    return row;
}

ExperimentResult do_run(const ExperimentSpec& spec) {
    ExperimentResult res;
    ContactMatrix q = build_graph(spec);
    const int n = q.size();

    switch (spec.kind) {
        case ExperimentSpec::Kind::Sim: {
            int s0, s1;
            resolve_counts(spec, n, s0, s1);
            std::string delta_formula = "none", exact_formula;
            auto row = run_one_sim(spec, q, s0, s1, delta_formula, exact_formula, spec.alpha);
            res.output = render_sim(spec, {row}, delta_formula, exact_formula, false);
            break;
        }
        case ExperimentSpec::Kind::Sweep: {
            if (spec.alpha_grid.empty())
                throw std::invalid_argument("sweep requires --alpha-grid lo:hi:step");
            std::vector<SimRow> rows;
            std::string delta_formula = "none", exact_formula;
            for (double a : spec.alpha_grid) {
                int s0 = static_cast<int>(std::ceil(a * n));
                int s1 = n - s0;
                rows.push_back(run_one_sim(spec, q, s0, s1, delta_formula, exact_formula, a));
            }
            res.output = render_sim(spec, rows, delta_formula, exact_formula, true);
            break;
        }
        case ExperimentSpec::Kind::Delta: {
            int s0, s1;
            resolve_counts(spec, n, s0, s1);
            DeltaInfo d = resolve_delta(spec, q, s0, s1);
            if (d.result) {
                res.output = to_json(*d.result) + "\n";
            } else {
                SpectralResult r;
                r.delta = *d.delta;
                r.method = DeltaMethod::ClosedForm;
                r.subset_size = s0 - s1;
                res.output = to_json(r) + "\n";
            }
            break;
        }
        case ExperimentSpec::Kind::Bounds: {
            int s0, s1;
            resolve_counts(spec, n, s0, s1);
            DeltaInfo d = resolve_delta(spec, q, s0, s1);
            PhaseBounds b = theorem_bound(*d.delta, n);
            nlohmann::json j{{"graph_family", family_name(spec.graph)}, {"n", n},
                             {"s0", s0},                               {"s1", s1},
                             {"delta", *d.delta},                      {"delta_formula", d.formula},
                             {"bound_t1", b.t1},                       {"bound_t2", b.t2},
                             {"bound_total", b.total}};
            res.output = j.dump(2) + "\n";
            break;
        }
        case ExperimentSpec::Kind::Analytic: {
            int s0, s1;
            resolve_counts(spec, n, s0, s1);
            DeltaInfo d = resolve_delta(spec, q, s0, s1);
            AnalyticReport rep;
            rep.graph_family = family_name(spec.graph);
            rep.n = n;
            rep.s0 = s0;
            rep.s1 = s1;
            rep.delta = *d.delta;
            rep.notes.push_back("delta=" + d.formula);
            PhaseBounds b = theorem_bound(*d.delta, n);
            rep.bound_t1 = b.t1;
            rep.bound_t2 = b.t2;
            rep.bound_total = b.total;
            if (spec.graph == GraphFamily::Complete) {
                rep.exact_t1 = expected_t1_complete(n, s0, s1);
                rep.notes.push_back("exact_t1=harmonic_closed_form");
                rep.dominant_term =
                    margin_asymptotics(n, static_cast<double>(s0 - s1) / n).dominant_term;
                rep.notes.push_back("dominant_term=margin_asymptotics");
            } else if (spec.graph == GraphFamily::Star && s1 >= 1) {
                NodeState hub = spec.hub_state == "1" ? NodeState::One : NodeState::Zero;
                rep.exact_t1 = expected_t1_star(n, s0, s1, hub);
                rep.notes.push_back("exact_t1=star_mode_sum(hub=" + spec.hub_state + ")");
                rep.dominant_term = star_t1_dominant_term(n, s0, s1);
                rep.notes.push_back("dominant_term=star_nlogn");
            } else if (spec.graph == GraphFamily::ErdosRenyi) {
                rep.dominant_term = er_time_bound(n, spec.c, static_cast<double>(s0) / n);
                rep.notes.push_back("dominant_term=er_time_bound");
            }
            res.output = to_json(rep) + "\n";
            break;
        }
        case ExperimentSpec::Kind::Survival: {
            int s0, s1;
            resolve_counts(spec, n, s0, s1);
            if (spec.grid.empty())
                throw std::invalid_argument("survival requires --grid lo:hi:step");
            InitSpec init = make_init(spec, s0, s1);
            double t_max = spec.t_max ? *spec.t_max : 1e6;
            auto curve =
                survival_curve(q, init, spec.trials, spec.grid, spec.seed, t_max, spec.parallel);
            std::ostringstream out;
            out << "# consensus survival\n" << meta_block(spec, n, s0, s1);
            out << "# trials=" << spec.trials << '\n';
            out << "time,phase1_survival,phase2_survival\n";
            for (std::size_t g = 0; g < curve.grid.size(); ++g)
                out << fmt(curve.grid[g]) << ',' << fmt(curve.phase1[g]) << ','
                    << fmt(curve.phase2[g]) << '\n';
            res.output = out.str();
            break;
        }
    }
    return res;
}

}  // namespace

ContactMatrix build_graph(const ExperimentSpec& spec) {
    switch (spec.graph) {
        case GraphFamily::Complete: return complete_graph(spec.n);
        case GraphFamily::Path: return path_graph(spec.n);
        case GraphFamily::Cycle: return cycle_graph(spec.n);
        case GraphFamily::Star: return star_graph(spec.n);
        case GraphFamily::ErdosRenyi: {
            ErParams p;
            p.n = spec.n;
            p.c = spec.c;
            p.seed = spec.seed;
            return erdos_renyi_graph(p);
        }
        case GraphFamily::File: {
            std::ifstream in(spec.file);
            if (!in) throw std::invalid_argument("cannot open edge-list file " + spec.file);
            std::ostringstream buf;
            buf << in.rdbuf();
            return load_edge_list(buf.str());
        }
    }
    throw std::invalid_argument("bad graph family");
}

void resolve_counts(const ExperimentSpec& spec, int n, int& s0, int& s1) {
    if (spec.alpha) {
        if (spec.s0 || spec.s1)
            throw std::invalid_argument("give either alpha or explicit s0/s1, not both");
        if (!(*spec.alpha > 0.0 && *spec.alpha <= 1.0))
            throw std::invalid_argument("alpha must lie in (0, 1]");
        s0 = static_cast<int>(std::ceil(*spec.alpha * n));
        s1 = n - s0;
        return;
    }
    if (!spec.s0 && !spec.s1) throw std::invalid_argument("missing alpha or s0/s1");
    if (spec.s0 && spec.s1) {
        s0 = *spec.s0;
        s1 = *spec.s1;
    } else {
        s0 = spec.s0 ? *spec.s0 : n - *spec.s1;
        s1 = n - s0;
    }
    if (s0 < 0 || s1 < 0 || s0 + s1 != n)
        throw std::invalid_argument("s0 + s1 must equal n with nonnegative counts");
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    try {
        return do_run(spec);
    } catch (const GenerationFailure& e) {
        return {1, "", e.what()};
    } catch (const std::domain_error& e) {
        return {2, "", e.what()};
    } catch (const std::invalid_argument& e) {
        return {2, "", e.what()};
    } catch (const std::runtime_error& e) {
        return {1, "", e.what()};
    }
}

}  // namespace consensus
