#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "consensus/experiment.hpp"
#include "consensus/spectral.hpp"

using namespace consensus;

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

ExperimentSpec base_sim_spec() {
    ExperimentSpec s;
    s.kind = ExperimentSpec::Kind::Sim;
    s.graph = GraphFamily::Complete;
    s.n = 20;
    s.alpha = 0.75;
    s.trials = 50;
    s.seed = 9;
    return s;
}

}  // namespace

TEST_CASE("count resolution from alpha or explicit counts") {
    ExperimentSpec s;
    int s0, s1;

    s.alpha = 0.75;
    resolve_counts(s, 100, s0, s1);
    CHECK(s0 == 75);
    CHECK(s1 == 25);
    resolve_counts(s, 10, s0, s1);  // ceil(7.5) = 8
    CHECK(s0 == 8);
    CHECK(s1 == 2);

    s.alpha.reset();
    s.s0 = 6;
    resolve_counts(s, 10, s0, s1);
    CHECK(s1 == 4);
    s.s1 = 5;
    CHECK_THROWS_AS(resolve_counts(s, 10, s0, s1), std::invalid_argument);

    ExperimentSpec both;
    both.alpha = 0.75;
    both.s0 = 7;
    CHECK_THROWS_AS(resolve_counts(both, 10, s0, s1), std::invalid_argument);
    ExperimentSpec none;
    CHECK_THROWS_AS(resolve_counts(none, 10, s0, s1), std::invalid_argument);
}

TEST_CASE("graph building covers every family") {
    ExperimentSpec s;
    s.n = 6;
    s.graph = GraphFamily::Complete;
    CHECK(build_graph(s).size() == 6);
    s.graph = GraphFamily::Path;
    CHECK(build_graph(s).edges().size() == 5);
    s.graph = GraphFamily::Cycle;
    CHECK(build_graph(s).edges().size() == 6);
    s.graph = GraphFamily::Star;
    CHECK(build_graph(s).edges().size() == 5);

    s.graph = GraphFamily::ErdosRenyi;
    s.n = 50;
    s.c = 10.0;
    s.seed = 4;
    CHECK(build_graph(s).size() == 50);

    auto path = temp_path("consensus_test_edges.txt");
    {
        std::ofstream out(path);
        out << "3\n1 2 1.0\n2 3 0.5\n";
    }
    ExperimentSpec f;
    f.graph = GraphFamily::File;
    f.file = path;
    auto q = build_graph(f);
    CHECK(q.size() == 3);
    CHECK(q.rate(1, 2) == 0.5);
    std::remove(path.c_str());

    f.file = temp_path("consensus_test_missing.txt");
    CHECK_THROWS_AS(build_graph(f), std::invalid_argument);
}

TEST_CASE("sim experiment emits the fixed CSV schema") {
    auto res = run_experiment(base_sim_spec());
    REQUIRE(res.exit_code == 0);
    auto lines = lines_of(res.output);
    REQUIRE(lines.size() >= 5);
    CHECK(lines[0] == "# consensus sim");
    CHECK(lines[1].find("graph=complete") != std::string::npos);
    CHECK(lines[1].find("s0=15 s1=5") != std::string::npos);
    CHECK(lines[1].find("alpha=0.75 rounding=ceil_alpha_n") != std::string::npos);
    CHECK(lines[2].find("delta_formula=complete_closed_form") != std::string::npos);
    CHECK(lines[2].find("exact_formula=harmonic_closed_form") != std::string::npos);
    CHECK(lines[3] == "n,s0,s1,mean_t1,ci_t1,mean_t2,ci_t2,bound_t1,exact_t1,truncated,draws");
    CHECK(lines[4].rfind("20,15,5,", 0) == 0);
    // all 11 columns populated (bound and exact exist for the complete graph)
    CHECK(std::count(lines[4].begin(), lines[4].end(), ',') == 10);
}

TEST_CASE("the same spec and seed give byte-identical output") {
    for (auto kind : {ExperimentSpec::Kind::Sim, ExperimentSpec::Kind::Survival}) {
        auto spec = base_sim_spec();
        spec.kind = kind;
        spec.grid = {1.0, 2.0, 4.0};
        auto a = run_experiment(spec);
        auto b = run_experiment(spec);
        CHECK(a.exit_code == 0);
        CHECK(a.output == b.output);
        spec.seed = 10;
        auto c = run_experiment(spec);
        CHECK(a.output != c.output);
    }
}

TEST_CASE("sim experiment JSON output") {
    auto spec = base_sim_spec();
    spec.format = OutputFormat::Json;
    auto res = run_experiment(spec);
    REQUIRE(res.exit_code == 0);
    auto j = nlohmann::json::parse(res.output);
    CHECK(j["meta"]["graph"] == "complete");
    CHECK(j["meta"]["trials"] == 50);
    REQUIRE(j["rows"].size() == 1);
    const auto& row = j["rows"][0];
    CHECK(row["n"] == 20);
    CHECK(row["s0"] == 15);
    CHECK(row["s1"] == 5);
    CHECK(row["mean_t1"].get<double>() > 0.0);
    CHECK(row["bound_t1"].get<double>() >= row["exact_t1"].get<double>());
}

TEST_CASE("delta experiment returns spectral JSON with the requested method") {
    ExperimentSpec spec;
    spec.kind = ExperimentSpec::Kind::Delta;
    spec.graph = GraphFamily::Path;
    spec.n = 8;
    spec.s0 = 6;
    spec.s1 = 2;

    spec.delta_method = "exhaustive";
    auto res = run_experiment(spec);
    REQUIRE(res.exit_code == 0);
    auto j = nlohmann::json::parse(res.output);
    CHECK(j["method"] == "exhaustive");
    CHECK(j["subset_size"] == 4);
    CHECK(j["delta"].get<double>() ==
          doctest::Approx(closed_form_path(8, 0.75)).epsilon(1e-9));

    spec.delta_method = "closed";
    auto jc = nlohmann::json::parse(run_experiment(spec).output);
    CHECK(jc["method"] == "closed_form");
    CHECK(jc["delta"].get<double>() == doctest::Approx(j["delta"].get<double>()).epsilon(1e-9));

    spec.delta_method = "sampled";
    auto js = nlohmann::json::parse(run_experiment(spec).output);
    CHECK(js["method"] == "sampled");
    CHECK(js["delta"].get<double>() >= j["delta"].get<double>() - 1e-12);

    spec.delta_method = "nonsense";
    CHECK(run_experiment(spec).exit_code == 2);
}

TEST_CASE("bounds experiment") {
    ExperimentSpec spec;
    spec.kind = ExperimentSpec::Kind::Bounds;
    spec.graph = GraphFamily::Cycle;
    spec.n = 12;
    spec.alpha = 0.75;
    auto res = run_experiment(spec);
    REQUIRE(res.exit_code == 0);
    auto j = nlohmann::json::parse(res.output);
    CHECK(j["delta_formula"] == "cycle_closed_form");
    CHECK(j["bound_total"].get<double>() ==
          doctest::Approx(j["bound_t1"].get<double>() + j["bound_t2"].get<double>()));
}

TEST_CASE("analytic experiment carries exact values and provenance notes") {
    ExperimentSpec spec;
    spec.kind = ExperimentSpec::Kind::Analytic;
    spec.graph = GraphFamily::Complete;
    spec.n = 100;
    spec.alpha = 0.75;
    auto j = nlohmann::json::parse(run_experiment(spec).output);
    CHECK(j["exact_t1"].get<double>() <= j["bound_t1"].get<double>());
    bool found = false;
    for (const auto& note : j["notes"])
        if (note.get<std::string>().find("harmonic_closed_form") != std::string::npos)
            found = true;
    CHECK(found);

    spec.graph = GraphFamily::Star;
    spec.hub_state = "1";
    auto js = nlohmann::json::parse(run_experiment(spec).output);
    CHECK(js["exact_t1"].get<double>() > 0.0);
    CHECK(js["dominant_term"].get<double>() > 0.0);

    spec.graph = GraphFamily::ErdosRenyi;
    spec.c = 20.0;
    spec.n = 200;
    auto je = nlohmann::json::parse(run_experiment(spec).output);
    CHECK(je["dominant_term"].get<double>() > 0.0);
    CHECK(!je.contains("exact_t1"));
}

TEST_CASE("survival experiment emits a monotone curve") {
    ExperimentSpec spec;
    spec.kind = ExperimentSpec::Kind::Survival;
    spec.graph = GraphFamily::Complete;
    spec.n = 20;
    spec.s0 = 13;
    spec.s1 = 7;
    spec.trials = 200;
    spec.grid = {0.0, 1.0, 2.0, 4.0, 8.0};
    auto res = run_experiment(spec);
    REQUIRE(res.exit_code == 0);
    auto lines = lines_of(res.output);
    REQUIRE(lines.size() == 3 + 1 + spec.grid.size());
    CHECK(lines[3] == "time,phase1_survival,phase2_survival");
    double prev1 = 2.0, prev2 = 2.0;
    for (std::size_t g = 0; g < spec.grid.size(); ++g) {
        double t, p1, p2;
        REQUIRE(std::sscanf(lines[4 + g].c_str(), "%lf,%lf,%lf", &t, &p1, &p2) == 3);
        CHECK(t == spec.grid[g]);
        CHECK(p1 <= prev1);
        CHECK(p2 <= prev2);
        prev1 = p1;
        prev2 = p2;
    }

    spec.grid.clear();
    CHECK(run_experiment(spec).exit_code == 2);
}

TEST_CASE("sweep emits one row per alpha with margin column") {
    ExperimentSpec spec;
    spec.kind = ExperimentSpec::Kind::Sweep;
    spec.graph = GraphFamily::Complete;
    spec.n = 20;
    spec.trials = 30;
    spec.alpha_grid = {0.6, 0.75, 0.9};
    auto res = run_experiment(spec);
    REQUIRE(res.exit_code == 0);
    auto lines = lines_of(res.output);
    REQUIRE(lines.size() >= 7);
    CHECK(lines[3] ==
          "alpha,margin,n,s0,s1,mean_t1,ci_t1,mean_t2,ci_t2,bound_t1,exact_t1,truncated,draws");
    CHECK(lines[4].rfind("0.6,0.2,20,12,8,", 0) == 0);
    CHECK(lines[5].rfind("0.75,0.5,20,15,5,", 0) == 0);
    CHECK(lines[6].rfind("0.9,0.8,20,18,2,", 0) == 0);

    spec.alpha_grid.clear();
    CHECK(run_experiment(spec).exit_code == 2);
}

TEST_CASE("trace file logs trial zero") {
    auto spec = base_sim_spec();
    spec.trials = 5;
    spec.trace_path = temp_path("consensus_test_trace.csv");
    auto res = run_experiment(spec);
    REQUIRE(res.exit_code == 0);
    std::ifstream in(spec.trace_path);
    REQUIRE(in.good());
    std::string header;
    std::getline(in, header);
    CHECK(header ==
          "event_index,time,i,j,state_i_before,state_j_before,state_i_after,state_j_after");
    std::string row;
    int rows = 0;
    while (std::getline(in, row)) {
        ++rows;
        long idx;
        double t;
        int i, j;
        REQUIRE(std::sscanf(row.c_str(), "%ld,%lf,%d,%d", &idx, &t, &i, &j) == 4);
        CHECK(idx == rows);
        CHECK(i >= 1);
        CHECK(j <= spec.n);
    }
    CHECK(rows > 0);
    in.close();
    std::remove(spec.trace_path.c_str());
}

TEST_CASE("failure exit codes") {
    // impossible density: p_n > 1 is a usage error
    ExperimentSpec bad;
    bad.kind = ExperimentSpec::Kind::Sim;
    bad.graph = GraphFamily::ErdosRenyi;
    bad.n = 100;
    bad.c = 30.0;
    bad.alpha = 0.75;
    CHECK(run_experiment(bad).exit_code == 2);

    // too sparse to ever come out connected: generation failure
    bad.c = 0.05;
    bad.n = 200;
    auto res = run_experiment(bad);
    CHECK(res.exit_code == 1);
    CHECK(!res.diagnostic.empty());

    // ER bound outside its validity regime
    ExperimentSpec regime;
    regime.kind = ExperimentSpec::Kind::Bounds;
    regime.graph = GraphFamily::ErdosRenyi;
    regime.n = 100;
    regime.c = 3.0;
    regime.alpha = 0.75;
    CHECK(run_experiment(regime).exit_code == 2);

    // invalid placement string
    auto spec = base_sim_spec();
    spec.placement = "shuffled";
    CHECK(run_experiment(spec).exit_code == 2);
}
