#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "qnet/errors.hpp"
#include "qnet/sweep.hpp"

using namespace qnet;
using Catch::Matchers::ContainsSubstring;

namespace {

SweepConfig tiny_waxman_config() {
    SweepConfig cfg;
    cfg.model.kind = ModelKind::waxman;
    cfg.model.waxman.n_nodes = 40;
    cfg.model.waxman.alpha = 2.0; // dense small instance
    cfg.model.waxman.region_half_width = 30.0;
    cfg.perturbations = {PerturbKind::node_breakdown, PerturbKind::edge_breakdown,
                         PerturbKind::attack_by_degree, PerturbKind::attack_by_capacity};
    cfg.p_grid = {0.0, 0.5};
    cfg.n_graphs = 2;
    cfg.n_pairs = 20;
    cfg.master_seed = 99;
    cfg.comparators.reparam = true;
    cfg.comparators.peff_match = true;
    cfg.comparators.bounds = true;
    cfg.zeta_samples = 10000;
    return cfg;
}

} // namespace

TEST_CASE("sweep config validation catches structural mistakes") {
    SweepConfig cfg = tiny_waxman_config();
    REQUIRE_NOTHROW(cfg.validate());

    cfg.p_grid = {0.5, 0.2};
    REQUIRE_THROWS_WITH(cfg.validate(), ContainsSubstring("strictly increasing"));
    cfg.p_grid = {0.2, 1.5};
    REQUIRE_THROWS_WITH(cfg.validate(), ContainsSubstring("[0, 1]"));
    cfg.p_grid = {};
    REQUIRE_THROWS_WITH(cfg.validate(), ContainsSubstring("non-empty"));
    cfg = tiny_waxman_config();
    cfg.perturbations.clear();
    REQUIRE_THROWS_WITH(cfg.validate(), ContainsSubstring("perturbations"));
    cfg = tiny_waxman_config();
    cfg.n_graphs = 0;
    REQUIRE_THROWS_AS(cfg.validate(), data_error);
    cfg = tiny_waxman_config();
    cfg.zeta_samples = 100;
    REQUIRE_THROWS_AS(cfg.validate(), data_error);
    cfg.comparators.bounds = false;
    REQUIRE_NOTHROW(cfg.validate());
}

TEST_CASE("default grid spans 0 to 0.99") {
    const std::vector<double> grid = default_p_grid();
    REQUIRE(grid.size() == 21);
    REQUIRE(grid.front() == 0.0);
    REQUIRE(grid.back() == 0.99);
    for (std::size_t i = 1; i < grid.size(); ++i) REQUIRE(grid[i] > grid[i - 1]);
}

TEST_CASE("sweep produces the full record grid with exact baselines") {
    const SweepConfig cfg = tiny_waxman_config();
    const std::vector<SweepRecord> records = run_sweep(cfg, 1);

    // 4 kinds + 2 reparam comparators + 2 matched-damage comparators,
    // each over 2 grid points x 2 realizations.
    REQUIRE(records.size() == (4 + 2 + 2) * 2 * 2);

    int baseline_records = 0;
    for (const SweepRecord& r : records) {
        REQUIRE(r.error.empty());
        REQUIRE(r.n_nodes <= 40);
        REQUIRE(r.giant_fraction >= 0.0);
        REQUIRE(r.giant_fraction <= 1.0);
        REQUIRE(r.bound_value.has_value());
        if (r.p == 0.0 && r.error_kind.rfind("reparam", 0) != 0 &&
            r.error_kind.rfind("edge_breakdown_peff", 0) != 0) {
            ++baseline_records;
            REQUIRE(r.normalized_capacity == 1.0);
            REQUIRE(r.n_nodes == 40);
        }
        if (r.error_kind == "attack_by_degree" || r.error_kind == "attack_by_capacity") {
            REQUIRE(r.p_eff.has_value());
            if (r.p == 0.0) REQUIRE(*r.p_eff == 0.0);
        }
        if (r.error_kind.rfind("edge_breakdown_peff", 0) == 0) {
            REQUIRE(r.p_eff.has_value());
        }
    }
    REQUIRE(baseline_records == 4 * 2);
}

TEST_CASE("sweep output is byte-identical for any worker count") {
    const SweepConfig cfg = tiny_waxman_config();
    const std::string csv1 = records_to_csv(run_sweep(cfg, 1));
    const std::string csv4 = records_to_csv(run_sweep(cfg, 4));
    REQUIRE(csv1 == csv4);
    const std::string json1 = records_to_json(run_sweep(cfg, 1));
    const std::string json3 = records_to_json(run_sweep(cfg, 3));
    REQUIRE(json1 == json3);
}

TEST_CASE("record serialization has the pinned header and parses back") {
    SweepRecord r;
    r.model = "waxman(n=4,R=5,alpha=0.1,beta=1)";
    r.error_kind = "node_breakdown";
    r.p = 0.25;
    r.realization = 3;
    r.n_nodes = 4;
    r.n_edges = 2;
    r.mean_capacity = 1.0 / 3.0;
    r.capacity_stderr = 0.01;
    r.normalized_capacity = 0.5;
    r.giant_fraction = 0.75;
    r.mean_degree = 1.0;

    SweepRecord failed;
    failed.model = "waxman(n=4,R=5,alpha=0.1,beta=1)";
    failed.error_kind = "node_breakdown";
    failed.p = 1.0;
    failed.error = "graph has, fewer than 2 nodes";

    const std::vector<SweepRecord> recs{r, failed};
    const std::string csv = records_to_csv(recs);
    const std::string header = csv.substr(0, csv.find('\n'));
    REQUIRE(header ==
            "model,error_kind,p,realization,n_nodes,n_edges,mean_capacity,capacity_stderr,"
            "normalized_capacity,giant_fraction,mean_degree,p_eff,bound_value,error");

    // The failed record quotes its comma-bearing message and leaves numeric
    // fields empty.
    REQUIRE_THAT(csv, ContainsSubstring("\"graph has, fewer than 2 nodes\""));
    REQUIRE_THAT(csv, ContainsSubstring(",,"));

    // Doubles round-trip through the CSV text.
    const std::string third = fmt_g17(1.0 / 3.0);
    REQUIRE_THAT(csv, ContainsSubstring(third));
    REQUIRE(std::strtod(third.c_str(), nullptr) == 1.0 / 3.0);

    const std::string json = records_to_json(recs);
    REQUIRE_THAT(json, ContainsSubstring("\"mean_capacity\":" + third));
    REQUIRE_THAT(json, !ContainsSubstring("\"p_eff\""));
    REQUIRE_THAT(json, ContainsSubstring("\"error\":\"graph has, fewer than 2 nodes\""));
    // Absent mean on the failed record serializes as null, not a number.
    REQUIRE_THAT(json, ContainsSubstring("\"mean_capacity\":null"));
}

TEST_CASE("total breakdown yields error records, not crashes") {
    SweepConfig cfg = tiny_waxman_config();
    cfg.perturbations = {PerturbKind::node_breakdown, PerturbKind::edge_breakdown};
    cfg.p_grid = {0.0, 1.0};
    cfg.comparators.reparam = false;
    cfg.comparators.peff_match = false;
    cfg.comparators.bounds = false;
    const std::vector<SweepRecord> records = run_sweep(cfg, 2);
    REQUIRE(records.size() == 2 * 2 * 2);
    for (const SweepRecord& r : records) {
        if (r.error_kind == "node_breakdown" && r.p == 1.0) {
            REQUIRE_FALSE(r.error.empty()); // no nodes left to sample
        }
        if (r.error_kind == "edge_breakdown" && r.p == 1.0) {
            // Nodes survive with zero edges: capacity is exactly zero.
            REQUIRE(r.error.empty());
            REQUIRE(r.mean_capacity == 0.0);
            REQUIRE(r.normalized_capacity == 0.0);
            REQUIRE(r.n_edges == 0);
        }
    }
}

TEST_CASE("attack records carry effective damage and a realized ceiling") {
    SweepConfig cfg;
    cfg.model.kind = ModelKind::scale_free;
    cfg.model.scale_free.n_nodes = 30;
    cfg.model.scale_free.m0 = 2;
    cfg.model.scale_free.region_half_width = 40.0;
    cfg.perturbations = {PerturbKind::node_breakdown, PerturbKind::attack_by_degree};
    cfg.p_grid = {0.0, 0.3};
    cfg.n_graphs = 2;
    cfg.n_pairs = 15;
    cfg.master_seed = 7;
    cfg.comparators.bounds = true;
    cfg.comparators.reparam = true; // no-op for scale-free models
    cfg.zeta_samples = 10000;
    const std::vector<SweepRecord> records = run_sweep(cfg, 1);
    REQUIRE(records.size() == 2 * 2 * 2); // reparam skipped
    for (const SweepRecord& r : records) {
        REQUIRE(r.error.empty());
        REQUIRE(r.bound_value.has_value());
        if (r.error_kind == "attack_by_degree" && r.p > 0.0) {
            REQUIRE(r.p_eff.has_value());
            REQUIRE(*r.p_eff >= 0.0);
            REQUIRE(*r.p_eff <= 1.0);
        }
        REQUIRE(r.model.rfind("scale_free", 0) == 0);
    }
}

TEST_CASE("json configs parse strictly") {
    const std::string good = R"({
        "model": {"type": "waxman", "n_nodes": 40, "alpha": 2.0, "R": 30.0},
        "channel": {"gamma": 0.02, "min_distance": 0.001},
        "perturbations": ["node_breakdown", "attack_by_degree"],
        "breakdown_mode": "exact_count",
        "p_grid": [0.0, 0.25, 0.5],
        "n_graphs": 3,
        "n_pairs": 10,
        "master_seed": 12,
        "comparators": {"reparam": true, "bounds": false},
        "zeta_samples": 20000
    })";
    const SweepConfig cfg = parse_sweep_config(good);
    REQUIRE(cfg.model.kind == ModelKind::waxman);
    REQUIRE(cfg.model.waxman.n_nodes == 40);
    REQUIRE(cfg.model.waxman.alpha == 2.0);
    REQUIRE(cfg.model.waxman.region_half_width == 30.0);
    REQUIRE(cfg.breakdown_mode == BreakdownMode::exact_count);
    REQUIRE(cfg.perturbations.size() == 2);
    REQUIRE(cfg.p_grid == std::vector<double>{0.0, 0.25, 0.5});
    REQUIRE(cfg.n_graphs == 3);
    REQUIRE(cfg.master_seed == 12);
    REQUIRE(cfg.comparators.reparam);
    REQUIRE_FALSE(cfg.comparators.bounds);

    REQUIRE_THROWS_WITH(parse_sweep_config("{"), ContainsSubstring("not valid JSON"));
    REQUIRE_THROWS_WITH(parse_sweep_config("[]"), ContainsSubstring("top level"));
    REQUIRE_THROWS_WITH(
        parse_sweep_config(R"({"model": {"type": "waxman", "n_nodes": 4}, "perturbations": ["node_breakdown"], "typo_key": 1})"),
        ContainsSubstring("unknown key 'typo_key'"));
    REQUIRE_THROWS_WITH(
        parse_sweep_config(R"({"model": {"type": "spaghetti", "n_nodes": 4}, "perturbations": ["node_breakdown"]})"),
        ContainsSubstring("model.type"));
    REQUIRE_THROWS_WITH(
        parse_sweep_config(R"({"model": {"type": "waxman", "n_nodes": 4}, "perturbations": ["melt"]})"),
        ContainsSubstring("unknown perturbation 'melt'"));
    REQUIRE_THROWS_WITH(
        parse_sweep_config(R"({"model": {"type": "waxman", "n_nodes": 4, "m0": 2}, "perturbations": ["node_breakdown"]})"),
        ContainsSubstring("unknown key 'm0'"));
    REQUIRE_THROWS_WITH(
        parse_sweep_config(R"({"perturbations": ["node_breakdown"]})"),
        ContainsSubstring("missing required key 'model'"));
    REQUIRE_THROWS_WITH(
        parse_sweep_config(R"({"model": {"type": "scale_free", "n_nodes": 30, "m0": 2}, "perturbations": ["node_breakdown"]})"),
        ContainsSubstring("model.R"));
}

TEST_CASE("config files load from disk") {
    const auto path = std::filesystem::temp_directory_path() / "qnet_sweep_cfg.json";
    {
        std::ofstream out(path);
        out << R"({"model": {"type": "waxman", "n_nodes": 10, "R": 20.0},
                   "perturbations": ["edge_breakdown"], "p_grid": [0.0, 0.5],
                   "n_graphs": 1, "n_pairs": 5})";
    }
    const SweepConfig cfg = load_sweep_config(path.string());
    REQUIRE(cfg.model.waxman.n_nodes == 10);
    REQUIRE(cfg.n_graphs == 1);
    std::filesystem::remove(path);

    REQUIRE_THROWS_AS(load_sweep_config("/nonexistent/qnet.json"), data_error);
}

TEST_CASE("records write to disk in both formats") {
    const SweepConfig cfg = [] {
        SweepConfig c = tiny_waxman_config();
        c.perturbations = {PerturbKind::edge_breakdown};
        c.comparators = {};
        c.p_grid = {0.0};
        return c;
    }();
    const std::vector<SweepRecord> records = run_sweep(cfg, 1);
    const auto dir = std::filesystem::temp_directory_path();
    const auto csv_path = dir / "qnet_records.csv";
    const auto json_path = dir / "qnet_records.json";
    write_records(records, csv_path.string(), RecordFormat::csv);
    write_records(records, json_path.string(), RecordFormat::json);
    REQUIRE(std::filesystem::file_size(csv_path) > 0);
    REQUIRE(std::filesystem::file_size(json_path) > 0);
    std::filesystem::remove(csv_path);
    std::filesystem::remove(json_path);
    REQUIRE_THROWS_AS(write_records(records, "/nonexistent/dir/x.csv", RecordFormat::csv),
                      data_error);
}
