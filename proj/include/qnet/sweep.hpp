#pragma once

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "qnet/capacity.hpp"
#include "qnet/errors.hpp"
#include "qnet/io.hpp"
#include "qnet/netgen.hpp"
#include "qnet/perturb.hpp"

namespace qnet {

enum class ModelKind { waxman, scale_free };

struct SweepModel {
    ModelKind kind = ModelKind::waxman;
    WaxmanParams waxman;
    ScaleFreeParams scale_free;

    std::string describe() const {
        return kind == ModelKind::waxman ? waxman.describe() : scale_free.describe();
    }
};

struct SweepComparators {
    bool reparam = false;    // Waxman n(1-p) / beta(1-p) overlay curves
    bool peff_match = false; // edge breakdown at each attack's effective fraction
    bool bounds = false;     // analytic ceiling per record
};

inline std::vector<double> default_p_grid() {
    std::vector<double> grid;
    for (int i = 0; i <= 19; ++i) grid.push_back(i * 0.05);
    grid.push_back(0.99);
    return grid;
}

struct SweepConfig {
    SweepModel model;
    ChannelParams channel;
    std::vector<PerturbKind> perturbations;
    BreakdownMode breakdown_mode = BreakdownMode::bernoulli;
    std::vector<double> p_grid = default_p_grid();
    int n_graphs = 10;
    long long n_pairs = 200;
    std::uint64_t master_seed = 1;
    SweepComparators comparators;
    long long zeta_samples = 200000;

    void validate() const {
        if (model.kind == ModelKind::waxman) model.waxman.validate();
        else model.scale_free.validate();
        channel.validate();
        if (perturbations.empty()) throw data_error("sweep: perturbations must be non-empty");
        if (p_grid.empty()) throw data_error("sweep: p_grid must be non-empty");
        for (std::size_t i = 0; i < p_grid.size(); ++i) {
            if (p_grid[i] < 0.0 || p_grid[i] > 1.0)
                throw data_error("sweep: p_grid values must lie in [0, 1]");
            if (i > 0 && !(p_grid[i] > p_grid[i - 1]))
                throw data_error("sweep: p_grid must be strictly increasing");
        }
        if (n_graphs < 1) throw data_error("sweep: n_graphs must be >= 1");
        if (n_pairs < 1) throw data_error("sweep: n_pairs must be >= 1");
        if (comparators.bounds && zeta_samples < 10000)
            throw data_error("sweep: zeta_samples must be >= 10^4");
    }
};

struct SweepRecord {
    std::string model;
    std::string error_kind;
    double p = 0.0;
    int realization = 0;
    long long n_nodes = 0;
    long long n_edges = 0;
    double mean_capacity = std::numeric_limits<double>::quiet_NaN();
    double capacity_stderr = std::numeric_limits<double>::quiet_NaN();
    double normalized_capacity = std::numeric_limits<double>::quiet_NaN();
    double giant_fraction = std::numeric_limits<double>::quiet_NaN();
    double mean_degree = std::numeric_limits<double>::quiet_NaN();
    std::optional<double> p_eff;      // targeted attacks only
    std::optional<double> bound_value; // only when the bounds comparator runs
    std::string error;                 // non-empty marks a failed record
};

// Worker resolution: an explicit request wins, then the QNET_WORKERS
// environment variable, then hardware concurrency.
inline int resolve_worker_count(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("QNET_WORKERS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end && *end == '\0' && v > 0) return static_cast<int>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

namespace detail {

constexpr std::uint64_t kSlotGraph = 1;
constexpr std::uint64_t kSlotPerturb = 2;
constexpr std::uint64_t kSlotPairs = 3;
constexpr std::uint64_t kSlotZeta = 4;
constexpr std::uint64_t kSlotCompGraph = 5;
constexpr std::uint64_t kSlotBaseline = 6;

constexpr std::uint64_t kCompNodes = 100;
constexpr std::uint64_t kCompEdges = 101;
constexpr std::uint64_t kCompPeff = 102; // + attack kind index

struct GraphStats {
    long long n_nodes = 0;
    long long n_edges = 0;
    double giant_fraction = 0.0;
    double mean_degree = 0.0;
    long long giant_nodes = 0;
};

inline GraphStats graph_stats(const GeoGraph& g) {
    GraphStats st;
    st.n_nodes = g.n_nodes();
    st.n_edges = g.n_edges();
    if (st.n_nodes > 0) {
        const ComponentDecomposition comp = components(g);
        st.giant_fraction = comp.giant_fraction;
        st.giant_nodes = comp.sizes.empty() ? 0 : comp.sizes.front();
        st.mean_degree = 2.0 * static_cast<double>(st.n_edges) / static_cast<double>(st.n_nodes);
    }
    return st;
}

} // namespace detail

// Runs the full perturbation sweep. Work is split over cells
// (perturbation x grid point x realization); every cell derives its random
// streams from the master seed and its structural indices, so results are
// byte-identical for any worker count.
inline std::vector<SweepRecord> run_sweep(const SweepConfig& cfg, int n_workers = 0) {
    cfg.validate();
    const int workers = resolve_worker_count(n_workers);
    const bool is_waxman = cfg.model.kind == ModelKind::waxman;

    std::vector<GeoGraph> base(static_cast<std::size_t>(cfg.n_graphs));
    for (int r = 0; r < cfg.n_graphs; ++r) {
        const std::uint64_t seed = derive_seed(cfg.master_seed, detail::kSlotGraph, r);
        base[r] = is_waxman ? generate_waxman(cfg.model.waxman, cfg.channel, seed)
                            : generate_scale_free(cfg.model.scale_free, cfg.channel, seed);
    }

    double zeta = 0.0;
    double rho0 = 0.0;
    if (cfg.comparators.bounds) {
        const std::uint64_t zseed = derive_seed(cfg.master_seed, detail::kSlotZeta);
        if (is_waxman) {
            zeta = zeta_waxman(cfg.model.waxman, cfg.channel, cfg.zeta_samples, zseed).value;
            const double R = cfg.model.waxman.region_half_width;
            rho0 = static_cast<double>(cfg.model.waxman.n_nodes) / (4.0 * R * R);
        } else {
            zeta = zeta_scale_free(cfg.model.scale_free, cfg.channel, cfg.zeta_samples, zseed).value;
        }
    }

    auto bound_for = [&](double p, const detail::GraphStats& st) -> std::optional<double> {
        if (!cfg.comparators.bounds) return std::nullopt;
        BoundInputs in;
        in.p = p;
        in.zeta = zeta;
        in.giant_fraction = st.giant_fraction;
        if (is_waxman) {
            in.rho0 = rho0;
            in.beta0 = cfg.model.waxman.beta;
            return bound_waxman(in);
        }
        in.m0 = cfg.model.scale_free.m0;
        if (st.n_nodes < 2) return std::nullopt;
        return bound_scale_free(in, st.n_nodes, st.giant_nodes);
    };

    // Cell map. Output slots follow (kind, p, realization) blocks in config
    // order, then comparator blocks.
    enum class CellType { main, reparam_nodes, reparam_edges, peff_edge };
    struct Cell {
        CellType type;
        std::size_t out_slot;
        int kind_idx; // index into cfg.perturbations (attack index for peff cells)
        int p_idx;
        int r;
    };

    const std::size_t np = cfg.p_grid.size();
    const std::size_t nr = static_cast<std::size_t>(cfg.n_graphs);
    std::vector<Cell> cells;
    std::size_t slot_count = cfg.perturbations.size() * np * nr;

    for (std::size_t ki = 0; ki < cfg.perturbations.size(); ++ki)
        for (std::size_t pi = 0; pi < np; ++pi)
            for (std::size_t r = 0; r < nr; ++r)
                if (cfg.p_grid[pi] != 0.0)
                    cells.push_back({CellType::main, (ki * np + pi) * nr + r,
                                     static_cast<int>(ki), static_cast<int>(pi),
                                     static_cast<int>(r)});

    if (cfg.comparators.reparam && is_waxman) {
        for (const CellType type : {CellType::reparam_nodes, CellType::reparam_edges}) {
            for (std::size_t pi = 0; pi < np; ++pi)
                for (std::size_t r = 0; r < nr; ++r)
                    cells.push_back({type, slot_count + pi * nr + r, 0, static_cast<int>(pi),
                                     static_cast<int>(r)});
            slot_count += np * nr;
        }
    }
    std::vector<int> attack_kinds;
    if (cfg.comparators.peff_match) {
        for (std::size_t ki = 0; ki < cfg.perturbations.size(); ++ki) {
            const PerturbKind k = cfg.perturbations[ki];
            if (k != PerturbKind::attack_by_degree && k != PerturbKind::attack_by_capacity)
                continue;
            attack_kinds.push_back(static_cast<int>(ki));
            for (std::size_t pi = 0; pi < np; ++pi)
                for (std::size_t r = 0; r < nr; ++r)
                    cells.push_back({CellType::peff_edge, slot_count + pi * nr + r,
                                     static_cast<int>(ki), static_cast<int>(pi),
                                     static_cast<int>(r)});
            slot_count += np * nr;
        }
    }

    std::vector<SweepRecord> records(slot_count);
    std::vector<GraphCapacitySample> baseline(nr);
    std::vector<detail::GraphStats> baseline_stats(nr);
    std::vector<std::string> baseline_error(nr);

    auto eval_capacity = [&](const GeoGraph& g, std::uint64_t pair_seed, SweepRecord& rec) {
        const GraphCapacitySample s = graph_capacity_sample(g, cfg.n_pairs, pair_seed);
        rec.mean_capacity = s.mean;
        rec.capacity_stderr = s.pair_se;
    };

    auto fill_stats = [&](const detail::GraphStats& st, SweepRecord& rec) {
        rec.n_nodes = st.n_nodes;
        rec.n_edges = st.n_edges;
        rec.giant_fraction = st.giant_fraction;
        rec.mean_degree = st.mean_degree;
    };

    auto eval_cell = [&](const Cell& cell) {
        SweepRecord& rec = records[cell.out_slot];
        const double p = cfg.p_grid[static_cast<std::size_t>(cell.p_idx)];
        const GeoGraph& g0 = base[static_cast<std::size_t>(cell.r)];
        rec.p = p;
        rec.realization = cell.r;
        try {
            switch (cell.type) {
                case CellType::main: {
                    const PerturbKind kind =
                        cfg.perturbations[static_cast<std::size_t>(cell.kind_idx)];
                    rec.model = g0.provenance.model;
                    rec.error_kind = perturb_kind_name(kind);
                    Perturbation pert{kind, p, cfg.breakdown_mode};
                    const GeoGraph pg = apply_perturbation(
                        g0, pert,
                        derive_seed(cfg.master_seed, detail::kSlotPerturb, cell.kind_idx,
                                    cell.p_idx, cell.r));
                    const detail::GraphStats st = detail::graph_stats(pg);
                    fill_stats(st, rec);
                    if (kind == PerturbKind::attack_by_degree ||
                        kind == PerturbKind::attack_by_capacity) {
                        rec.p_eff = effective_edge_fraction(g0, pg);
                        // Targeted removal biases the surviving link mix and
                        // leaves capacity mass in small components, so the
                        // random-thinning formulas are not ceilings here; the
                        // realized graph's mean node capacity always is.
                        if (cfg.comparators.bounds) {
                            const std::vector<double> cn = node_capacities(pg);
                            rec.bound_value = cn.empty() ? 0.0 : mean(cn);
                        }
                    } else {
                        rec.bound_value = bound_for(p, st);
                    }
                    eval_capacity(pg,
                                  derive_seed(cfg.master_seed, detail::kSlotPairs, cell.kind_idx,
                                              cell.p_idx, cell.r),
                                  rec);
                    break;
                }
                case CellType::reparam_nodes:
                case CellType::reparam_edges: {
                    const bool nodes = cell.type == CellType::reparam_nodes;
                    const WaxmanParams params = nodes
                                                    ? reparam_waxman_nodes(cfg.model.waxman, p)
                                                    : reparam_waxman_edges(cfg.model.waxman, p);
                    rec.model = params.describe();
                    rec.error_kind = nodes ? "reparam_nodes" : "reparam_edges";
                    const std::uint64_t comp =
                        nodes ? detail::kCompNodes : detail::kCompEdges;
                    const GeoGraph pg = generate_waxman(
                        params, cfg.channel,
                        derive_seed(cfg.master_seed, detail::kSlotCompGraph, comp, cell.p_idx,
                                    cell.r));
                    const detail::GraphStats st = detail::graph_stats(pg);
                    fill_stats(st, rec);
                    rec.bound_value = bound_for(p, st);
                    eval_capacity(pg,
                                  derive_seed(cfg.master_seed, detail::kSlotPairs, comp,
                                              cell.p_idx, cell.r),
                                  rec);
                    break;
                }
                case CellType::peff_edge: {
                    const PerturbKind attack =
                        cfg.perturbations[static_cast<std::size_t>(cell.kind_idx)];
                    rec.model = g0.provenance.model;
                    rec.error_kind = attack == PerturbKind::attack_by_degree
                                         ? "edge_breakdown_peff_degree"
                                         : "edge_breakdown_peff_capacity";
                    const GeoGraph attacked = attack == PerturbKind::attack_by_degree
                                                  ? attack_by_degree(g0, p)
                                                  : attack_by_capacity(g0, p);
                    const double peff = effective_edge_fraction(g0, attacked);
                    const std::uint64_t comp = detail::kCompPeff + cell.kind_idx;
                    const GeoGraph pg = random_edge_breakdown(
                        g0, peff, BreakdownMode::bernoulli,
                        derive_seed(cfg.master_seed, detail::kSlotPerturb, comp, cell.p_idx,
                                    cell.r));
                    const detail::GraphStats st = detail::graph_stats(pg);
                    fill_stats(st, rec);
                    rec.p_eff = peff;
                    rec.bound_value = bound_for(peff, st);
                    eval_capacity(pg,
                                  derive_seed(cfg.master_seed, detail::kSlotPairs, comp,
                                              cell.p_idx, cell.r),
                                  rec);
                    break;
                }
            }
        } catch (const std::exception& e) {
            rec.error = e.what();
        }
    };

    auto eval_baseline = [&](std::size_t r) {
        baseline_stats[r] = detail::graph_stats(base[r]);
        try {
            baseline[r] = graph_capacity_sample(
                base[r], cfg.n_pairs,
                derive_seed(cfg.master_seed, detail::kSlotBaseline, r));
        } catch (const std::exception& e) {
            baseline_error[r] = e.what();
        }
    };

    // Baselines first (p = 0 records alias them), then all cells.
    {
        std::atomic<std::size_t> next{0};
        const std::size_t total = nr + cells.size();
        auto work = [&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= total) break;
                if (i < nr) eval_baseline(i);
                else eval_cell(cells[i - nr]);
            }
        };
        // Baseline results are only read after the join, so the two phases
        // can share one pool pass.
        std::vector<std::thread> pool;
        for (int w = 1; w < workers; ++w) pool.emplace_back(work);
        work();
        for (auto& t : pool) t.join();
    }

    // p = 0 cells reuse the baseline evaluation of the same graphs.
    for (std::size_t ki = 0; ki < cfg.perturbations.size(); ++ki) {
        for (std::size_t pi = 0; pi < np; ++pi) {
            if (cfg.p_grid[pi] != 0.0) continue;
            for (std::size_t r = 0; r < nr; ++r) {
                SweepRecord& rec = records[(ki * np + pi) * nr + r];
                const PerturbKind kind = cfg.perturbations[ki];
                rec.model = base[r].provenance.model;
                rec.error_kind = perturb_kind_name(kind);
                rec.p = 0.0;
                rec.realization = static_cast<int>(r);
                fill_stats(baseline_stats[r], rec);
                if (kind == PerturbKind::attack_by_degree ||
                    kind == PerturbKind::attack_by_capacity)
                    rec.p_eff = 0.0;
                rec.bound_value = bound_for(0.0, baseline_stats[r]);
                if (baseline_error[r].empty()) {
                    rec.mean_capacity = baseline[r].mean;
                    rec.capacity_stderr = baseline[r].pair_se;
                } else {
                    rec.error = baseline_error[r];
                }
            }
        }
    }

    for (SweepRecord& rec : records) {
        if (!rec.error.empty()) continue;
        const double b = baseline[static_cast<std::size_t>(rec.realization)].mean;
        rec.normalized_capacity =
            b > 0.0 ? rec.mean_capacity / b : std::numeric_limits<double>::quiet_NaN();
    }
    return records;
}

inline const char* kRecordHeader =
    "model,error_kind,p,realization,n_nodes,n_edges,mean_capacity,capacity_stderr,"
    "normalized_capacity,giant_fraction,mean_degree,p_eff,bound_value,error";

namespace detail {

inline std::string csv_num(double x) {
    if (!std::isfinite(x)) return "";
    return fmt_g17(x);
}

inline void json_num_field(std::string& out, const char* key, double x, bool& first) {
    if (!first) out += ",";
    first = false;
    out += "\"";
    out += key;
    out += "\":";
    out += std::isfinite(x) ? fmt_g17(x) : "null";
}

} // namespace detail

inline std::string records_to_csv(std::span<const SweepRecord> records) {
    std::string out = kRecordHeader;
    out += "\n";
    for (const SweepRecord& r : records) {
        out += csv_quote(r.model);
        out += ",";
        out += csv_quote(r.error_kind);
        out += ",";
        out += detail::csv_num(r.p);
        out += ",";
        out += std::to_string(r.realization);
        out += ",";
        out += std::to_string(r.n_nodes);
        out += ",";
        out += std::to_string(r.n_edges);
        out += ",";
        out += detail::csv_num(r.mean_capacity);
        out += ",";
        out += detail::csv_num(r.capacity_stderr);
        out += ",";
        out += detail::csv_num(r.normalized_capacity);
        out += ",";
        out += detail::csv_num(r.giant_fraction);
        out += ",";
        out += detail::csv_num(r.mean_degree);
        out += ",";
        out += r.p_eff ? detail::csv_num(*r.p_eff) : "";
        out += ",";
        out += r.bound_value ? detail::csv_num(*r.bound_value) : "";
        out += ",";
        out += csv_quote(r.error);
        out += "\n";
    }
    return out;
}

inline std::string records_to_json(std::span<const SweepRecord> records) {
    std::string out = "[\n";
    bool first_rec = true;
    for (const SweepRecord& r : records) {
        if (!first_rec) out += ",\n";
        first_rec = false;
        out += "  {";
        bool first = true;
        auto str_field = [&](const char* key, const std::string& v) {
            if (!first) out += ",";
            first = false;
            out += "\"";
            out += key;
            out += "\":";
            out += json_quote(v);
        };
        auto int_field = [&](const char* key, long long v) {
            if (!first) out += ",";
            first = false;
            out += "\"";
            out += key;
            out += "\":";
            out += std::to_string(v);
        };
        str_field("model", r.model);
        str_field("error_kind", r.error_kind);
        detail::json_num_field(out, "p", r.p, first);
        int_field("realization", r.realization);
        int_field("n_nodes", r.n_nodes);
        int_field("n_edges", r.n_edges);
        detail::json_num_field(out, "mean_capacity", r.mean_capacity, first);
        detail::json_num_field(out, "capacity_stderr", r.capacity_stderr, first);
        detail::json_num_field(out, "normalized_capacity", r.normalized_capacity, first);
        detail::json_num_field(out, "giant_fraction", r.giant_fraction, first);
        detail::json_num_field(out, "mean_degree", r.mean_degree, first);
        if (r.p_eff) detail::json_num_field(out, "p_eff", *r.p_eff, first);
        if (r.bound_value) detail::json_num_field(out, "bound_value", *r.bound_value, first);
        if (!r.error.empty()) str_field("error", r.error);
        out += "}";
    }
    out += "\n]\n";
    return out;
}

enum class RecordFormat { csv, json };

inline void write_records(std::span<const SweepRecord> records, const std::string& path,
                          RecordFormat format) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error("cannot open '" + path + "' for writing");
    const std::string text =
        format == RecordFormat::csv ? records_to_csv(records) : records_to_json(records);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw data_error("write to '" + path + "' failed");
}

// ---- JSON sweep configuration ----

namespace detail {

using json = nlohmann::json;

inline void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                       const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) {
                ok = true;
                break;
            }
        if (!ok) throw data_error("config: unknown key '" + key + "' in " + where);
    }
}

inline double get_double(const json& obj, const char* key, const std::string& where) {
    if (!obj.at(key).is_number())
        throw data_error("config: " + where + "." + key + " must be a number");
    return obj.at(key).get<double>();
}

inline long long get_int(const json& obj, const char* key, const std::string& where) {
    if (!obj.at(key).is_number_integer())
        throw data_error("config: " + where + "." + key + " must be an integer");
    return obj.at(key).get<long long>();
}

inline std::string get_string(const json& obj, const char* key, const std::string& where) {
    if (!obj.at(key).is_string())
        throw data_error("config: " + where + "." + key + " must be a string");
    return obj.at(key).get<std::string>();
}

} // namespace detail

inline SweepConfig parse_sweep_config(const std::string& text) {
    using detail::json;
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        throw data_error(std::string("config: not valid JSON: ") + e.what());
    }
    if (!root.is_object()) throw data_error("config: top level must be an object");
    detail::check_keys(root,
                       {"model", "channel", "perturbations", "breakdown_mode", "p_grid",
                        "n_graphs", "n_pairs", "master_seed", "comparators", "zeta_samples"},
                       "top level");

    SweepConfig cfg;
    if (!root.contains("model")) throw data_error("config: missing required key 'model'");
    {
        const json& m = root.at("model");
        if (!m.is_object()) throw data_error("config: model must be an object");
        if (!m.contains("type")) throw data_error("config: model.type is required");
        const std::string type = detail::get_string(m, "type", "model");
        if (type == "waxman") {
            detail::check_keys(m, {"type", "n_nodes", "alpha", "beta", "R"}, "model");
            cfg.model.kind = ModelKind::waxman;
            if (!m.contains("n_nodes")) throw data_error("config: model.n_nodes is required");
            cfg.model.waxman.n_nodes = static_cast<int>(detail::get_int(m, "n_nodes", "model"));
            if (m.contains("alpha")) cfg.model.waxman.alpha = detail::get_double(m, "alpha", "model");
            if (m.contains("beta")) cfg.model.waxman.beta = detail::get_double(m, "beta", "model");
            cfg.model.waxman.region_half_width =
                m.contains("R") ? detail::get_double(m, "R", "model")
                                : default_region_for_alpha(cfg.model.waxman.alpha);
        } else if (type == "scale_free") {
            detail::check_keys(m, {"type", "n_nodes", "m0", "R", "degree_update"}, "model");
            cfg.model.kind = ModelKind::scale_free;
            if (!m.contains("n_nodes")) throw data_error("config: model.n_nodes is required");
            if (!m.contains("R")) throw data_error("config: model.R is required");
            cfg.model.scale_free.n_nodes = static_cast<int>(detail::get_int(m, "n_nodes", "model"));
            cfg.model.scale_free.region_half_width = detail::get_double(m, "R", "model");
            if (m.contains("m0"))
                cfg.model.scale_free.m0 = static_cast<int>(detail::get_int(m, "m0", "model"));
            if (m.contains("degree_update")) {
                const std::string du = detail::get_string(m, "degree_update", "model");
                if (du == "per_insertion") cfg.model.scale_free.degree_update = DegreeUpdate::per_insertion;
                else if (du == "per_edge") cfg.model.scale_free.degree_update = DegreeUpdate::per_edge;
                else throw data_error("config: model.degree_update must be 'per_insertion' or 'per_edge'");
            }
        } else {
            throw data_error("config: model.type must be 'waxman' or 'scale_free'");
        }
    }
    if (root.contains("channel")) {
        const json& c = root.at("channel");
        if (!c.is_object()) throw data_error("config: channel must be an object");
        detail::check_keys(c, {"gamma", "min_distance"}, "channel");
        if (c.contains("gamma")) cfg.channel.gamma = detail::get_double(c, "gamma", "channel");
        if (c.contains("min_distance"))
            cfg.channel.min_distance = detail::get_double(c, "min_distance", "channel");
    }
    if (!root.contains("perturbations"))
        throw data_error("config: missing required key 'perturbations'");
    {
        const json& p = root.at("perturbations");
        if (!p.is_array()) throw data_error("config: perturbations must be an array");
        for (const json& item : p) {
            if (!item.is_string()) throw data_error("config: perturbations entries must be strings");
            const std::string name = item.get<std::string>();
            if (name == "node_breakdown") cfg.perturbations.push_back(PerturbKind::node_breakdown);
            else if (name == "edge_breakdown") cfg.perturbations.push_back(PerturbKind::edge_breakdown);
            else if (name == "attack_by_degree") cfg.perturbations.push_back(PerturbKind::attack_by_degree);
            else if (name == "attack_by_capacity") cfg.perturbations.push_back(PerturbKind::attack_by_capacity);
            else throw data_error("config: unknown perturbation '" + name + "'");
        }
    }
    if (root.contains("breakdown_mode")) {
        const std::string mode = detail::get_string(root, "breakdown_mode", "top level");
        if (mode == "bernoulli") cfg.breakdown_mode = BreakdownMode::bernoulli;
        else if (mode == "exact_count") cfg.breakdown_mode = BreakdownMode::exact_count;
        else throw data_error("config: breakdown_mode must be 'bernoulli' or 'exact_count'");
    }
    if (root.contains("p_grid")) {
        const json& grid = root.at("p_grid");
        if (!grid.is_array()) throw data_error("config: p_grid must be an array");
        cfg.p_grid.clear();
        for (const json& v : grid) {
            if (!v.is_number()) throw data_error("config: p_grid entries must be numbers");
            cfg.p_grid.push_back(v.get<double>());
        }
    }
    if (root.contains("n_graphs"))
        cfg.n_graphs = static_cast<int>(detail::get_int(root, "n_graphs", "top level"));
    if (root.contains("n_pairs")) cfg.n_pairs = detail::get_int(root, "n_pairs", "top level");
    if (root.contains("master_seed")) {
        const json& s = root.at("master_seed");
        if (!s.is_number_integer() || s.get<long long>() < 0)
            throw data_error("config: master_seed must be a non-negative integer");
        cfg.master_seed = s.get<std::uint64_t>();
    }
    if (root.contains("comparators")) {
        const json& c = root.at("comparators");
        if (!c.is_object()) throw data_error("config: comparators must be an object");
        detail::check_keys(c, {"reparam", "peff_match", "bounds"}, "comparators");
        auto get_bool = [&](const char* key, bool& target) {
            if (!c.contains(key)) return;
            if (!c.at(key).is_boolean())
                throw data_error(std::string("config: comparators.") + key + " must be a boolean");
            target = c.at(key).get<bool>();
        };
        get_bool("reparam", cfg.comparators.reparam);
        get_bool("peff_match", cfg.comparators.peff_match);
        get_bool("bounds", cfg.comparators.bounds);
    }
    if (root.contains("zeta_samples"))
        cfg.zeta_samples = detail::get_int(root, "zeta_samples", "top level");
    cfg.validate();
    return cfg;
}

inline SweepConfig load_sweep_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open '" + path + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_sweep_config(buf.str());
}

} // namespace qnet
