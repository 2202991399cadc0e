// Command line driver: generate networks, perturb them, measure capacities,
// run analytics, evaluate analytic ceilings, and execute full sweeps.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qnet/analytics.hpp"
#include "qnet/capacity.hpp"
#include "qnet/io.hpp"
#include "qnet/netgen.hpp"
#include "qnet/perturb.hpp"
#include "qnet/sweep.hpp"

namespace {

struct ModelOptions {
    std::string model = "waxman";
    int n_nodes = 1021;
    double region_half_width = 0.0; // 0 means derive from alpha (Waxman only)
    double alpha = 0.1;
    double beta = 1.0;
    int m0 = 3;
    std::string degree_update = "per_insertion";
    double gamma = 0.02;
    double min_distance = 0.001;
};

void add_model_options(CLI::App* cmd, ModelOptions& opt) {
    cmd->add_option("--model", opt.model, "Network model")
        ->check(CLI::IsMember({"waxman", "scale_free"}));
    cmd->add_option("--n", opt.n_nodes, "Number of nodes");
    cmd->add_option("--R", opt.region_half_width,
                    "Half-width of the square deployment region (km)");
    cmd->add_option("--alpha", opt.alpha, "Waxman decay parameter");
    cmd->add_option("--beta", opt.beta, "Waxman base link probability");
    cmd->add_option("--m0", opt.m0, "Scale-free links added per new node");
    cmd->add_option("--degree-update", opt.degree_update,
                    "Scale-free attachment weight refresh policy")
        ->check(CLI::IsMember({"per_insertion", "per_edge"}));
    cmd->add_option("--gamma", opt.gamma, "Fiber loss rate (km^-1)");
    cmd->add_option("--min-distance", opt.min_distance, "Distance floor (km)");
}

qnet::ChannelParams channel_of(const ModelOptions& opt) {
    qnet::ChannelParams ch;
    ch.gamma = opt.gamma;
    ch.min_distance = opt.min_distance;
    return ch;
}

qnet::WaxmanParams waxman_of(const ModelOptions& opt) {
    qnet::WaxmanParams p;
    p.n_nodes = opt.n_nodes;
    p.alpha = opt.alpha;
    p.beta = opt.beta;
    p.region_half_width = opt.region_half_width > 0.0
                              ? opt.region_half_width
                              : qnet::default_region_for_alpha(opt.alpha);
    return p;
}

qnet::ScaleFreeParams scale_free_of(const ModelOptions& opt) {
    if (opt.region_half_width <= 0.0)
        throw qnet::data_error("scale_free model requires --R > 0");
    qnet::ScaleFreeParams p;
    p.n_nodes = opt.n_nodes;
    p.region_half_width = opt.region_half_width;
    p.m0 = opt.m0;
    p.degree_update = opt.degree_update == "per_edge" ? qnet::DegreeUpdate::per_edge
                                                      : qnet::DegreeUpdate::per_insertion;
    return p;
}

qnet::PerturbKind kind_of(const std::string& name) {
    if (name == "node_breakdown") return qnet::PerturbKind::node_breakdown;
    if (name == "edge_breakdown") return qnet::PerturbKind::edge_breakdown;
    if (name == "attack_by_degree") return qnet::PerturbKind::attack_by_degree;
    return qnet::PerturbKind::attack_by_capacity;
}

void print_kv(const char* key, double value) {
    std::cout << key << " " << qnet::fmt_g17(value) << "\n";
}

int run(int argc, char** argv) {
    CLI::App app{"Quantum network robustness toolkit"};
    app.require_subcommand(1);

    // generate
    ModelOptions gen_opt;
    std::uint64_t gen_seed = 1;
    std::string gen_out;
    CLI::App* gen = app.add_subcommand("generate", "Generate a random network and save it");
    add_model_options(gen, gen_opt);
    gen->add_option("--seed", gen_seed, "Generator seed");
    gen->add_option("--out", gen_out, "Output graph file")->required();

    // perturb
    std::string pert_in, pert_out, pert_kind = "node_breakdown", pert_mode = "bernoulli";
    double pert_p = 0.0;
    std::uint64_t pert_seed = 1;
    bool pert_iterative = false;
    CLI::App* pert = app.add_subcommand("perturb", "Apply an error model to a saved network");
    pert->add_option("--in", pert_in, "Input graph file")->required();
    pert->add_option("--out", pert_out, "Output graph file")->required();
    pert->add_option("--kind", pert_kind, "Error model")
        ->check(CLI::IsMember({"node_breakdown", "edge_breakdown", "attack_by_degree",
                               "attack_by_capacity"}));
    pert->add_option("--p", pert_p, "Error fraction in [0, 1]")->required();
    pert->add_option("--mode", pert_mode, "Random breakdown sampling mode")
        ->check(CLI::IsMember({"bernoulli", "exact_count"}));
    pert->add_option("--seed", pert_seed, "Breakdown seed (ignored by attacks)");
    pert->add_flag("--iterative", pert_iterative,
                   "Recompute attack rankings after each removal");

    // capacity
    std::string cap_in;
    int cap_source = -1, cap_target = -1;
    long long cap_pairs = 0;
    std::uint64_t cap_seed = 1;
    bool cap_giant_relation = false;
    CLI::App* cap = app.add_subcommand("capacity", "End-to-end capacities of a saved network");
    cap->add_option("--in", cap_in, "Input graph file")->required();
    cap->add_option("--source", cap_source, "Source node id");
    cap->add_option("--target", cap_target, "Target node id");
    cap->add_option("--pairs", cap_pairs, "Sample this many node pairs");
    cap->add_option("--seed", cap_seed, "Pair sampling seed");
    cap->add_flag("--giant-relation", cap_giant_relation,
                  "Also report the giant-component pair-sum decomposition");

    // analyze
    std::string an_in;
    int an_kmin = 0;
    CLI::App* an = app.add_subcommand("analyze", "Structural statistics of a saved network");
    an->add_option("--in", an_in, "Input graph file")->required();
    an->add_option("--power-law-kmin", an_kmin,
                   "Fit a power-law degree exponent for degrees >= this");

    // bounds
    ModelOptions bnd_opt;
    double bnd_p = 0.0;
    long long bnd_samples = 200000;
    std::uint64_t bnd_seed = 0x5eed;
    long long bnd_giant = -1;
    CLI::App* bnd = app.add_subcommand(
        "bounds", "Analytic capacity ceiling for a model at a given error fraction");
    add_model_options(bnd, bnd_opt);
    bnd->add_option("--p", bnd_p, "Error fraction in [0, 1]");
    bnd->add_option("--zeta-samples", bnd_samples, "Monte Carlo samples for the link integral");
    bnd->add_option("--seed", bnd_seed, "Integration seed");
    bnd->add_option("--giant-nodes", bnd_giant,
                    "Giant component size (scale_free; defaults to all nodes)");

    // sweep
    std::string sw_config, sw_out, sw_format = "csv";
    int sw_workers = 0;
    CLI::App* sw = app.add_subcommand("sweep", "Run a configured perturbation sweep");
    sw->add_option("--config", sw_config, "JSON sweep configuration")->required();
    sw->add_option("--out", sw_out, "Output records file")->required();
    sw->add_option("--format", sw_format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    sw->add_option("--workers", sw_workers, "Worker threads (0 = auto)");

    CLI11_PARSE(app, argc, argv);

    if (gen->parsed()) {
        const qnet::ChannelParams ch = channel_of(gen_opt);
        const qnet::GeoGraph g = gen_opt.model == "waxman"
                                     ? qnet::generate_waxman(waxman_of(gen_opt), ch, gen_seed)
                                     : qnet::generate_scale_free(scale_free_of(gen_opt), ch,
                                                                 gen_seed);
        qnet::save_graph(g, gen_out);
        std::cout << "model " << g.provenance.model << "\n";
        print_kv("n_nodes", static_cast<double>(g.n_nodes()));
        print_kv("n_edges", static_cast<double>(g.n_edges()));
        return 0;
    }

    if (pert->parsed()) {
        const qnet::GeoGraph g = qnet::load_graph(pert_in);
        const qnet::PerturbKind kind = kind_of(pert_kind);
        qnet::GeoGraph out;
        if (kind == qnet::PerturbKind::attack_by_degree)
            out = qnet::attack_by_degree(g, pert_p, pert_iterative);
        else if (kind == qnet::PerturbKind::attack_by_capacity)
            out = qnet::attack_by_capacity(g, pert_p, pert_iterative);
        else {
            const qnet::BreakdownMode mode = pert_mode == "exact_count"
                                                 ? qnet::BreakdownMode::exact_count
                                                 : qnet::BreakdownMode::bernoulli;
            out = kind == qnet::PerturbKind::node_breakdown
                      ? qnet::random_node_breakdown(g, pert_p, mode, pert_seed)
                      : qnet::random_edge_breakdown(g, pert_p, mode, pert_seed);
        }
        qnet::save_graph(out, pert_out);
        print_kv("n_nodes", static_cast<double>(out.n_nodes()));
        print_kv("n_edges", static_cast<double>(out.n_edges()));
        if (kind == qnet::PerturbKind::attack_by_degree ||
            kind == qnet::PerturbKind::attack_by_capacity)
            print_kv("p_eff", qnet::effective_edge_fraction(g, out));
        return 0;
    }

    if (cap->parsed()) {
        const qnet::GeoGraph g = qnet::load_graph(cap_in);
        const bool have_pair = cap_source >= 0 || cap_target >= 0;
        if (have_pair) {
            if (cap_source < 0 || cap_target < 0)
                throw qnet::data_error("--source and --target must be given together");
            print_kv("pair_capacity", qnet::min_cut(g, cap_source, cap_target));
        }
        if (cap_pairs > 0) {
            const qnet::GraphCapacitySample s =
                qnet::graph_capacity_sample(g, cap_pairs, cap_seed);
            print_kv("mean_capacity", s.mean);
            print_kv("capacity_stderr", s.pair_se);
            print_kv("n_pairs", static_cast<double>(s.n_pairs));
        }
        if (cap_giant_relation) {
            const qnet::GiantRelation rel =
                qnet::giant_capacity_relation(g, cap_pairs > 0 ? cap_pairs : 200, cap_seed);
            print_kv("pair_sum_total", rel.lhs);
            print_kv("pair_sum_giant", rel.rhs);
        }
        if (!have_pair && cap_pairs <= 0 && !cap_giant_relation)
            throw qnet::data_error("capacity: give --source/--target, --pairs, or --giant-relation");
        return 0;
    }

    if (an->parsed()) {
        const qnet::GeoGraph g = qnet::load_graph(an_in);
        print_kv("n_nodes", static_cast<double>(g.n_nodes()));
        print_kv("n_edges", static_cast<double>(g.n_edges()));
        const qnet::DegreeHistogram hist = qnet::degree_histogram(g);
        const qnet::DegreeMoments m = qnet::degree_moments(hist);
        print_kv("mean_degree", m.mean);
        print_kv("second_moment", m.second);
        try {
            print_kv("critical_probability", qnet::critical_probability(hist));
        } catch (const qnet::numeric_error& e) {
            std::cout << "critical_probability undefined (" << e.what() << ")\n";
        }
        const qnet::ComponentDecomposition comp = qnet::components(g);
        print_kv("n_components", static_cast<double>(comp.sizes.size()));
        print_kv("giant_fraction", comp.giant_fraction);
        print_kv("mean_small_component", comp.mean_small_size);
        if (an_kmin > 0) print_kv("power_law_exponent", qnet::power_law_fit(hist, an_kmin));
        return 0;
    }

    if (bnd->parsed()) {
        const qnet::ChannelParams ch = channel_of(bnd_opt);
        qnet::BoundInputs in;
        in.p = bnd_p;
        if (bnd_opt.model == "waxman") {
            const qnet::WaxmanParams wp = waxman_of(bnd_opt);
            const qnet::ZetaEstimate z = qnet::zeta_waxman(wp, ch, bnd_samples, bnd_seed);
            const double R = wp.region_half_width;
            in.rho0 = static_cast<double>(wp.n_nodes) / (4.0 * R * R);
            in.beta0 = wp.beta;
            in.zeta = z.value;
            print_kv("zeta", z.value);
            print_kv("zeta_stderr", z.stderr_);
            print_kv("bound", qnet::bound_waxman(in));
        } else {
            const qnet::ScaleFreeParams sp = scale_free_of(bnd_opt);
            const qnet::ZetaEstimate z = qnet::zeta_scale_free(sp, ch, bnd_samples, bnd_seed);
            in.m0 = sp.m0;
            in.zeta = z.value;
            const long long giant = bnd_giant >= 0 ? bnd_giant : sp.n_nodes;
            print_kv("zeta", z.value);
            print_kv("zeta_stderr", z.stderr_);
            print_kv("bound", qnet::bound_scale_free(in, sp.n_nodes, giant));
        }
        return 0;
    }

    // sweep
    const qnet::SweepConfig cfg = qnet::load_sweep_config(sw_config);
    const std::vector<qnet::SweepRecord> records = qnet::run_sweep(cfg, sw_workers);
    qnet::write_records(records, sw_out,
                        sw_format == "json" ? qnet::RecordFormat::json
                                            : qnet::RecordFormat::csv);
    long long failed = 0;
    for (const qnet::SweepRecord& r : records)
        if (!r.error.empty()) ++failed;
    std::cout << "records " << records.size() << "\n";
    std::cout << "failed " << failed << "\n";
    std::cout << "wrote " << sw_out << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const qnet::numeric_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const qnet::data_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
