#pragma once

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <string>
#include <vector>

#include "qnet/errors.hpp"
#include "qnet/graph.hpp"
#include "qnet/rng.hpp"
#include "qnet/stats.hpp"

namespace qnet {

enum class PerturbKind {
    node_breakdown,
    edge_breakdown,
    attack_by_degree,
    attack_by_capacity,
};

enum class BreakdownMode {
    bernoulli,   // each element removed independently with probability p
    exact_count, // exactly round(p * count) elements removed
};

struct Perturbation {
    PerturbKind kind = PerturbKind::node_breakdown;
    double p = 0.0;
    BreakdownMode mode = BreakdownMode::bernoulli;
};

inline const char* perturb_kind_name(PerturbKind k) {
    switch (k) {
        case PerturbKind::node_breakdown: return "node_breakdown";
        case PerturbKind::edge_breakdown: return "edge_breakdown";
        case PerturbKind::attack_by_degree: return "attack_by_degree";
        case PerturbKind::attack_by_capacity: return "attack_by_capacity";
    }
    return "?";
}

namespace detail {

inline void check_p(double p) {
    if (!(p >= 0.0) || !(p <= 1.0)) throw data_error("perturb: p must lie in [0, 1]");
}

inline std::string chain_descriptor(const GeoGraph& g, const std::string& step) {
    if (g.provenance.model.empty()) return step;
    return g.provenance.model + "+" + step;
}

// Rebuilds the graph without the flagged nodes. Survivors are re-indexed
// contiguously in id order; the mapping back to the input's original ids is
// composed into provenance.
inline GeoGraph remove_nodes(const GeoGraph& g, const std::vector<char>& removed,
                             const std::string& step) {
    const int n = g.n_nodes();
    GeoGraph out;
    out.region_half_width = g.region_half_width;
    out.channel = g.channel;
    std::vector<int> new_id(static_cast<std::size_t>(n), -1);
    out.provenance.original_ids.reserve(static_cast<std::size_t>(n));
    for (int u = 0; u < n; ++u) {
        if (removed[u]) continue;
        new_id[u] = static_cast<int>(out.sites.size());
        NodeSite s = g.sites[u];
        s.id = new_id[u];
        out.sites.push_back(s);
        out.provenance.original_ids.push_back(
            g.provenance.original_ids.empty() ? u : g.provenance.original_ids[u]);
    }
    for (const auto& [u, v] : g.edges)
        if (new_id[u] >= 0 && new_id[v] >= 0) out.edges.emplace_back(new_id[u], new_id[v]);
    finalize_edges(out);
    out.provenance.model = chain_descriptor(g, step);
    out.provenance.seed = g.provenance.seed;
    return out;
}

inline GeoGraph keep_edges(const GeoGraph& g, std::vector<std::pair<int, int>> kept,
                           const std::string& step) {
    GeoGraph out = g;
    out.edges = std::move(kept);
    finalize_edges(out);
    out.provenance.model = chain_descriptor(g, step);
    return out;
}

// Flags k uniformly chosen indices out of n.
inline std::vector<char> flag_exact(int n, long long k, RngStream& rng) {
    std::vector<int> ids(static_cast<std::size_t>(n));
    std::iota(ids.begin(), ids.end(), 0);
    rng.partial_shuffle(ids, static_cast<std::size_t>(k));
    std::vector<char> removed(static_cast<std::size_t>(n), 0);
    for (long long i = 0; i < k; ++i) removed[ids[static_cast<std::size_t>(i)]] = 1;
    return removed;
}

} // namespace detail

inline GeoGraph random_node_breakdown(const GeoGraph& g, double p, BreakdownMode mode,
                                      std::uint64_t seed) {
    detail::check_p(p);
    RngStream rng(seed);
    const int n = g.n_nodes();
    std::vector<char> removed(static_cast<std::size_t>(n), 0);
    if (mode == BreakdownMode::bernoulli) {
        for (int u = 0; u < n; ++u) removed[u] = rng.uniform01() < p ? 1 : 0;
    } else {
        removed = detail::flag_exact(n, round_half_even(p * n), rng);
    }
    char step[96];
    std::snprintf(step, sizeof step, "node_breakdown(p=%g,%s)", p,
                  mode == BreakdownMode::bernoulli ? "bernoulli" : "exact_count");
    return detail::remove_nodes(g, removed, step);
}

inline GeoGraph random_edge_breakdown(const GeoGraph& g, double p, BreakdownMode mode,
                                      std::uint64_t seed) {
    detail::check_p(p);
    RngStream rng(seed);
    const long long m = g.n_edges();
    std::vector<char> removed(static_cast<std::size_t>(m), 0);
    if (mode == BreakdownMode::bernoulli) {
        for (long long e = 0; e < m; ++e) removed[static_cast<std::size_t>(e)] = rng.uniform01() < p ? 1 : 0;
    } else {
        removed = detail::flag_exact(static_cast<int>(m), round_half_even(p * static_cast<double>(m)), rng);
    }
    std::vector<std::pair<int, int>> kept;
    kept.reserve(static_cast<std::size_t>(m));
    for (long long e = 0; e < m; ++e)
        if (!removed[static_cast<std::size_t>(e)]) kept.push_back(g.edges[static_cast<std::size_t>(e)]);
    char step[96];
    std::snprintf(step, sizeof step, "edge_breakdown(p=%g,%s)", p,
                  mode == BreakdownMode::bernoulli ? "bernoulli" : "exact_count");
    return detail::keep_edges(g, std::move(kept), step);
}

namespace detail {

// Removes round(p * N) nodes ranked by the given score, highest first,
// ties to the smaller id. The one-shot variant ranks once on the intact
// graph; the iterative variant re-scores after every removal.
template <typename ScoreFn>
GeoGraph attack_by_score(const GeoGraph& g, double p, bool iterative, ScoreFn&& score,
                         const char* step_name) {
    check_p(p);
    const int n = g.n_nodes();
    const long long k = round_half_even(p * n);
    std::vector<char> removed(static_cast<std::size_t>(n), 0);
    if (!iterative) {
        const std::vector<double> s = score(g, removed);
        std::vector<int> order(static_cast<std::size_t>(n));
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            if (s[a] != s[b]) return s[a] > s[b];
            return a < b;
        });
        for (long long i = 0; i < k && i < n; ++i) removed[order[static_cast<std::size_t>(i)]] = 1;
    } else {
        for (long long i = 0; i < k && i < n; ++i) {
            const std::vector<double> s = score(g, removed);
            int best = -1;
            for (int u = 0; u < n; ++u) {
                if (removed[u]) continue;
                if (best < 0 || s[u] > s[best]) best = u;
            }
            removed[best] = 1;
        }
    }
    char step[96];
    std::snprintf(step, sizeof step, "%s(p=%g%s)", step_name, p, iterative ? ",iterative" : "");
    return remove_nodes(g, removed, step);
}

} // namespace detail

inline GeoGraph attack_by_degree(const GeoGraph& g, double p, bool iterative = false) {
    return detail::attack_by_score(
        g, p, iterative,
        [](const GeoGraph& gg, const std::vector<char>& removed) {
            std::vector<double> s(gg.sites.size(), 0.0);
            for (const auto& [u, v] : gg.edges) {
                if (removed[u] || removed[v]) continue;
                s[u] += 1.0;
                s[v] += 1.0;
            }
            return s;
        },
        "attack_by_degree");
}

inline GeoGraph attack_by_capacity(const GeoGraph& g, double p, bool iterative = false) {
    return detail::attack_by_score(
        g, p, iterative,
        [](const GeoGraph& gg, const std::vector<char>& removed) {
            std::vector<double> s(gg.sites.size(), 0.0);
            for (const auto& [u, v] : gg.edges) {
                if (removed[u] || removed[v]) continue;
                const double c = gg.capacity_of(u, v);
                s[u] += c;
                s[v] += c;
            }
            return s;
        },
        "attack_by_capacity");
}

// Fraction of the intact graph's edges lost to an attack; lets targeted
// removals be compared against random edge breakdown at equal damage.
inline double effective_edge_fraction(const GeoGraph& g0, const GeoGraph& g_attacked) {
    if (g0.n_edges() == 0)
        throw data_error("effective_edge_fraction: intact graph has no edges");
    const double f = 1.0 - static_cast<double>(g_attacked.n_edges()) /
                               static_cast<double>(g0.n_edges());
    return f;
}

inline GeoGraph apply_perturbation(const GeoGraph& g, const Perturbation& pert,
                                   std::uint64_t seed) {
    switch (pert.kind) {
        case PerturbKind::node_breakdown:
            return random_node_breakdown(g, pert.p, pert.mode, seed);
        case PerturbKind::edge_breakdown:
            return random_edge_breakdown(g, pert.p, pert.mode, seed);
        case PerturbKind::attack_by_degree:
            return attack_by_degree(g, pert.p);
        case PerturbKind::attack_by_capacity:
            return attack_by_capacity(g, pert.p);
    }
    throw data_error("perturb: unknown kind");
}

} // namespace qnet
