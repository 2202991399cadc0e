#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "qnet/errors.hpp"
#include "qnet/graph.hpp"
#include "qnet/rng.hpp"
#include "qnet/stats.hpp"

namespace qnet {

inline constexpr double kDefaultAlphaL = 226.0; // km

// Region half-width R such that alpha * L = alpha_l, where L = 2*sqrt(2)*R
// is the maximal site separation in [-R, R]^2.
inline double default_region_for_alpha(double alpha, double alpha_l = kDefaultAlphaL) {
    if (!(alpha > 0.0)) throw data_error("waxman: alpha must be positive");
    return alpha_l / (2.0 * std::sqrt(2.0) * alpha);
}

struct WaxmanParams {
    int n_nodes = 0;
    double region_half_width = 0.0; // R, km
    double alpha = 0.1;
    double beta = 1.0;

    // Decay length of the connection probability, alpha * 2*sqrt(2) * R.
    double alpha_l() const { return alpha * 2.0 * std::sqrt(2.0) * region_half_width; }

    void validate() const {
        if (n_nodes < 0) throw data_error("waxman: n_nodes must be non-negative");
        if (!(region_half_width > 0.0)) throw data_error("waxman: region_half_width must be positive");
        if (!(alpha > 0.0)) throw data_error("waxman: alpha must be positive");
        if (beta < 0.0 || beta > 1.0) throw data_error("waxman: beta must lie in [0, 1]");
    }

    std::string describe() const {
        char buf[160];
        std::snprintf(buf, sizeof buf, "waxman(n=%d,R=%g,alpha=%g,beta=%g)",
                      n_nodes, region_half_width, alpha, beta);
        return buf;
    }
};

enum class DegreeUpdate {
    per_insertion, // weights use degrees frozen at the new node's arrival
    per_edge,      // weights recomputed after every accepted edge
};

struct ScaleFreeParams {
    int n_nodes = 0;
    double region_half_width = 0.0; // R, km
    int m0 = 1;                     // edges added per new node
    DegreeUpdate degree_update = DegreeUpdate::per_insertion;

    void validate() const {
        if (m0 < 1) throw data_error("scale_free: m0 must be >= 1");
        if (n_nodes < m0 + 1) throw data_error("scale_free: n_nodes must be >= m0 + 1");
        if (!(region_half_width > 0.0)) throw data_error("scale_free: region_half_width must be positive");
    }

    std::string describe() const {
        char buf[160];
        std::snprintf(buf, sizeof buf, "scale_free(n=%d,R=%g,m0=%d)",
                      n_nodes, region_half_width, m0);
        return buf;
    }
};

inline std::vector<NodeSite> draw_sites(int n, double half_width, RngStream& rng) {
    std::vector<NodeSite> sites(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        sites[i].id = i;
        sites[i].x = rng.uniform(-half_width, half_width);
        sites[i].y = rng.uniform(-half_width, half_width);
    }
    return sites;
}

// Connects each site pair independently with probability
// beta * exp(-d / alpha_l). Exposed separately so fixed coordinate sets can
// be exercised directly.
inline std::vector<std::pair<int, int>> waxman_edges_for_sites(
    const std::vector<NodeSite>& sites, double beta, double alpha_l, RngStream& rng) {
    std::vector<std::pair<int, int>> edges;
    const int n = static_cast<int>(sites.size());
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double d = distance(sites[i], sites[j]);
            const double prob = beta * std::exp(-d / alpha_l);
            if (rng.uniform01() < prob) edges.emplace_back(i, j);
        }
    }
    return edges;
}

inline GeoGraph generate_waxman(const WaxmanParams& params, const ChannelParams& channel,
                                std::uint64_t seed) {
    params.validate();
    channel.validate();
    RngStream rng(seed);
    GeoGraph g;
    g.region_half_width = params.region_half_width;
    g.channel = channel;
    g.sites = draw_sites(params.n_nodes, params.region_half_width, rng);
    g.edges = waxman_edges_for_sites(g.sites, params.beta, params.alpha_l(), rng);
    finalize_edges(g);
    g.provenance.model = params.describe();
    g.provenance.seed = seed;
    return g;
}

// Geometric preferential attachment: a complete seed clique on m0 + 1
// nodes, then each new node links to m0 distinct existing nodes chosen with
// weights degree / distance (sequential draws, chosen nodes zeroed and the
// remainder renormalized).
inline GeoGraph generate_scale_free(const ScaleFreeParams& params, const ChannelParams& channel,
                                    std::uint64_t seed) {
    params.validate();
    channel.validate();
    RngStream rng(seed);
    GeoGraph g;
    g.region_half_width = params.region_half_width;
    g.channel = channel;
    g.sites = draw_sites(params.n_nodes, params.region_half_width, rng);

    const int n = params.n_nodes;
    const int m0 = params.m0;
    std::vector<int> deg(static_cast<std::size_t>(n), 0);
    g.edges.reserve(static_cast<std::size_t>(m0) * (m0 + 1) / 2 +
                    static_cast<std::size_t>(n - m0 - 1) * m0);

    for (int i = 0; i <= m0; ++i) {
        for (int j = i + 1; j <= m0; ++j) g.edges.emplace_back(i, j);
        deg[i] = m0;
    }

    std::vector<double> weight, prefix;
    std::vector<int> chosen;
    for (int t = m0 + 1; t < n; ++t) {
        weight.assign(static_cast<std::size_t>(t), 0.0);
        for (int j = 0; j < t; ++j) {
            const double d = std::max(g.node_distance(t, j), channel.min_distance);
            weight[j] = static_cast<double>(deg[j]) / d;
        }
        chosen.clear();
        for (int k = 0; k < m0; ++k) {
            prefix.resize(weight.size());
            double acc = 0.0;
            for (std::size_t j = 0; j < weight.size(); ++j) {
                acc += weight[j];
                prefix[j] = acc;
            }
            const double r = rng.uniform01() * acc;
            const auto it = std::upper_bound(prefix.begin(), prefix.end(), r);
            int j = static_cast<int>(it - prefix.begin());
            if (j >= t) j = t - 1; // guard against r landing on the total
            g.edges.emplace_back(j, t);
            chosen.push_back(j);
            weight[j] = 0.0;
            if (params.degree_update == DegreeUpdate::per_edge) {
                ++deg[j];
                ++deg[t];
                for (int q = 0; q < t; ++q) {
                    if (weight[q] > 0.0) {
                        const double d = std::max(g.node_distance(t, q), channel.min_distance);
                        weight[q] = static_cast<double>(deg[q]) / d;
                    }
                }
            }
        }
        if (params.degree_update == DegreeUpdate::per_insertion) {
            for (int j : chosen) ++deg[j];
            deg[t] += m0;
        }
    }

    finalize_edges(g);
    g.provenance.model = params.describe();
    g.provenance.seed = seed;
    return g;
}

// Node-breakdown equivalence: removing a fraction p of nodes from a Waxman
// ensemble matches an intact ensemble with n scaled down to n(1 - p).
inline WaxmanParams reparam_waxman_nodes(WaxmanParams params, double p) {
    if (p < 0.0 || p > 1.0) throw data_error("reparam: p must lie in [0, 1]");
    params.n_nodes = static_cast<int>(round_half_even(params.n_nodes * (1.0 - p)));
    return params;
}

// Edge-breakdown equivalence: removing a fraction p of edges matches an
// intact ensemble with beta scaled down to beta(1 - p).
inline WaxmanParams reparam_waxman_edges(WaxmanParams params, double p) {
    if (p < 0.0 || p > 1.0) throw data_error("reparam: p must lie in [0, 1]");
    params.beta *= (1.0 - p);
    return params;
}

} // namespace qnet
