#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qnet/channel.hpp"
#include "qnet/errors.hpp"

namespace qnet {

// How a graph came to be: generator descriptor, the seed that produced it,
// and (after node-removing perturbations) the surviving nodes' ids in the
// original generated graph. An empty original_ids means the identity map.
struct Provenance {
    std::string model;
    std::uint64_t seed = 0;
    std::vector<int> original_ids;
};

// An undirected geometric graph over sites in the square
// [-R, R]^2. Edges are stored as id pairs with u < v, sorted and unique;
// capacities are always derived from coordinates and channel parameters,
// never stored.
struct GeoGraph {
    double region_half_width = 0.0; // R, km
    std::vector<NodeSite> sites;
    std::vector<std::pair<int, int>> edges;
    ChannelParams channel;
    Provenance provenance;

    int n_nodes() const { return static_cast<int>(sites.size()); }
    long long n_edges() const { return static_cast<long long>(edges.size()); }

    double node_distance(int u, int v) const { return distance(sites[u], sites[v]); }

    double capacity_of(int u, int v) const {
        return edge_capacity(sites[u], sites[v], channel);
    }

    double capacity_of(const std::pair<int, int>& e) const {
        return capacity_of(e.first, e.second);
    }
};

// Normalizes the edge list in place (u < v, sorted, deduplicated) and
// checks ids and self-loops.
inline void finalize_edges(GeoGraph& g) {
    const int n = g.n_nodes();
    for (auto& [u, v] : g.edges) {
        if (u == v) throw data_error("graph: self-loop at node " + std::to_string(u));
        if (u < 0 || v < 0 || u >= n || v >= n)
            throw data_error("graph: edge endpoint out of range");
        if (u > v) std::swap(u, v);
    }
    std::sort(g.edges.begin(), g.edges.end());
    g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
}

// Compressed adjacency built on demand. neighbors[offsets[u]..offsets[u+1])
// are u's neighbours; edge_index gives the position of the corresponding
// edge in g.edges.
struct Adjacency {
    std::vector<int> offsets;
    std::vector<int> neighbors;
    std::vector<int> edge_index;

    int degree(int u) const { return offsets[u + 1] - offsets[u]; }
};

inline Adjacency build_adjacency(const GeoGraph& g) {
    const int n = g.n_nodes();
    Adjacency adj;
    adj.offsets.assign(static_cast<std::size_t>(n) + 1, 0);
    for (const auto& [u, v] : g.edges) {
        ++adj.offsets[u + 1];
        ++adj.offsets[v + 1];
    }
    for (int u = 0; u < n; ++u) adj.offsets[u + 1] += adj.offsets[u];
    adj.neighbors.resize(2 * g.edges.size());
    adj.edge_index.resize(2 * g.edges.size());
    std::vector<int> cursor(adj.offsets.begin(), adj.offsets.end() - 1);
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        const auto [u, v] = g.edges[e];
        adj.neighbors[cursor[u]] = v;
        adj.edge_index[cursor[u]++] = static_cast<int>(e);
        adj.neighbors[cursor[v]] = u;
        adj.edge_index[cursor[v]++] = static_cast<int>(e);
    }
    return adj;
}

inline std::vector<int> degrees(const GeoGraph& g) {
    std::vector<int> deg(g.sites.size(), 0);
    for (const auto& [u, v] : g.edges) {
        ++deg[u];
        ++deg[v];
    }
    return deg;
}

// Sum of incident edge capacities per node.
inline std::vector<double> node_capacities(const GeoGraph& g) {
    std::vector<double> cap(g.sites.size(), 0.0);
    for (const auto& [u, v] : g.edges) {
        const double c = g.capacity_of(u, v);
        cap[u] += c;
        cap[v] += c;
    }
    return cap;
}

} // namespace qnet
