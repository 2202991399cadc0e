#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <unordered_set>
#include <utility>
#include <vector>

#include "qnet/analytics.hpp"
#include "qnet/errors.hpp"
#include "qnet/graph.hpp"
#include "qnet/netgen.hpp"
#include "qnet/rng.hpp"

namespace qnet {

// Dinic max-flow over an undirected graph with real-valued capacities.
// Every undirected edge becomes a pair of opposing arcs that share its
// capacity through the residual update. Arcs whose residual is at or below
// `eps` are treated as saturated, so augmentation stops once no path with
// bottleneck above `eps` remains.
class MaxFlow {
public:
    MaxFlow(int n, std::span<const std::pair<int, int>> edges, std::span<const double> caps,
            double eps = 1e-12)
        : n_(n), eps_(eps) {
        if (edges.size() != caps.size()) throw data_error("max_flow: edge/capacity size mismatch");
        const std::size_t m = edges.size();
        to_.resize(2 * m);
        base_cap_.resize(2 * m);
        edge_u_.reserve(m);
        std::vector<int> count(static_cast<std::size_t>(n) + 1, 0);
        for (std::size_t e = 0; e < m; ++e) {
            const auto [u, v] = edges[e];
            if (u < 0 || v < 0 || u >= n || v >= n || u == v)
                throw data_error("max_flow: invalid edge");
            to_[2 * e] = v;
            to_[2 * e + 1] = u;
            base_cap_[2 * e] = caps[e];
            base_cap_[2 * e + 1] = caps[e];
            edge_u_.push_back(u);
            ++count[u + 1];
            ++count[v + 1];
        }
        off_.assign(count.begin(), count.end());
        for (int u = 0; u < n; ++u) off_[u + 1] += off_[u];
        adj_arc_.resize(2 * m);
        std::vector<int> cursor(off_.begin(), off_.end() - 1);
        for (std::size_t e = 0; e < m; ++e) {
            adj_arc_[cursor[edge_u_[e]]++] = static_cast<int>(2 * e);
            adj_arc_[cursor[to_[2 * e]]++] = static_cast<int>(2 * e + 1);
        }
        cap_.resize(2 * m);
        level_.resize(static_cast<std::size_t>(n));
        it_.resize(static_cast<std::size_t>(n));
        queue_.reserve(static_cast<std::size_t>(n));
    }

    explicit MaxFlow(const GeoGraph& g, double eps = 1e-12)
        : MaxFlow(g.n_nodes(), g.edges, edge_caps(g), eps) {}

    double max_flow(int s, int t) {
        if (s < 0 || t < 0 || s >= n_ || t >= n_) throw data_error("max_flow: node out of range");
        if (s == t) throw data_error("max_flow: source equals sink");
        std::copy(base_cap_.begin(), base_cap_.end(), cap_.begin());
        s_ = s;
        t_ = t;
        double flow = 0.0;
        while (bfs(s, t)) {
            std::copy(off_.begin(), off_.end() - 1, it_.begin());
            double f;
            while ((f = dfs(s, t, std::numeric_limits<double>::infinity())) > 0.0) flow += f;
        }
        return flow;
    }

    // Capacity (in original units) of the cut found by the last run: edges
    // whose endpoints ended up on opposite sides of the residual
    // reachability set of the source.
    double last_cut_capacity() const {
        double cut = 0.0;
        for (std::size_t e = 0; e < edge_u_.size(); ++e) {
            const bool su = level_[edge_u_[e]] >= 0;
            const bool sv = level_[to_[2 * e]] >= 0;
            if (su != sv) cut += base_cap_[2 * e];
        }
        return cut;
    }

    // True for nodes on the source side of the last run's cut.
    std::vector<char> last_source_side() const {
        std::vector<char> side(static_cast<std::size_t>(n_), 0);
        for (int u = 0; u < n_; ++u) side[u] = level_[u] >= 0 ? 1 : 0;
        return side;
    }

private:
    static std::vector<double> edge_caps(const GeoGraph& g) {
        std::vector<double> caps;
        caps.reserve(g.edges.size());
        for (const auto& e : g.edges) caps.push_back(g.capacity_of(e));
        return caps;
    }

    bool bfs(int s, int t) {
        std::fill(level_.begin(), level_.end(), -1);
        queue_.clear();
        queue_.push_back(s);
        level_[s] = 0;
        for (std::size_t head = 0; head < queue_.size(); ++head) {
            const int u = queue_[head];
            for (int i = off_[u]; i < off_[u + 1]; ++i) {
                const int a = adj_arc_[i];
                const int v = to_[a];
                if (level_[v] < 0 && cap_[a] > eps_) {
                    level_[v] = level_[u] + 1;
                    queue_.push_back(v);
                }
            }
        }
        return level_[t] >= 0;
    }

    double dfs(int u, int t, double f) {
        if (u == t) return f;
        for (int& i = it_[u]; i < off_[u + 1]; ++i) {
            const int a = adj_arc_[i];
            const int v = to_[a];
            if (cap_[a] > eps_ && level_[v] == level_[u] + 1) {
                const double got = dfs(v, t, std::min(f, cap_[a]));
                if (got > 0.0) {
                    cap_[a] -= got;
                    cap_[a ^ 1] += got;
                    return got;
                }
            }
        }
        level_[u] = -1; // dead end in this phase
        return 0.0;
    }

    int n_ = 0;
    double eps_;
    int s_ = -1, t_ = -1;
    std::vector<int> to_, off_, adj_arc_, edge_u_;
    std::vector<double> base_cap_, cap_;
    std::vector<int> level_, it_;
    std::vector<int> queue_;
};

// End-to-end capacity between s and t: the minimum cut of the
// capacity-weighted graph, zero when s and t are disconnected.
inline double min_cut(const GeoGraph& g, int s, int t) {
    MaxFlow solver(g);
    return solver.max_flow(s, t);
}

inline double node_capacity(const GeoGraph& g, int x) {
    if (x < 0 || x >= g.n_nodes()) throw data_error("node_capacity: node out of range");
    double c = 0.0;
    for (const auto& [u, v] : g.edges)
        if (u == x || v == x) c += g.capacity_of(u, v);
    return c;
}

inline long long pair_count(long long n) { return n * (n - 1) / 2; }

// Distinct unordered pairs drawn from `nodes`: exhaustive when there are at
// most n_pairs of them, otherwise uniform rejection sampling without
// replacement.
inline std::vector<std::pair<int, int>> sample_pairs(std::span<const int> nodes,
                                                     long long n_pairs, RngStream& rng) {
    const long long k = static_cast<long long>(nodes.size());
    std::vector<std::pair<int, int>> pairs;
    if (k < 2 || n_pairs <= 0) return pairs;
    const long long all = pair_count(k);
    if (all <= n_pairs) {
        pairs.reserve(static_cast<std::size_t>(all));
        for (long long i = 0; i < k; ++i)
            for (long long j = i + 1; j < k; ++j)
                pairs.emplace_back(nodes[static_cast<std::size_t>(i)],
                                   nodes[static_cast<std::size_t>(j)]);
        return pairs;
    }
    pairs.reserve(static_cast<std::size_t>(n_pairs));
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(static_cast<std::size_t>(2 * n_pairs));
    while (static_cast<long long>(pairs.size()) < n_pairs) {
        std::uint64_t i = rng.below(static_cast<std::uint64_t>(k));
        std::uint64_t j = rng.below(static_cast<std::uint64_t>(k));
        if (i == j) continue;
        if (i > j) std::swap(i, j);
        const std::uint64_t key = i * static_cast<std::uint64_t>(k) + j;
        if (!seen.insert(key).second) continue;
        pairs.emplace_back(nodes[static_cast<std::size_t>(i)], nodes[static_cast<std::size_t>(j)]);
    }
    return pairs;
}

struct GraphCapacitySample {
    double mean = 0.0;
    double pair_se = 0.0; // standard error over pair values
    long long n_pairs = 0;
};

// Mean min-cut over sampled node pairs of one graph. Pairs in different
// components contribute zero without running the flow solver.
inline GraphCapacitySample graph_capacity_sample(const GeoGraph& g, long long n_pairs,
                                                 std::uint64_t seed) {
    if (g.n_nodes() < 2) throw data_error("capacity: graph has fewer than 2 nodes");
    RngStream rng(seed);
    std::vector<int> nodes(static_cast<std::size_t>(g.n_nodes()));
    for (int i = 0; i < g.n_nodes(); ++i) nodes[i] = i;
    const auto pairs = sample_pairs(nodes, n_pairs, rng);
    const ComponentLabels labels = component_labels(g);
    MaxFlow solver(g);
    std::vector<double> values;
    values.reserve(pairs.size());
    for (const auto& [s, t] : pairs) {
        if (labels.label[s] != labels.label[t]) values.push_back(0.0);
        else values.push_back(solver.max_flow(s, t));
    }
    GraphCapacitySample out;
    out.n_pairs = static_cast<long long>(values.size());
    out.mean = mean(values);
    out.pair_se = standard_error(values);
    return out;
}

struct CapacityEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;
    int n_graphs = 0;
    long long n_pairs = 0; // total pairs evaluated
};

// Ensemble mean capacity: the average of per-graph means, with the
// standard error taken over per-graph means (pair-level for a single
// graph).
inline CapacityEstimate ensemble_capacity(std::span<const GeoGraph> graphs, long long n_pairs,
                                          std::uint64_t seed) {
    if (graphs.empty()) throw data_error("ensemble_capacity: no graphs");
    if (n_pairs < 1) throw data_error("ensemble_capacity: n_pairs must be >= 1");
    std::vector<double> means;
    means.reserve(graphs.size());
    CapacityEstimate out;
    double single_se = 0.0;
    for (std::size_t i = 0; i < graphs.size(); ++i) {
        const GraphCapacitySample s =
            graph_capacity_sample(graphs[i], n_pairs, derive_seed(seed, i));
        means.push_back(s.mean);
        out.n_pairs += s.n_pairs;
        single_se = s.pair_se;
    }
    out.n_graphs = static_cast<int>(graphs.size());
    out.mean = mean(means);
    out.stderr_ = graphs.size() >= 2 ? standard_error(means) : single_se;
    return out;
}

struct GiantRelation {
    double lhs = 0.0; // mean capacity over all pairs, scaled by C(N, 2)
    double rhs = 0.0; // mean capacity over giant pairs, scaled by C(N_G, 2)
};

// Pair-capacity mass of the whole graph versus its giant component. The
// whole-graph side reuses the giant sample and adds the small-component
// contribution (cross-component pairs are exactly zero), so lhs >= rhs
// holds by construction and the gap is the small-cluster share.
inline GiantRelation giant_capacity_relation(const GeoGraph& g, long long n_pairs,
                                             std::uint64_t seed) {
    if (n_pairs < 1) throw data_error("giant_capacity_relation: n_pairs must be >= 1");
    const ComponentLabels labels = component_labels(g);
    if (labels.giant < 0 || labels.size[labels.giant] < 2)
        throw data_error("giant_capacity_relation: giant component has fewer than 2 nodes");

    RngStream rng(seed);
    MaxFlow solver(g);

    std::vector<int> giant_nodes;
    giant_nodes.reserve(static_cast<std::size_t>(labels.size[labels.giant]));
    std::vector<std::vector<int>> small_members(labels.size.size());
    for (int u = 0; u < g.n_nodes(); ++u) {
        if (labels.label[u] == labels.giant) giant_nodes.push_back(u);
        else small_members[labels.label[u]].push_back(u);
    }

    const auto giant_pairs = sample_pairs(giant_nodes, n_pairs, rng);
    double giant_sum = 0.0;
    for (const auto& [s, t] : giant_pairs) giant_sum += solver.max_flow(s, t);
    const double giant_mean = giant_pairs.empty() ? 0.0 : giant_sum / giant_pairs.size();

    GiantRelation out;
    out.rhs = giant_mean * static_cast<double>(pair_count(labels.size[labels.giant]));

    long long small_pair_total = 0;
    for (std::size_t c = 0; c < small_members.size(); ++c)
        if (static_cast<int>(c) != labels.giant)
            small_pair_total += pair_count(static_cast<long long>(small_members[c].size()));

    double small_sum = 0.0;
    if (small_pair_total > 0) {
        if (small_pair_total <= std::max<long long>(n_pairs, 2048)) {
            for (std::size_t c = 0; c < small_members.size(); ++c) {
                if (static_cast<int>(c) == labels.giant) continue;
                const auto& mem = small_members[c];
                for (std::size_t i = 0; i < mem.size(); ++i)
                    for (std::size_t j = i + 1; j < mem.size(); ++j)
                        small_sum += solver.max_flow(mem[i], mem[j]);
            }
        } else {
            // Sample with replacement: component chosen by pair mass, then
            // a uniform pair inside it.
            std::vector<long long> cum;
            std::vector<int> comp_of;
            long long acc = 0;
            for (std::size_t c = 0; c < small_members.size(); ++c) {
                if (static_cast<int>(c) == labels.giant) continue;
                const long long pc = pair_count(static_cast<long long>(small_members[c].size()));
                if (pc > 0) {
                    acc += pc;
                    cum.push_back(acc);
                    comp_of.push_back(static_cast<int>(c));
                }
            }
            double sampled = 0.0;
            for (long long i = 0; i < n_pairs; ++i) {
                const long long r = static_cast<long long>(rng.below(static_cast<std::uint64_t>(acc)));
                const std::size_t ci =
                    std::upper_bound(cum.begin(), cum.end(), r) - cum.begin();
                const auto& mem = small_members[comp_of[ci]];
                std::uint64_t a = rng.below(mem.size());
                std::uint64_t b = rng.below(mem.size());
                while (a == b) b = rng.below(mem.size());
                sampled += solver.max_flow(mem[a], mem[b]);
            }
            small_sum = sampled / static_cast<double>(n_pairs) * static_cast<double>(small_pair_total);
        }
    }
    out.lhs = out.rhs + small_sum;
    return out;
}

struct ZetaEstimate {
    double value = 0.0;
    double stderr_ = 0.0;
    long long n_samples = 0;
};

namespace detail {

// 16 equal-probability strata: the quadrant of each endpoint.
struct StratifiedPairSampler {
    double half_width;
    RngStream& rng;

    void draw(int stratum, double& x1, double& y1, double& x2, double& y2) {
        const int q1 = stratum / 4;
        const int q2 = stratum % 4;
        x1 = quadrant_coord(q1 & 1);
        y1 = quadrant_coord((q1 >> 1) & 1);
        x2 = quadrant_coord(q2 & 1);
        y2 = quadrant_coord((q2 >> 1) & 1);
    }

    double quadrant_coord(int hi) {
        const double u = rng.uniform01();
        return hi ? half_width * u : -half_width + half_width * u;
    }
};

} // namespace detail

// Mean connection-probability-weighted edge capacity over the region,
// scaled by the region area: (1/|Omega|) * integral of
// beta * exp(-d / alpha_l) * C_E(d) over site pairs. Stratified Monte
// Carlo over endpoint quadrants; units are capacity * km^2.
inline ZetaEstimate zeta_waxman(const WaxmanParams& params, const ChannelParams& channel,
                                long long n_samples, std::uint64_t seed = 0x5eedULL) {
    params.validate();
    channel.validate();
    if (n_samples < 10000) throw data_error("zeta_waxman: n_samples must be >= 10^4");
    RngStream rng(seed);
    detail::StratifiedPairSampler sampler{params.region_half_width, rng};
    const double alpha_l = params.alpha_l();
    const long long per = (n_samples + 15) / 16;
    double mean_acc = 0.0, var_acc = 0.0;
    for (int stratum = 0; stratum < 16; ++stratum) {
        double s1 = 0.0, s2 = 0.0;
        for (long long i = 0; i < per; ++i) {
            double x1, y1, x2, y2;
            sampler.draw(stratum, x1, y1, x2, y2);
            const double dx = x1 - x2, dy = y1 - y2;
            const double d = std::sqrt(dx * dx + dy * dy);
            const double f = params.beta * std::exp(-d / alpha_l) * edge_capacity(d, channel);
            s1 += f;
            s2 += f * f;
        }
        const double m = s1 / static_cast<double>(per);
        const double var = per > 1 ? (s2 - s1 * m) / static_cast<double>(per - 1) : 0.0;
        mean_acc += m / 16.0;
        var_acc += var / (16.0 * 16.0 * static_cast<double>(per));
    }
    const double area = 4.0 * params.region_half_width * params.region_half_width;
    ZetaEstimate out;
    out.value = area * mean_acc;
    out.stderr_ = area * std::sqrt(std::max(var_acc, 0.0));
    out.n_samples = per * 16;
    return out;
}

// Ratio of the distance-weighted mean edge capacity to the distance
// weight itself: E[C_E(d)/d] / E[1/d] over uniform site pairs, the 1/d
// singularity floored at min_distance. Dimensionless capacity units.
inline ZetaEstimate zeta_scale_free(const ScaleFreeParams& params, const ChannelParams& channel,
                                    long long n_samples, std::uint64_t seed = 0x5eedULL) {
    params.validate();
    channel.validate();
    if (n_samples < 10000) throw data_error("zeta_scale_free: n_samples must be >= 10^4");
    RngStream rng(seed);
    detail::StratifiedPairSampler sampler{params.region_half_width, rng};
    const long long per = (n_samples + 15) / 16;
    double mean_a = 0.0, mean_b = 0.0, var_a = 0.0, var_b = 0.0, cov_ab = 0.0;
    for (int stratum = 0; stratum < 16; ++stratum) {
        double sa = 0.0, sb = 0.0, saa = 0.0, sbb = 0.0, sab = 0.0;
        for (long long i = 0; i < per; ++i) {
            double x1, y1, x2, y2;
            sampler.draw(stratum, x1, y1, x2, y2);
            const double dx = x1 - x2, dy = y1 - y2;
            const double d = std::max(std::sqrt(dx * dx + dy * dy), channel.min_distance);
            const double a = edge_capacity(d, channel) / d;
            const double b = 1.0 / d;
            sa += a;
            sb += b;
            saa += a * a;
            sbb += b * b;
            sab += a * b;
        }
        const double n = static_cast<double>(per);
        const double ma = sa / n, mb = sb / n;
        mean_a += ma / 16.0;
        mean_b += mb / 16.0;
        if (per > 1) {
            var_a += (saa - sa * ma) / (n - 1.0) / (16.0 * 16.0 * n);
            var_b += (sbb - sb * mb) / (n - 1.0) / (16.0 * 16.0 * n);
            cov_ab += (sab - sa * mb) / (n - 1.0) / (16.0 * 16.0 * n);
        }
    }
    ZetaEstimate out;
    out.value = mean_a / mean_b;
    const double var =
        (var_a + out.value * out.value * var_b - 2.0 * out.value * cov_ab) / (mean_b * mean_b);
    out.stderr_ = std::sqrt(std::max(var, 0.0));
    out.n_samples = per * 16;
    return out;
}

struct BoundInputs {
    double rho0 = 0.0;  // intact node density, km^-2
    double beta0 = 1.0; // intact connection probability scale
    int m0 = 0;         // edges per new node (scale-free)
    double p = 0.0;     // removed fraction (or effective fraction for attacks)
    double zeta = 0.0;  // the matching zeta integral value
    double giant_fraction = 1.0;
};

// Analytic ceiling for the ensemble mean capacity of the Waxman model
// under breakdown: mean node capacity (1 - p) * zeta_W * rho0.
inline double bound_waxman(const BoundInputs& in) {
    if (in.p < 0.0 || in.p > 1.0) throw data_error("bound_waxman: p must lie in [0, 1]");
    return (1.0 - in.p) * in.zeta * in.rho0;
}

// Analytic ceiling for the scale-free model: mean node capacity
// 2 m0 (1 - p) * zeta_SF, weighted by the giant pair share.
inline double bound_scale_free(const BoundInputs& in, long long n_nodes, long long n_giant) {
    if (in.p < 0.0 || in.p > 1.0) throw data_error("bound_scale_free: p must lie in [0, 1]");
    if (n_nodes < 2) throw data_error("bound_scale_free: need at least 2 nodes");
    const double share = static_cast<double>(pair_count(n_giant)) /
                         static_cast<double>(pair_count(n_nodes));
    return 2.0 * in.m0 * (1.0 - in.p) * in.zeta * share;
}

} // namespace qnet
