#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "qnet/errors.hpp"
#include "qnet/graph.hpp"
#include "qnet/stats.hpp"

namespace qnet {

using DegreeHistogram = std::map<int, long long>;

inline DegreeHistogram degree_histogram(const GeoGraph& g) {
    DegreeHistogram h;
    for (int d : degrees(g)) ++h[d];
    return h;
}

struct DegreeMoments {
    double mean = 0.0;
    double second = 0.0;
};

inline DegreeMoments degree_moments(const DegreeHistogram& h) {
    double n = 0.0, s1 = 0.0, s2 = 0.0;
    for (const auto& [k, c] : h) {
        const double cc = static_cast<double>(c);
        n += cc;
        s1 += cc * k;
        s2 += cc * static_cast<double>(k) * k;
    }
    if (n == 0.0) throw data_error("degree_moments: empty histogram");
    return {s1 / n, s2 / n};
}

inline DegreeMoments degree_moments(const GeoGraph& g) {
    return degree_moments(degree_histogram(g));
}

// Molloy-Reed threshold for random node removal: the giant component
// survives while the removed fraction stays below this value.
inline double critical_probability(const DegreeHistogram& h) {
    const DegreeMoments m = degree_moments(h);
    if (m.mean <= 0.0) throw numeric_error("critical_probability: graph has no edges");
    const double kappa = m.second / m.mean;
    if (kappa <= 1.0)
        throw numeric_error("critical_probability: degree ratio <= 1, threshold undefined");
    return 1.0 - 1.0 / (kappa - 1.0);
}

inline double critical_probability(const GeoGraph& g) {
    return critical_probability(degree_histogram(g));
}

struct ComponentLabels {
    std::vector<int> label;       // component id per node
    std::vector<long long> size;  // size per component id
    int giant = -1;               // id of the largest component
};

inline ComponentLabels component_labels(const GeoGraph& g) {
    const int n = g.n_nodes();
    const Adjacency adj = build_adjacency(g);
    ComponentLabels out;
    out.label.assign(static_cast<std::size_t>(n), -1);
    std::vector<int> stack;
    for (int start = 0; start < n; ++start) {
        if (out.label[start] >= 0) continue;
        const int comp = static_cast<int>(out.size.size());
        long long members = 0;
        stack.push_back(start);
        out.label[start] = comp;
        while (!stack.empty()) {
            const int u = stack.back();
            stack.pop_back();
            ++members;
            for (int i = adj.offsets[u]; i < adj.offsets[u + 1]; ++i) {
                const int v = adj.neighbors[i];
                if (out.label[v] < 0) {
                    out.label[v] = comp;
                    stack.push_back(v);
                }
            }
        }
        out.size.push_back(members);
    }
    for (std::size_t c = 0; c < out.size.size(); ++c)
        if (out.giant < 0 || out.size[c] > out.size[out.giant]) out.giant = static_cast<int>(c);
    return out;
}

struct ComponentDecomposition {
    std::vector<long long> sizes; // descending
    double giant_fraction = 0.0;
    double mean_small_size = 0.0; // mean over all non-giant components
};

inline ComponentDecomposition components(const GeoGraph& g) {
    ComponentDecomposition out;
    if (g.n_nodes() == 0) return out;
    const ComponentLabels labels = component_labels(g);
    out.sizes = labels.size;
    std::sort(out.sizes.begin(), out.sizes.end(), std::greater<>());
    out.giant_fraction = static_cast<double>(out.sizes.front()) / g.n_nodes();
    if (out.sizes.size() > 1) {
        double total = 0.0;
        for (std::size_t i = 1; i < out.sizes.size(); ++i) total += static_cast<double>(out.sizes[i]);
        out.mean_small_size = total / static_cast<double>(out.sizes.size() - 1);
    }
    return out;
}

// Slope of the degree distribution tail on log-binned data (bin edges grow
// by a factor 1.5 starting at k_min). Returns the magnitude nu of the decay
// k^-nu, so decaying tails give nu > 0.
inline double power_law_fit(const DegreeHistogram& h, int k_min) {
    if (k_min < 1) throw data_error("power_law_fit: k_min must be >= 1");
    long long total = 0;
    int distinct = 0, k_max = 0;
    for (const auto& [k, c] : h) {
        if (c <= 0) continue;
        total += c;
        if (k >= k_min) {
            ++distinct;
            k_max = std::max(k_max, k);
        }
    }
    if (distinct < 5)
        throw data_error("power_law_fit: need at least 5 distinct degrees >= k_min");

    std::vector<double> log_x, log_density;
    double lo = static_cast<double>(k_min);
    while (true) {
        const int klo = std::max(static_cast<int>(std::ceil(lo)), k_min);
        if (klo > k_max) break;
        const double hi = lo * 1.5;
        int khi = static_cast<int>(std::ceil(hi)) - 1;
        khi = std::min(khi, k_max); // final bin stops at the observed maximum
        if (khi >= klo) {
            long long count = 0;
            for (auto it = h.lower_bound(klo); it != h.end() && it->first <= khi; ++it)
                count += it->second;
            if (count > 0) {
                const double width = static_cast<double>(khi - klo + 1);
                const double density =
                    static_cast<double>(count) / (static_cast<double>(total) * width);
                log_x.push_back(std::log10(std::sqrt(static_cast<double>(klo) * khi)));
                log_density.push_back(std::log10(density));
            }
        }
        lo = hi;
    }
    if (log_x.size() < 2) throw data_error("power_law_fit: fewer than 2 populated bins");
    return -linear_fit(log_x, log_density).slope;
}

} // namespace qnet
