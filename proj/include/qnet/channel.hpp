#pragma once

#include <cmath>
#include <numbers>

#include "qnet/errors.hpp"

namespace qnet {

struct NodeSite {
    int id = 0;
    double x = 0.0; // km
    double y = 0.0; // km
};

// Pure-loss fibre channel. gamma is the base-10 attenuation exponent per km
// (0.02 corresponds to 0.2 dB/km); min_distance floors the link length so
// that capacities stay finite for coincident sites.
struct ChannelParams {
    double gamma = 0.02;        // km^-1
    double min_distance = 0.001; // km

    void validate() const {
        if (!(gamma > 0.0)) throw data_error("channel: gamma must be positive");
        if (!(min_distance > 0.0)) throw data_error("channel: min_distance must be positive");
    }
};

inline double distance(const NodeSite& a, const NodeSite& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return std::sqrt(dx * dx + dy * dy);
}

// eta = 10^(-gamma * d), with d floored at min_distance.
inline double transmissivity(double d, const ChannelParams& ch) {
    const double eff = d < ch.min_distance ? ch.min_distance : d;
    return std::pow(10.0, -ch.gamma * eff);
}

// Two-way assisted capacity of the pure-loss channel, -log2(1 - eta).
// Short links (eta near 1) evaluate 1 - eta with expm1; long links (eta near
// 0) evaluate log(1 - eta) with log1p. Either end would otherwise round to
// zero capacity error.
inline double edge_capacity(double d, const ChannelParams& ch) {
    const double eff = d < ch.min_distance ? ch.min_distance : d;
    const double x = ch.gamma * eff * std::numbers::ln10; // -ln eta
    if (x < std::numbers::ln2) {
        return -std::log2(-std::expm1(-x));
    }
    return -std::log1p(-std::exp(-x)) / std::numbers::ln2;
}

inline double edge_capacity(const NodeSite& a, const NodeSite& b, const ChannelParams& ch) {
    return edge_capacity(distance(a, b), ch);
}

} // namespace qnet
