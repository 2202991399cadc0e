#pragma once

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qnet/errors.hpp"
#include "qnet/graph.hpp"

namespace qnet {

// Shortest decimal form that still round-trips IEEE doubles exactly.
inline std::string fmt_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace detail {

inline double parse_double(const std::string& tok, int line, const char* field) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size() || tok.empty() || errno == ERANGE)
        throw data_error("graph file line " + std::to_string(line) + ": bad " + field +
                         " value '" + tok + "'");
    return v;
}

inline long long parse_int(const std::string& tok, int line, const char* field) {
    errno = 0;
    char* end = nullptr;
    const long long v = std::strtoll(tok.c_str(), &end, 10);
    if (end != tok.c_str() + tok.size() || tok.empty() || errno == ERANGE)
        throw data_error("graph file line " + std::to_string(line) + ": bad " + field +
                         " value '" + tok + "'");
    return v;
}

inline unsigned long long parse_u64(const std::string& tok, int line, const char* field) {
    errno = 0;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(tok.c_str(), &end, 10);
    if (end != tok.c_str() + tok.size() || tok.empty() || errno == ERANGE)
        throw data_error("graph file line " + std::to_string(line) + ": bad " + field +
                         " value '" + tok + "'");
    return v;
}

} // namespace detail

// Plain-text graph format, line oriented:
//
//   qnetgraph 1
//   model <descriptor>
//   seed <u64>
//   region_half_width <float>
//   gamma <float>
//   min_distance <float>
//   origids <id> ...          (only for perturbed graphs)
//   nodes <N>
//   <id> <x> <y>              (N lines, coordinates with 17 significant digits)
//   edges <M>
//   <u> <v>                   (M lines, u < v, sorted)
inline void save_graph(const GeoGraph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw data_error("cannot open '" + path + "' for writing");
    out << "qnetgraph 1\n";
    out << "model " << g.provenance.model << "\n";
    out << "seed " << g.provenance.seed << "\n";
    out << "region_half_width " << fmt_g17(g.region_half_width) << "\n";
    out << "gamma " << fmt_g17(g.channel.gamma) << "\n";
    out << "min_distance " << fmt_g17(g.channel.min_distance) << "\n";
    if (!g.provenance.original_ids.empty()) {
        out << "origids";
        for (int id : g.provenance.original_ids) out << ' ' << id;
        out << "\n";
    }
    out << "nodes " << g.sites.size() << "\n";
    for (const NodeSite& s : g.sites)
        out << s.id << ' ' << fmt_g17(s.x) << ' ' << fmt_g17(s.y) << "\n";
    out << "edges " << g.edges.size() << "\n";
    for (const auto& [u, v] : g.edges) out << u << ' ' << v << "\n";
    if (!out) throw data_error("write to '" + path + "' failed");
}

inline GeoGraph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open '" + path + "' for reading");
    GeoGraph g;
    std::string line;
    int lineno = 0;

    auto next_line = [&](const char* what) {
        if (!std::getline(in, line))
            throw data_error("graph file line " + std::to_string(lineno + 1) +
                             ": unexpected end of file, expected " + what);
        ++lineno;
    };
    auto split = [](const std::string& s) {
        std::vector<std::string> toks;
        std::istringstream iss(s);
        std::string t;
        while (iss >> t) toks.push_back(t);
        return toks;
    };

    next_line("header");
    if (line != "qnetgraph 1")
        throw data_error("graph file line 1: not a qnetgraph file (bad header '" + line + "')");

    bool have_nodes = false;
    while (!have_nodes) {
        next_line("a directive");
        const auto sp = line.find(' ');
        const std::string key = line.substr(0, sp);
        const std::string rest = sp == std::string::npos ? "" : line.substr(sp + 1);
        if (key == "model") {
            g.provenance.model = rest;
        } else if (key == "seed") {
            g.provenance.seed = detail::parse_u64(rest, lineno, "seed");
        } else if (key == "region_half_width") {
            g.region_half_width = detail::parse_double(rest, lineno, "region_half_width");
        } else if (key == "gamma") {
            g.channel.gamma = detail::parse_double(rest, lineno, "gamma");
        } else if (key == "min_distance") {
            g.channel.min_distance = detail::parse_double(rest, lineno, "min_distance");
        } else if (key == "origids") {
            for (const auto& tok : split(rest))
                g.provenance.original_ids.push_back(
                    static_cast<int>(detail::parse_int(tok, lineno, "origids entry")));
        } else if (key == "nodes") {
            const long long n = detail::parse_int(rest, lineno, "node count");
            if (n < 0) throw data_error("graph file line " + std::to_string(lineno) +
                                        ": negative node count");
            g.sites.reserve(static_cast<std::size_t>(n));
            for (long long i = 0; i < n; ++i) {
                next_line("a node line");
                const auto toks = split(line);
                if (toks.size() != 3)
                    throw data_error("graph file line " + std::to_string(lineno) +
                                     ": node line needs 'id x y'");
                NodeSite s;
                s.id = static_cast<int>(detail::parse_int(toks[0], lineno, "node id"));
                if (s.id != static_cast<int>(i))
                    throw data_error("graph file line " + std::to_string(lineno) +
                                     ": node id " + toks[0] + " out of order, expected " +
                                     std::to_string(i));
                s.x = detail::parse_double(toks[1], lineno, "x coordinate");
                s.y = detail::parse_double(toks[2], lineno, "y coordinate");
                g.sites.push_back(s);
            }
            have_nodes = true;
        } else {
            throw data_error("graph file line " + std::to_string(lineno) +
                             ": unknown directive '" + key + "'");
        }
    }

    next_line("edge count");
    {
        const auto toks = split(line);
        if (toks.size() != 2 || toks[0] != "edges")
            throw data_error("graph file line " + std::to_string(lineno) +
                             ": expected 'edges <count>'");
        const long long m = detail::parse_int(toks[1], lineno, "edge count");
        g.edges.reserve(static_cast<std::size_t>(m));
        for (long long e = 0; e < m; ++e) {
            next_line("an edge line");
            const auto etoks = split(line);
            if (etoks.size() != 2)
                throw data_error("graph file line " + std::to_string(lineno) +
                                 ": edge line needs 'u v'");
            const long long u = detail::parse_int(etoks[0], lineno, "edge endpoint");
            const long long v = detail::parse_int(etoks[1], lineno, "edge endpoint");
            const long long n = static_cast<long long>(g.sites.size());
            if (u < 0 || u >= n)
                throw data_error("graph file line " + std::to_string(lineno) +
                                 ": edge references unknown node id " + std::to_string(u));
            if (v < 0 || v >= n)
                throw data_error("graph file line " + std::to_string(lineno) +
                                 ": edge references unknown node id " + std::to_string(v));
            g.edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
        }
    }
    if (!g.provenance.original_ids.empty() &&
        g.provenance.original_ids.size() != g.sites.size())
        throw data_error("graph file: origids length does not match node count");
    finalize_edges(g);
    g.channel.validate();
    return g;
}

// RFC 4180 field quoting: quote when the value holds a comma, a quote or a
// line break, doubling embedded quotes.
inline std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

inline std::string json_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += "\"";
    return out;
}

} // namespace qnet
