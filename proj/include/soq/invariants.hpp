#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "reconstruct.hpp"

namespace soq {

/// Undirected simple graph on vertices 0..d-1.
struct SimpleGraph {
    int vertex_count = 0;
    std::set<std::pair<int, int>> edges; // normalized u < v

    SimpleGraph(int d, const std::vector<std::pair<int, int>>& edge_list) : vertex_count(d) {
        for (auto [u, v] : edge_list) {
            if (u == v)
                throw domain_error("simple graph has no loops");
            if (u < 0 || v < 0 || u >= d || v >= d)
                throw domain_error("edge endpoint out of range");
            auto e = std::minmax(u, v);
            if (!edges.emplace(e.first, e.second).second)
                throw domain_error("simple graph has no multi-edges");
        }
    }

    bool adjacent(int u, int v) const {
        auto e = std::minmax(u, v);
        return edges.contains({e.first, e.second});
    }
};

/// Parses edge-list text, one "u-v" pair per line.
inline SimpleGraph parse_graph(const std::string& text) {
    std::vector<std::pair<int, int>> edge_list;
    int max_vertex = -1;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        size_t dash = line.find('-');
        if (dash == std::string::npos)
            throw domain_error("edge line must look like 'u-v': " + line);
        int u = std::stoi(line.substr(0, dash));
        int v = std::stoi(line.substr(dash + 1));
        edge_list.emplace_back(u, v);
        max_vertex = std::max({max_vertex, u, v});
    }
    return SimpleGraph(max_vertex + 1, edge_list);
}

/// Coefficients of x(x-1)^(d-1), ascending powers of x.
inline std::vector<long long> chromatic_polynomial_tree(int d) {
    if (d < 1)
        throw domain_error("chromatic_polynomial_tree: d must be positive");
    std::vector<long long> poly{0, 1}; // x
    for (int step = 1; step < d; ++step) {
        std::vector<long long> next(poly.size() + 1, 0);
        for (size_t i = 0; i < poly.size(); ++i) {
            next[i + 1] = detail::checked_add(next[i + 1], poly[i]);
            next[i] = detail::checked_add(next[i], detail::checked_mul(-1, poly[i]));
        }
        poly = std::move(next);
    }
    return poly;
}

inline long long evaluate_polynomial(const std::vector<long long>& coeffs, long long x) {
    long long acc = 0;
    for (size_t i = coeffs.size(); i-- > 0;)
        acc = detail::checked_add(detail::checked_mul(acc, x), coeffs[i]);
    return acc;
}

/// Counts proper colorings with colors in 1..d, aggregated by the sorted
/// color-usage vector.  Since the chromatic symmetric function is symmetric
/// of degree d, this is a complete fingerprint of it.
inline std::map<std::vector<int>, long long> csf_fingerprint(const SimpleGraph& g) {
    const int d = g.vertex_count;
    std::map<std::vector<int>, long long> fingerprint;
    std::vector<int> color(d, 0);
    auto rec = [&](auto&& self, int v) -> void {
        if (v == d) {
            std::vector<int> usage(d + 1, 0);
            for (int u = 0; u < d; ++u)
                usage[color[u]] += 1;
            std::vector<int> shape;
            for (int c = 1; c <= d; ++c)
                if (usage[c] > 0)
                    shape.push_back(usage[c]);
            std::sort(shape.begin(), shape.end(), std::greater<>());
            fingerprint[shape] += 1;
            return;
        }
        for (int c = 1; c <= d; ++c) {
            bool ok = true;
            for (int u = 0; u < v && ok; ++u)
                if (color[u] == c && g.adjacent(u, v))
                    ok = false;
            if (ok) {
                color[v] = c;
                self(self, v + 1);
            }
        }
    };
    rec(rec, 0);
    return fingerprint;
}

/// Two triangles sharing one vertex.
inline SimpleGraph bowtie_graph() {
    return SimpleGraph(5, {{0, 1}, {0, 2}, {1, 2}, {0, 3}, {0, 4}, {3, 4}});
}

/// The 5-vertex, 6-edge companion with the same chromatic symmetric
/// function: a complete graph on four vertices minus one edge (the kite),
/// plus a pendant vertex on one of the kite's degree-2 tips.
inline SimpleGraph dart_graph() {
    return SimpleGraph(5, {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}, {0, 4}});
}

/// Transcript positions where the reconstructions of two trees diverge.
struct SeparationWitness {
    size_t index = 0;
    std::string left, right; // transcript lines; empty when one run is exhausted
};

/// Runs both reconstructions and diffs the transcripts.  Returns the first
/// differing entry, or nothing when the trees are isomorphic.
inline std::optional<SeparationWitness> strict_order_separates(const RootedTree& t1,
                                                               const RootedTree& t2,
                                                               Backend backend = Backend::structured) {
    TreeOracle o1(t1, backend), o2(t2, backend);
    reconstruct_tree(o1);
    reconstruct_tree(o2);
    const auto& e1 = o1.ledger().entries();
    const auto& e2 = o2.ledger().entries();
    for (size_t i = 0; i < std::max(e1.size(), e2.size()); ++i) {
        std::string l = i < e1.size() ? to_string(e1[i]) : std::string{};
        std::string r = i < e2.size() ? to_string(e2[i]) : std::string{};
        if (l != r)
            return SeparationWitness{i, l, r};
    }
    return std::nullopt;
}

} // namespace soq
