#pragma once

#include <functional>
#include <map>
#include <vector>

#include "tree.hpp"

namespace soq {

/// Vertex coloring, one positive integer per vertex id.
struct Coloring {
    std::vector<int> color;

    int operator()(int v) const { return color.at(v); }
    bool operator==(const Coloring&) const = default;
};

/// True iff every child is colored strictly larger than its parent and all
/// colors are positive.
inline bool is_increasing(const RootedTree& t, const Coloring& f) {
    if (f.color.size() != static_cast<size_t>(t.vertex_count()))
        return false;
    for (int v = 0; v < t.vertex_count(); ++v) {
        if (f.color[v] < 1)
            return false;
        int p = t.parent(v);
        if (p != RootedTree::no_parent && f.color[p] >= f.color[v])
            return false;
    }
    return true;
}

/// Multiset of tree vertices; each copy of a vertex shifts the colors of its
/// whole subtree up by one in the coloring f_S.
struct GapMultiset {
    std::map<int, long long> counts; // vertex -> multiplicity >= 1

    long long multiplicity(int v) const {
        auto it = counts.find(v);
        return it == counts.end() ? 0 : it->second;
    }

    long long size() const {
        long long n = 0;
        for (const auto& [v, c] : counts)
            n += c;
        return n;
    }

    void add(int v, long long times = 1) {
        long long next = multiplicity(v) + times;
        if (next < 0)
            throw domain_error("gap multiset multiplicity went negative");
        if (next == 0)
            counts.erase(v);
        else
            counts[v] = next;
    }

    bool operator==(const GapMultiset&) const = default;
};

/// Text form "v^mult" pairs, vertex ids ascending, empty set written "{}".
inline std::string to_string(const GapMultiset& s) {
    if (s.counts.empty())
        return "{}";
    std::string out;
    for (const auto& [v, c] : s.counts) {
        if (!out.empty())
            out += ' ';
        out += std::to_string(v);
        if (c != 1) {
            out += '^';
            out += std::to_string(c);
        }
    }
    return out;
}

/// The coloring f_S(v) = 1 + h_v + (number of ancestors of v in S, counted
/// with multiplicity, v itself included).  Always increasing.
inline Coloring f_of_S(const RootedTree& t, const GapMultiset& s) {
    for (const auto& [v, c] : s.counts) {
        if (v < 0 || v >= t.vertex_count())
            throw domain_error("gap multiset vertex outside the host tree");
        if (c < 1)
            throw domain_error("gap multiset multiplicity must be >= 1");
    }
    Coloring f;
    f.color.resize(t.vertex_count());
    for (int v = 0; v < t.vertex_count(); ++v) {
        long long lift = 0;
        for (int a = v; a != RootedTree::no_parent; a = t.parent(a))
            lift += s.multiplicity(a);
        f.color[v] = static_cast<int>(1 + t.coheight(v) + lift);
    }
    return f;
}

/// The unique S with f_of_S(t, S) = f: v appears f(v) - f(parent) - 1 times,
/// with f(parent) = 0 for the root.  Rejects non-increasing colorings.
inline GapMultiset S_of_f(const RootedTree& t, const Coloring& f) {
    if (f.color.size() != static_cast<size_t>(t.vertex_count()))
        throw domain_error("coloring size does not match the tree");
    GapMultiset s;
    for (int v = 0; v < t.vertex_count(); ++v) {
        int p = t.parent(v);
        int base = p == RootedTree::no_parent ? 0 : f.color[p];
        long long mult = static_cast<long long>(f.color[v]) - base - 1;
        if (mult < 0 || f.color[v] < 1)
            throw domain_error("S_of_f requires an increasing coloring");
        if (mult > 0)
            s.add(v, mult);
    }
    return s;
}

/// One (vertex, elevation) entry per copy of the multiset, copies of the
/// same vertex taking consecutive elevations.  Entries are emitted in
/// ascending vertex id order.
inline std::vector<std::pair<int, long long>> elevations(const RootedTree& t,
                                                         const GapMultiset& s) {
    std::vector<std::pair<int, long long>> out;
    for (const auto& [v, mult] : s.counts) {
        long long above = 0; // copies of proper ancestors
        for (int a = t.parent(v); a != RootedTree::no_parent; a = t.parent(a))
            above += s.multiplicity(a);
        for (long long j = 0; j < mult; ++j)
            out.emplace_back(v, above + j);
    }
    return out;
}

/// Elevation of one occurrence (0-based copy index) of g in S.
inline long long elevation(const RootedTree& t, const GapMultiset& s, int g, long long copy = 0) {
    if (copy < 0 || copy >= s.multiplicity(g))
        throw domain_error("elevation: vertex occurrence not in the multiset");
    long long above = 0;
    for (int a = t.parent(g); a != RootedTree::no_parent; a = t.parent(a))
        above += s.multiplicity(a);
    return above + copy;
}

/// The profile x_f of a coloring.
inline LaurentMonomial profile_of_coloring(const RootedTree& t, const Coloring& f) {
    if (f.color.size() != static_cast<size_t>(t.vertex_count()))
        throw domain_error("coloring size does not match the tree");
    LaurentMonomial m;
    for (int v = 0; v < t.vertex_count(); ++v)
        m.mul_by(f.color[v], 1);
    return m;
}

/// The product over copies g of S of sigma^{h_S(g)}(x_h|_g).  This is the
/// quantity the derived sampling function minimizes.
inline LaurentMonomial gap_product(const RootedTree& t, const GapMultiset& s) {
    LaurentMonomial p;
    for (const auto& [v, elev] : elevations(t, s))
        p = mul(p, sigma(coheight_profile(t, v), static_cast<int>(elev)));
    return p;
}

/// Closed form x_{f_S} = sigma(x_h * tau(gap_product(S))).  Must agree with
/// profile_of_coloring(f_of_S(S)) for every S.
inline LaurentMonomial profile_by_formula(const RootedTree& t, const GapMultiset& s) {
    return sigma(mul(coheight_profile(t), tau(gap_product(t, s))));
}

/// Visits every increasing coloring with colors <= max_color exactly once,
/// in order lexicographic by vertex id.  Signals when no coloring can exist.
inline void for_each_increasing_coloring(const RootedTree& t, int max_color,
                                         const std::function<void(const Coloring&)>& visit) {
    if (max_color < t.layer_count())
        throw domain_error("max_color below the number of layers: no colorings exist");
    const int d = t.vertex_count();
    // vertex ids are processed in id order, which requires parents first
    for (int v = 0; v < d; ++v)
        if (t.parent(v) > v)
            throw domain_error("enumeration requires parent ids below child ids");
    Coloring f;
    f.color.assign(d, 0);
    auto rec = [&](auto&& self, int v) -> void {
        if (v == d) {
            visit(f);
            return;
        }
        int p = t.parent(v);
        int low = p == RootedTree::no_parent ? 1 : f.color[p] + 1;
        for (int c = low; c <= max_color; ++c) {
            f.color[v] = c;
            self(self, v + 1);
        }
    };
    rec(rec, 0);
}

inline std::vector<Coloring> enumerate_increasing_colorings(const RootedTree& t, int max_color) {
    std::vector<Coloring> out;
    for_each_increasing_coloring(t, max_color, [&](const Coloring& f) { out.push_back(f); });
    return out;
}

} // namespace soq
