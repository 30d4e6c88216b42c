#pragma once

#include <soq/soq.hpp>

namespace fixtures {

/// Three-layer tree used throughout the sampling walkthroughs: a root with
/// four children having (1, 1, 2, 2) leaf children.  x_h = x0 x1^4 x2^6.
inline soq::RootedTree walkthrough_tree() {
    return soq::parse_tree("(( () )( () )( ()() )( ()() ))");
}

/// Four-layer tree whose coheight profile is x0 x1^4 x2^6 x3^8 and whose
/// level-2 profile starts x_{x0 x1^4 x2^6 x3^8} x_{x1 x2 x3} ...
inline soq::RootedTree four_layer_tree() {
    return soq::parse_tree("("
                           "( (()) )"            // c1: chain of 3
                           "( (()()) )"          // c2: child with 2 leaves
                           "( () ( ()() ) )"     // c3: leaf child + child with 2 leaves
                           "( (()) ( ()() ) )"   // c4: chain child + child with 2 leaves
                           ")");
}

/// Vertex ids of the incomparable gap set with profiles x1 x2 x3, x2, x2 x3
/// inside four_layer_tree (the first child, the leaf grandchild, and the
/// chain grandchild of the last child).
soq::GapMultiset four_layer_gap_set(const soq::RootedTree& t);

inline soq::GapMultiset four_layer_gap_set(const soq::RootedTree& t) {
    soq::GapMultiset s;
    soq::LaurentMonomial want_c = soq::parse_monomial("x1 x2 x3");
    soq::LaurentMonomial want_leaf = soq::parse_monomial("x2");
    soq::LaurentMonomial want_chain = soq::parse_monomial("x2 x3");
    int c = -1, leaf = -1, chain = -1;
    for (int v = 0; v < t.vertex_count(); ++v) {
        auto p = soq::coheight_profile(t, v);
        if (c == -1 && p == want_c)
            c = v;
        if (p == want_leaf)
            leaf = v;
        if (p == want_chain && c != -1 && !t.is_ancestor(c, v))
            chain = v;
    }
    s.add(c);
    s.add(leaf);
    s.add(chain);
    return s;
}

/// Number of rooted trees on n unlabeled vertices, by the standard
/// recurrence (independent of the enumerator under test).
inline long long rooted_tree_count(int n) {
    static std::vector<long long> r{0, 1}; // r[1] = 1
    while (static_cast<int>(r.size()) <= n) {
        int m = static_cast<int>(r.size()) - 1; // computing r[m + 1]
        long long total = 0;
        for (int k = 1; k <= m; ++k) {
            long long weight = 0;
            for (int d = 1; d <= k; ++d)
                if (k % d == 0)
                    weight += d * r[d];
            total += weight * r[m - k + 1];
        }
        r.push_back(total / m);
    }
    return r[n];
}

} // namespace fixtures
