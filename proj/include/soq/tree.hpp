#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <random>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "monomial.hpp"

namespace soq {

/// Finite rooted tree.  Vertex ids are contiguous 0..d-1 and stable per
/// instance; children lists are storage order only.  All semantics are
/// isomorphism-invariant.
class RootedTree {
  public:
    static constexpr int no_parent = -1;

    /// Builds from a parent array; exactly one entry must be no_parent.
    explicit RootedTree(std::vector<int> parent) : parent_(std::move(parent)) {
        const int d = static_cast<int>(parent_.size());
        if (d == 0)
            throw domain_error("tree must have at least one vertex");
        root_ = no_parent;
        children_.resize(d);
        for (int v = 0; v < d; ++v) {
            int p = parent_[v];
            if (p == no_parent) {
                if (root_ != no_parent)
                    throw domain_error("tree has more than one root");
                root_ = v;
            } else if (p < 0 || p >= d) {
                throw domain_error("parent id out of range");
            } else {
                children_[p].push_back(v);
            }
        }
        if (root_ == no_parent)
            throw domain_error("tree has no root");
        compute_coheights();
    }

    int vertex_count() const { return static_cast<int>(parent_.size()); }
    int root() const { return root_; }

    int parent(int v) const {
        check_vertex(v);
        return parent_[v];
    }

    const std::vector<int>& children(int v) const {
        check_vertex(v);
        return children_[v];
    }

    /// Length of the unique path from the root to v.
    int coheight(int v) const {
        check_vertex(v);
        return coheight_[v];
    }

    /// Number of nonempty layers; layer n+1 holds the vertices of coheight n.
    int layer_count() const { return max_coheight_ + 1; }

    /// Vertices of coheight n (layer n + 1).  Empty set allowed.
    std::vector<int> layer(int n) const {
        std::vector<int> out;
        for (int v = 0; v < vertex_count(); ++v)
            if (coheight_[v] == n)
                out.push_back(v);
        return out;
    }

    /// v together with all its descendants (the subtree S_v).
    std::vector<int> subtree_vertices(int v) const {
        check_vertex(v);
        std::vector<int> out{v};
        for (size_t k = 0; k < out.size(); ++k)
            for (int c : children_[out[k]])
                out.push_back(c);
        std::sort(out.begin(), out.end());
        return out;
    }

    bool is_ancestor(int anc, int v) const {
        check_vertex(anc);
        check_vertex(v);
        while (v != no_parent) {
            if (v == anc)
                return true;
            v = parent_[v];
        }
        return false;
    }

    const std::vector<int>& parents() const { return parent_; }

  private:
    void check_vertex(int v) const {
        if (v < 0 || v >= vertex_count())
            throw domain_error("unknown vertex id");
    }

    void compute_coheights() {
        const int d = vertex_count();
        coheight_.assign(d, -1);
        coheight_[root_] = 0;
        std::vector<int> queue{root_};
        max_coheight_ = 0;
        for (size_t k = 0; k < queue.size(); ++k) {
            int v = queue[k];
            for (int c : children_[v]) {
                coheight_[c] = coheight_[v] + 1;
                max_coheight_ = std::max(max_coheight_, coheight_[c]);
                queue.push_back(c);
            }
        }
        if (queue.size() != static_cast<size_t>(d))
            throw domain_error("tree has vertices unreachable from the root");
    }

    std::vector<int> parent_;
    std::vector<std::vector<int>> children_;
    std::vector<int> coheight_;
    int root_ = no_parent;
    int max_coheight_ = 0;
};

inline int coheight(const RootedTree& t, int v) { return t.coheight(v); }

inline std::vector<int> layer(const RootedTree& t, int n) { return t.layer(n); }

inline std::vector<int> subtree_vertices(const RootedTree& t, int v) {
    return t.subtree_vertices(v);
}

/// Coheight profile of v: the product over u in S_v of x_{h_u}, with
/// coheights measured in the whole tree.
inline LaurentMonomial coheight_profile(const RootedTree& t, int v) {
    LaurentMonomial m;
    for (int u : t.subtree_vertices(v))
        m.mul_by(t.coheight(u), 1);
    return m;
}

/// Coheight profile of the whole tree (x_h).
inline LaurentMonomial coheight_profile(const RootedTree& t) {
    return coheight_profile(t, t.root());
}

// ---------------------------------------------------------------------------
// Tree text format: nested parentheses, one pair per vertex, root outermost.
// ---------------------------------------------------------------------------

inline std::string to_string(const RootedTree& t, int v) {
    std::string out = "(";
    for (int c : t.children(v))
        out += to_string(t, c);
    out += ")";
    return out;
}

inline std::string to_string(const RootedTree& t) { return to_string(t, t.root()); }

/// Parses the nested-parenthesis format; whitespace ignored.  Vertex ids are
/// assigned in the order the opening parentheses appear.
inline RootedTree parse_tree(const std::string& text) {
    std::vector<int> parent;
    std::vector<int> open_stack;
    bool seen_root = false;
    for (char ch : text) {
        if (ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r')
            continue;
        if (ch == '(') {
            if (seen_root && open_stack.empty())
                throw domain_error("tree text has trailing vertices after the root closes");
            int id = static_cast<int>(parent.size());
            parent.push_back(open_stack.empty() ? RootedTree::no_parent : open_stack.back());
            open_stack.push_back(id);
            seen_root = true;
        } else if (ch == ')') {
            if (open_stack.empty())
                throw domain_error("unbalanced ')' in tree text");
            open_stack.pop_back();
        } else {
            throw domain_error(std::string("unexpected character in tree text: '") + ch + "'");
        }
    }
    if (!open_stack.empty())
        throw domain_error("unbalanced '(' in tree text");
    if (parent.empty())
        throw domain_error("empty tree text");
    return RootedTree(std::move(parent));
}

// ---------------------------------------------------------------------------
// Canonical form and isomorphism (sorted-children encoding).
// ---------------------------------------------------------------------------

namespace detail {

inline std::string canonical_code_at(const RootedTree& t, int v) {
    std::vector<std::string> codes;
    for (int c : t.children(v))
        codes.push_back(canonical_code_at(t, c));
    std::sort(codes.begin(), codes.end());
    std::string out = "(";
    for (const auto& s : codes)
        out += s;
    out += ")";
    return out;
}

} // namespace detail

/// Equal codes iff the trees are isomorphic as rooted trees.
inline std::string canonical_code(const RootedTree& t) {
    return detail::canonical_code_at(t, t.root());
}

inline bool is_isomorphic(const RootedTree& a, const RootedTree& b) {
    return a.vertex_count() == b.vertex_count() && canonical_code(a) == canonical_code(b);
}

// ---------------------------------------------------------------------------
// Enumeration and random generation.
// ---------------------------------------------------------------------------

inline constexpr int default_enumeration_cap = 10;

/// Exactly one representative per isomorphism class of rooted trees with d
/// vertices, ordered by canonical code.
inline std::vector<RootedTree> enumerate_rooted_trees(int d, int cap = default_enumeration_cap) {
    if (d < 1)
        throw domain_error("enumerate_rooted_trees: d must be positive");
    if (d > cap)
        throw domain_error("enumerate_rooted_trees: vertex count exceeds cap");
    // grow every (d-1)-vertex representative by one leaf in all positions
    std::vector<std::vector<int>> current{{RootedTree::no_parent}};
    for (int size = 2; size <= d; ++size) {
        std::set<std::string> seen;
        std::vector<std::vector<int>> next;
        for (const auto& parents : current) {
            for (int attach = 0; attach < size - 1; ++attach) {
                std::vector<int> grown = parents;
                grown.push_back(attach);
                RootedTree t(grown);
                if (seen.insert(canonical_code(t)).second)
                    next.push_back(std::move(grown));
            }
        }
        current = std::move(next);
    }
    std::vector<RootedTree> out;
    for (auto& parents : current)
        out.emplace_back(std::move(parents));
    std::sort(out.begin(), out.end(), [](const RootedTree& a, const RootedTree& b) {
        return canonical_code(a) < canonical_code(b);
    });
    return out;
}

/// Uniform random parent-sequence attachment; deterministic for a fixed seed.
inline RootedTree random_tree(int d, std::uint64_t seed) {
    if (d < 1)
        throw domain_error("random_tree: d must be positive");
    std::mt19937_64 rng(seed);
    std::vector<int> parent{RootedTree::no_parent};
    for (int v = 1; v < d; ++v) {
        std::uniform_int_distribution<int> pick(0, v - 1);
        parent.push_back(pick(rng));
    }
    return RootedTree(std::move(parent));
}

// ---------------------------------------------------------------------------
// Nested profiles.
// ---------------------------------------------------------------------------

/// Level-N nested profile value.  Level 1 is a coheight profile; level N > 1
/// is the multiset of level-(N-1) values of the vertices of the subtree,
/// stored sorted so equality is structural.
class NestedProfile {
  public:
    explicit NestedProfile(LaurentMonomial base) : level_(1), base_(std::move(base)) {}

    NestedProfile(int level, std::vector<NestedProfile> children)
        : level_(level), children_(std::move(children)) {
        if (level_ < 2)
            throw domain_error("nested level must be >= 2 for a multiset value");
        for (const auto& c : children_)
            if (c.level() != level_ - 1)
                throw domain_error("nested profile children must sit one level down");
        sort_children();
    }

    int level() const { return level_; }

    const LaurentMonomial& base() const {
        if (level_ != 1)
            throw domain_error("base() requires a level-1 profile");
        return base_;
    }

    const std::vector<NestedProfile>& elements() const { return children_; }

    bool operator==(const NestedProfile& other) const {
        return level_ == other.level_ && base_ == other.base_ && children_ == other.children_;
    }

  private:
    void sort_children();

    int level_;
    LaurentMonomial base_; // level 1 only
    std::vector<NestedProfile> children_;
};

/// Total order on same-level nested profiles: level 1 delegates to
/// lex_compare, higher levels compare the sorted element lists
/// lexicographically.
inline std::strong_ordering nested_compare(const NestedProfile& a, const NestedProfile& b) {
    if (a.level() != b.level())
        throw domain_error("nested_compare: level mismatch");
    if (a.level() == 1)
        return lex_compare(a.base(), b.base());
    const auto& xs = a.elements();
    const auto& ys = b.elements();
    for (size_t i = 0; i < std::min(xs.size(), ys.size()); ++i) {
        auto c = nested_compare(xs[i], ys[i]);
        if (c != std::strong_ordering::equal)
            return c;
    }
    return xs.size() <=> ys.size();
}

inline void NestedProfile::sort_children() {
    std::sort(children_.begin(), children_.end(), [](const NestedProfile& a, const NestedProfile& b) {
        return nested_compare(a, b) == std::strong_ordering::less;
    });
}

namespace detail {

inline NestedProfile nested_value_at(const RootedTree& t, int v, int level) {
    if (level == 1)
        return NestedProfile(coheight_profile(t, v));
    std::vector<NestedProfile> elems;
    for (int u : t.subtree_vertices(v))
        elems.push_back(nested_value_at(t, u, level - 1));
    return NestedProfile(level, std::move(elems));
}

} // namespace detail

/// The level-N nested coheight profile of the whole tree.  Level 1 equals
/// the coheight profile at the root.
inline NestedProfile nested_profile(const RootedTree& t, int level) {
    if (level < 1)
        throw domain_error("nested_profile: level must be >= 1");
    return detail::nested_value_at(t, t.root(), level);
}

/// Shifts every base monomial down by s, re-basing a subtree's profile so it
/// reads as a standalone tree's.
inline NestedProfile rebase(const NestedProfile& p, int s = 1) {
    if (p.level() == 1)
        return NestedProfile(sigma_inverse(p.base(), s));
    std::vector<NestedProfile> elems;
    for (const auto& e : p.elements())
        elems.push_back(rebase(e, s));
    return NestedProfile(p.level(), std::move(elems));
}

/// Smallest coheight appearing anywhere in the value; identifies which layer
/// the owning vertex sits in.
inline int nested_min_index(const NestedProfile& p) {
    if (p.level() == 1)
        return p.base().min_index();
    int best = INT32_MAX;
    for (const auto& e : p.elements())
        best = std::min(best, nested_min_index(e));
    return best;
}

inline std::string to_string(const NestedProfile& p) {
    if (p.level() == 1)
        return to_string(p.base());
    std::string out;
    for (const auto& e : p.elements()) {
        if (!out.empty())
            out += ' ';
        out += "x{";
        out += to_string(e);
        out += "}";
    }
    return out.empty() ? "1" : out;
}

} // namespace soq
