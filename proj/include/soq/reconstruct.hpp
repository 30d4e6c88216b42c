#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "oracle.hpp"

namespace soq {

// ---------------------------------------------------------------------------
// Level 1: the coheight profile.
// ---------------------------------------------------------------------------

/// Reconstructs x_h from one sample: the unconstrained maximum term is the
/// shifted coheight profile.
inline LaurentMonomial reconstruct_xh(Oracle& oracle) {
    auto ans = oracle.sample(PrefixCondition(0, {0}));
    if (!ans)
        throw oracle_inconsistency("sampling function returned EMPTY on the unconstrained query");
    return sigma_inverse(*ans);
}

// ---------------------------------------------------------------------------
// Level 2: per-layer subtree profiles.
// ---------------------------------------------------------------------------

/// Reconstructs the ascending coheight profiles of the vertices of coheight
/// n, by successive division of the minimal gap products with m gaps forced
/// into the layer.
inline std::vector<LaurentMonomial> reconstruct_layer_profiles(Oracle& oracle,
                                                               const LaurentMonomial& xh, int n) {
    if (n < 1)
        throw domain_error("reconstruct_layer_profiles: n must be >= 1");
    const long long k = xh.exponent(n);
    std::vector<LaurentMonomial> profiles;
    LaurentMonomial prev;
    for (long long m = 1; m <= k; ++m) {
        std::vector<long long> exps(n + 1, 0);
        exps[n] = m;
        auto ans = sample_F_tilde(oracle, xh, PrefixCondition(n, std::move(exps)));
        if (!ans)
            throw oracle_inconsistency("EMPTY before the layer size was exhausted");
        LaurentMonomial quotient = div(*ans, prev);
        if (quotient.has_negative_exponent() || quotient.exponent(n) != 1)
            throw oracle_inconsistency("layer answers do not form a divisible chain");
        if (!profiles.empty() && lex_less(quotient, profiles.back()))
            throw oracle_inconsistency("layer profiles are not ascending");
        profiles.push_back(quotient);
        prev = *ans;
    }
    // the full layer contains everything at coheight >= n
    LaurentMonomial whole;
    for (const auto& [i, e] : xh.exponents())
        if (i >= n)
            whole.mul_by(i, e);
    if (prev != whole && k > 0)
        throw oracle_inconsistency("full-layer product does not match the coheight profile");
    return profiles;
}

/// Combines the root's profile and all per-layer profile lists into the
/// level-2 nested profile.
inline NestedProfile assemble_level2(const std::vector<std::vector<LaurentMonomial>>& per_layer) {
    std::vector<NestedProfile> elems;
    for (const auto& layer : per_layer)
        for (const auto& p : layer)
            elems.emplace_back(p);
    return NestedProfile(2, std::move(elems));
}

// ---------------------------------------------------------------------------
// Levels >= 3: position assignment by predict-and-verify.
// ---------------------------------------------------------------------------

/// Product of the full coheight profiles of a candidate set.
struct Padding {
    LaurentMonomial value;
};

/// The known lower part of one candidate set's stack: every addable element
/// not exceeding the pending profile, ascending, plus the assumed copy of
/// the pending profile which sits after all equal elements.
struct Stack {
    std::vector<LaurentMonomial> known;
    LaurentMonomial assumed;
};

/// One candidate subset in a position sweep.
struct GapCandidate {
    std::vector<int> slots;   // ascending slot ids within layer n0
    long long x_n_excess = 0; // x_n overshoot of the truncated padding vs the query base
    Padding padding;
    Stack stack;

    /// Lifted index of the assumed element: the largest m whose stack entry
    /// equals the pending profile.
    long long critical_index() const {
        return x_n_excess + static_cast<long long>(stack.known.size()) + 1;
    }

    bool is_alive(long long m) const { return m >= x_n_excess && m <= critical_index(); }

    /// The lifted partial product P(S_0) * prod of the first m - m' stack
    /// elements.  Only defined while alive.
    LaurentMonomial partial_value(long long m) const {
        LaurentMonomial v = padding.value;
        long long take = m - x_n_excess;
        for (long long i = 0; i < take && i < static_cast<long long>(stack.known.size()); ++i)
            v = mul(v, stack.known[i]);
        if (take > static_cast<long long>(stack.known.size()))
            v = mul(v, stack.assumed);
        return v;
    }

    /// Lower bound on the partial value once m has passed the critical
    /// index: unknown stack elements are at least the pending profile.
    LaurentMonomial dead_lower_bound(long long m) const {
        LaurentMonomial v = padding.value;
        for (const auto& e : stack.known)
            v = mul(v, e);
        long long extra = m - x_n_excess - static_cast<long long>(stack.known.size());
        return mul(v, pow(stack.assumed, extra));
    }
};

struct NiceResult {
    long long m = 0;
    GapCandidate candidate;
    LaurentMonomial predicted;
};

/// Assignment state of one (n0, n) pass: which layer-n slot sits under which
/// layer-n0 slot.
struct CandidateState {
    std::vector<int> position;       // per layer-n slot; -1 while pending
    std::vector<long long> assigned; // per layer-n0 slot
};

/// One position-assignment pass: fixes the coheight pair (n0, n) and places
/// every layer-n slot under a layer-n0 slot, querying the oracle only when
/// neither capacities nor symmetry force the answer.
class PositionPass {
  public:
    PositionPass(Oracle& oracle, const LaurentMonomial& xh, int n0, int n,
                 std::vector<LaurentMonomial> gprofiles, std::vector<LaurentMonomial> vprofiles,
                 std::vector<int> gclasses, std::vector<int> vclasses,
                 std::vector<std::vector<LaurentMonomial>> src)
        : oracle_(oracle), xh_(xh), n0_(n0), n_(n), gprofiles_(std::move(gprofiles)),
          vprofiles_(std::move(vprofiles)), gclasses_(std::move(gclasses)),
          vclasses_(std::move(vclasses)), src_(std::move(src)) {
        state_.position.assign(vprofiles_.size(), -1);
        state_.assigned.assign(gprofiles_.size(), 0);
    }

    const CandidateState& state() const { return state_; }

    long long remaining_capacity(int g) const {
        return gprofiles_[g].exponent(n_) - state_.assigned[g];
    }

    /// All m0-subsets of the layer-n0 slots whose truncated profile product
    /// has the forced form: equal to the truncated base below index n, with
    /// a nonnegative x_n excess.
    std::vector<std::vector<int>> candidate_sets(int m0) const {
        LaurentMonomial base = query_base(m0);
        LaurentMonomial base_trunc = truncate(base, n_ - 1);
        std::vector<std::vector<int>> out;
        std::vector<int> chosen;
        auto rec = [&](auto&& self, size_t from, const LaurentMonomial& partial) -> void {
            if (static_cast<int>(chosen.size()) == m0) {
                if (truncate(partial, n_ - 1) == base_trunc &&
                    partial.exponent(n_) >= base.exponent(n_))
                    out.push_back(chosen);
                return;
            }
            for (size_t i = from; i < gprofiles_.size(); ++i) {
                LaurentMonomial next = mul(partial, gprofiles_[i]);
                bool feasible = true;
                for (const auto& [idx, e] : next.exponents()) {
                    if (idx >= n_)
                        break;
                    if (e > base_trunc.exponent(idx)) {
                        feasible = false;
                        break;
                    }
                }
                if (feasible) {
                    chosen.push_back(static_cast<int>(i));
                    self(self, i + 1, next);
                    chosen.pop_back();
                }
            }
        };
        rec(rec, 0, LaurentMonomial::one());
        return out;
    }

    /// The stack of a candidate set, cut at the pending profile: shifted
    /// profiles of the known layer-(n-1) descendants plus the profiles of
    /// already-placed layer-n slots lying outside the set.
    Stack build_stack(const std::vector<int>& slots, const LaurentMonomial& pending) const {
        Stack s;
        s.assumed = pending;
        for (int g : slots)
            for (const auto& p : src_[g]) {
                LaurentMonomial shifted = sigma(p);
                if (!lex_less(pending, shifted))
                    s.known.push_back(shifted);
            }
        std::set<int> in_set(slots.begin(), slots.end());
        for (size_t j = 0; j < vprofiles_.size(); ++j)
            if (state_.position[j] != -1 && !in_set.contains(state_.position[j]))
                s.known.push_back(vprofiles_[j]);
        std::sort(s.known.begin(), s.known.end(), LexLess{});
        return s;
    }

    GapCandidate make_candidate(std::vector<int> slots, int m0,
                                const LaurentMonomial& pending) const {
        GapCandidate c;
        c.stack = build_stack(slots, pending);
        c.padding.value = LaurentMonomial::one();
        for (int g : slots)
            c.padding.value = mul(c.padding.value, gprofiles_[g]);
        c.x_n_excess = c.padding.value.exponent(n_) - query_base(m0).exponent(n_);
        c.slots = std::move(slots);
        return c;
    }

    /// Increments m until the minimal candidate's critical index equals m.
    /// The inner claim that the critical index never falls behind m is
    /// checked against every dropped candidate's lower bound.
    NiceResult find_nice_m(const std::vector<GapCandidate>& cands,
                           const std::vector<int>& prefer_superset_of) const {
        long long maxm = 0;
        for (const auto& c : cands)
            maxm = std::max(maxm, c.critical_index());
        for (long long m = 1; m <= maxm; ++m) {
            const GapCandidate* best = nullptr;
            LaurentMonomial best_value;
            for (const auto& c : cands) {
                if (!c.is_alive(m))
                    continue;
                LaurentMonomial v = c.partial_value(m);
                if (!best || lex_less(v, best_value) ||
                    (v == best_value && prefer(c, *best, prefer_superset_of))) {
                    best = &c;
                    best_value = std::move(v);
                }
            }
            if (!best)
                continue;
            for (const auto& c : cands)
                if (m > c.critical_index() && lex_less(c.dead_lower_bound(m), best_value))
                    throw oracle_inconsistency("minimal gap fell behind its critical index");
            if (m == best->critical_index())
                return NiceResult{m, *best, best_value};
        }
        throw oracle_inconsistency("no nice m exists for the pending vertex");
    }

    /// True iff the prediction is correct, i.e. the pending vertex is not a
    /// layer-n descendant of the predicted set.  An EMPTY answer also
    /// refutes the prediction: were the pending vertex outside the set, the
    /// predicted configuration would exist as a genuine sample.
    bool predict_and_verify(const NiceResult& nice, int m0) {
        LaurentMonomial base = query_base(m0);
        auto cond = PrefixCondition::of(base, n_);
        cond.exponents[n_] += nice.m;
        auto actual = sample_F_tilde(oracle_, xh_, cond);
        return actual && *actual == nice.predicted;
    }

    /// Runs the m0 sweep for one pending slot and returns its position.
    int assign_position(int vslot) {
        const LaurentMonomial& pending = vprofiles_[vslot];
        std::vector<int> prev;
        for (int m0 = 1; m0 <= static_cast<int>(gprofiles_.size()); ++m0) {
            std::vector<GapCandidate> cands;
            for (auto& slots : candidate_sets(m0))
                cands.push_back(make_candidate(std::move(slots), m0, pending));
            NiceResult nice = find_nice_m(cands, prev);
            if (!includes_sorted(nice.candidate.slots, prev))
                throw oracle_inconsistency("predicted sets do not nest across the sweep");
            if (!predict_and_verify(nice, m0)) {
                for (int g : nice.candidate.slots)
                    if (std::find(prev.begin(), prev.end(), g) == prev.end())
                        return g;
                throw oracle_inconsistency("failed prediction produced no new candidate");
            }
            prev = nice.candidate.slots;
        }
        throw oracle_inconsistency("every prediction was correct: the vertex has no position");
    }

    /// Assigns every layer-n slot, consulting the oracle only where needed.
    void run() {
        for (;;) {
            std::vector<int> pending;
            for (size_t v = 0; v < vprofiles_.size(); ++v)
                if (state_.position[v] == -1)
                    pending.push_back(static_cast<int>(v));
            if (pending.empty())
                return;
            bool homogeneous = true;
            for (int v : pending)
                if (vclasses_[v] != vclasses_[pending.front()])
                    homogeneous = false;
            if (homogeneous) {
                // interchangeable slots: any capacity-respecting placement
                // yields the same structure
                size_t at = 0;
                for (int v : pending) {
                    while (at < gprofiles_.size() && remaining_capacity(static_cast<int>(at)) == 0)
                        ++at;
                    if (at == gprofiles_.size())
                        throw oracle_inconsistency("layer capacities exhausted early");
                    place(v, static_cast<int>(at));
                }
                return;
            }
            int v = pending.front();
            std::vector<int> eligible;
            for (size_t g = 0; g < gprofiles_.size(); ++g)
                if (remaining_capacity(static_cast<int>(g)) > 0)
                    eligible.push_back(static_cast<int>(g));
            if (eligible.empty())
                throw oracle_inconsistency("layer capacities exhausted early");
            bool equivalent = true;
            for (int g : eligible)
                if (candidate_key(g) != candidate_key(eligible.front()))
                    equivalent = false;
            place(v, equivalent ? eligible.front() : assign_position(v));
        }
    }

  private:
    static bool includes_sorted(const std::vector<int>& super, const std::vector<int>& sub) {
        return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
    }

    bool prefer(const GapCandidate& a, const GapCandidate& b,
                const std::vector<int>& superset_of) const {
        bool asup = includes_sorted(a.slots, superset_of);
        bool bsup = includes_sorted(b.slots, superset_of);
        if (asup != bsup)
            return asup;
        return a.slots < b.slots;
    }

    LaurentMonomial query_base(int m0) const {
        LaurentMonomial base;
        for (int i = 0; i < m0; ++i)
            base = mul(base, gprofiles_[i]);
        return base;
    }

    std::tuple<int, std::vector<std::string>, std::vector<int>> candidate_key(int g) const {
        std::vector<std::string> src_key;
        for (const auto& p : src_[g])
            src_key.push_back(to_string(p));
        std::sort(src_key.begin(), src_key.end());
        std::vector<int> assigned_key;
        for (size_t v = 0; v < vprofiles_.size(); ++v)
            if (state_.position[v] == g)
                assigned_key.push_back(vclasses_[v]);
        std::sort(assigned_key.begin(), assigned_key.end());
        return {gclasses_[g], std::move(src_key), std::move(assigned_key)};
    }

    void place(int v, int g) {
        if (remaining_capacity(g) <= 0)
            throw oracle_inconsistency("position assigned beyond the candidate's capacity");
        state_.position[v] = g;
        state_.assigned[g] += 1;
    }

    Oracle& oracle_;
    const LaurentMonomial& xh_;
    int n0_, n_;
    std::vector<LaurentMonomial> gprofiles_, vprofiles_;
    std::vector<int> gclasses_, vclasses_;
    std::vector<std::vector<LaurentMonomial>> src_;
    CandidateState state_;
};

// ---------------------------------------------------------------------------
// The engine: stages of refinement over all coheight pairs.
// ---------------------------------------------------------------------------

struct ReconstructionResult {
    RootedTree tree;
    std::vector<NestedProfile> levels; // levels 1..max(1, layers - 1)
    SampleLedger ledger;
};

class ReconstructionEngine {
  public:
    explicit ReconstructionEngine(Oracle& oracle) : oracle_(oracle) {}

    const LaurentMonomial& xh() {
        if (!xh_)
            xh_ = reconstruct_xh(oracle_);
        return *xh_;
    }

    int layer_count() { return xh().max_index() + 1; }

    /// Reconstructed profiles per coheight 0..N-1; the deepest layer is
    /// forced (every vertex there is a leaf) and costs no queries.
    const std::vector<std::vector<LaurentMonomial>>& layer_profiles() {
        if (profiles_.empty()) {
            const int N = layer_count();
            profiles_.resize(N);
            profiles_[0] = {xh()};
            for (int n = 1; n + 1 < N; ++n)
                profiles_[n] = reconstruct_layer_profiles(oracle_, xh(), n);
            if (N >= 2) {
                long long k = xh().exponent(N - 1);
                profiles_[N - 1].assign(k, LaurentMonomial::variable(N - 1));
            }
        }
        return profiles_;
    }

    /// The reconstructed level-N nested profile of the hidden tree.
    NestedProfile nested(int level) {
        if (level < 1)
            throw domain_error("nested level must be >= 1");
        if (level == 1)
            return NestedProfile(xh());
        if (level == 2)
            return assemble_level2(layer_profiles());
        run_stages();
        return nested_profile(slot_tree(), level);
    }

    /// The slot tree assembled from parent positions.  Valid once positions
    /// exist; for trees of at most 2 layers it is forced by x_h.
    const RootedTree& slot_tree() {
        if (tree_)
            return *tree_;
        run_stages();
        const int N = layer_count();
        std::vector<int> offset(N, 0);
        int total = 0;
        for (int j = 0; j < N; ++j) {
            offset[j] = total;
            total += static_cast<int>(profiles_[j].size());
        }
        std::vector<int> parent(total, RootedTree::no_parent);
        for (int j = 1; j < N; ++j)
            for (size_t i = 0; i < profiles_[j].size(); ++i)
                parent[offset[j] + static_cast<int>(i)] =
                    j == 1 ? 0 : offset[j - 1] + positions_.at({j - 1, j})[i];
        tree_.emplace(std::move(parent));
        validate_slot_tree(offset);
        return *tree_;
    }

    ReconstructionResult result() {
        const int N = layer_count();
        const int level = std::max(1, N - 1);
        NestedProfile p = nested(level);
        RootedTree t = tree_from_nested_checked(p);
        std::vector<NestedProfile> levels;
        for (int k = 1; k <= level; ++k) {
            NestedProfile reconstructed = nested(k);
            if (!(nested_profile(t, k) == reconstructed))
                throw oracle_inconsistency("recomputed nested profile differs from reconstruction");
            levels.push_back(std::move(reconstructed));
        }
        return ReconstructionResult{std::move(t), std::move(levels), oracle_.ledger()};
    }

    static RootedTree tree_from_nested_checked(const NestedProfile& p);

  private:
    void run_stages() {
        if (stages_done_)
            return;
        layer_profiles();
        const int N = layer_count();
        std::vector<std::vector<int>> classes = initial_classes();
        for (int stage = 3;; ++stage) {
            positions_.clear();
            for (int n0 = 1; n0 + 1 <= N - 1; ++n0) {
                for (int n = n0 + 1; n <= N - 1; ++n) {
                    std::vector<std::vector<LaurentMonomial>> src;
                    if (n == n0 + 1) {
                        for (const auto& p : profiles_[n0])
                            src.push_back({p});
                    } else {
                        src.assign(profiles_[n0].size(), {});
                        const auto& below = positions_.at({n0, n - 1});
                        for (size_t v = 0; v < below.size(); ++v)
                            src[below[v]].push_back(profiles_[n - 1][v]);
                    }
                    PositionPass pass(oracle_, xh(), n0, n, profiles_[n0], profiles_[n],
                                      classes[n0], classes[n], std::move(src));
                    pass.run();
                    positions_[{n0, n}] = pass.state().position;
                }
            }
            auto refined = refine_classes(classes);
            if (refined == classes || stage >= std::max(3, N)) {
                final_classes_ = std::move(refined);
                break;
            }
            classes = std::move(refined);
        }
        stages_done_ = true;
    }

    std::vector<std::vector<int>> initial_classes() {
        std::vector<std::vector<int>> classes(layer_count());
        for (int j = 0; j < layer_count(); ++j) {
            classes[j].resize(profiles_[j].size());
            int next_id = 0;
            for (size_t i = 0; i < profiles_[j].size(); ++i)
                classes[j][i] = i > 0 && profiles_[j][i] == profiles_[j][i - 1]
                                    ? classes[j][i - 1]
                                    : next_id++;
        }
        return classes;
    }

    std::vector<std::vector<int>> refine_classes(const std::vector<std::vector<int>>& classes) {
        const int N = layer_count();
        std::vector<std::vector<int>> out(N);
        for (int j = 0; j < N; ++j) {
            using Key = std::pair<int, std::vector<std::pair<int, int>>>;
            std::vector<Key> keys(profiles_[j].size());
            for (size_t i = 0; i < profiles_[j].size(); ++i)
                keys[i].first = classes[j][i];
            for (int n = j + 1; n <= N - 1; ++n) {
                auto it = positions_.find({j, n});
                if (it == positions_.end())
                    continue;
                for (size_t v = 0; v < it->second.size(); ++v)
                    keys[it->second[v]].second.emplace_back(n, classes[n][v]);
            }
            for (auto& k : keys)
                std::sort(k.second.begin(), k.second.end());
            std::map<Key, int> ids;
            out[j].resize(keys.size());
            for (size_t i = 0; i < keys.size(); ++i)
                out[j][i] = ids.try_emplace(keys[i], static_cast<int>(ids.size())).first->second;
        }
        return out;
    }

    void validate_slot_tree(const std::vector<int>& offset) {
        const RootedTree& t = *tree_;
        const int N = layer_count();
        for (int j = 0; j < N; ++j)
            for (size_t i = 0; i < profiles_[j].size(); ++i)
                if (coheight_profile(t, offset[j] + static_cast<int>(i)) != profiles_[j][i])
                    throw oracle_inconsistency("slot tree contradicts a reconstructed profile");
        // every pass must agree with the parent chain up to permutations of
        // equal-identity slots: per v-class, the multiset of ancestor
        // classes claimed by the pass must match the parent chain's
        for (const auto& [pair, pos] : positions_) {
            auto [n0, n] = pair;
            std::map<int, std::multiset<int>> via_parents, via_pass;
            for (size_t v = 0; v < pos.size(); ++v) {
                int vertex = offset[n] + static_cast<int>(v);
                while (t.coheight(vertex) > n0)
                    vertex = t.parent(vertex);
                int vclass = final_classes_[n][v];
                via_parents[vclass].insert(final_classes_[n0][vertex - offset[n0]]);
                via_pass[vclass].insert(final_classes_[n0][pos[v]]);
            }
            if (via_parents != via_pass)
                throw oracle_inconsistency("pass assignments disagree across coheights");
        }
    }

    Oracle& oracle_;
    std::optional<LaurentMonomial> xh_;
    std::vector<std::vector<LaurentMonomial>> profiles_;
    std::map<std::pair<int, int>, std::vector<int>> positions_;
    std::vector<std::vector<int>> final_classes_;
    std::optional<RootedTree> tree_;
    bool stages_done_ = false;
};

// ---------------------------------------------------------------------------
// Tree assembly from a nested profile.
// ---------------------------------------------------------------------------

namespace detail {

inline void append_subtree(std::vector<int>& parent, int at, const NestedProfile& p);

/// Recursively decodes a rebased nested value: the elements whose smallest
/// coheight is 1 are the children of the root.
inline void append_children(std::vector<int>& parent, int root_id, const NestedProfile& p) {
    if (p.level() == 1) {
        const LaurentMonomial& base = p.base();
        if (base.exponent(0) != 1 || base.max_index() > 1)
            throw domain_error("level-1 profile does not encode a tree of at most 2 layers");
        for (long long i = 0; i < base.exponent(1); ++i)
            parent.push_back(root_id);
        return;
    }
    for (const auto& e : p.elements())
        if (nested_min_index(e) == 1)
            append_subtree(parent, root_id, rebase(e, 1));
}

inline void append_subtree(std::vector<int>& parent, int at, const NestedProfile& p) {
    int id = static_cast<int>(parent.size());
    parent.push_back(at);
    append_children(parent, id, p);
}

} // namespace detail

/// Rebuilds a tree from its nested profile.  The profile's level must be at
/// least the encoded layer count minus one; the result reproduces the
/// profile exactly or the input is rejected as inconsistent.
inline RootedTree tree_from_nested(const NestedProfile& p) {
    std::vector<int> parent{RootedTree::no_parent};
    detail::append_children(parent, 0, p);
    RootedTree t(std::move(parent));
    if (!(nested_profile(t, p.level()) == p))
        throw domain_error("inconsistent nested profile: children do not assemble to the parent");
    return t;
}

inline RootedTree ReconstructionEngine::tree_from_nested_checked(const NestedProfile& p) {
    return tree_from_nested(p);
}

/// The full pipeline: coheight profile, nested profiles to the needed
/// level, then the tree, with every sample recorded in the ledger.
inline ReconstructionResult reconstruct_tree(Oracle& oracle) {
    return ReconstructionEngine(oracle).result();
}

} // namespace soq
