#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coloring.hpp"
#include "tree.hpp"

namespace soq {

/// Bounded view of the strict order quasisymmetric function: every term
/// produced by an increasing coloring with colors <= max_color, with its
/// coloring count as coefficient.
struct TermTable {
    int max_color = 0;
    long long coloring_count = 0;
    std::map<LaurentMonomial, long long, LexLess> terms;

    long long coefficient(const LaurentMonomial& m) const {
        auto it = terms.find(m);
        return it == terms.end() ? 0 : it->second;
    }
};

inline TermTable build_term_table(const RootedTree& t, int max_color) {
    TermTable table;
    table.max_color = max_color;
    for_each_increasing_coloring(t, max_color, [&](const Coloring& f) {
        table.terms[profile_of_coloring(t, f)] += 1;
        table.coloring_count += 1;
    });
    return table;
}

/// The default brute-force color bound: large enough for every term the
/// reconstruction procedure selects (guarded by tests, not proof).
inline int brute_color_bound(const RootedTree& t) {
    return t.vertex_count() + t.layer_count();
}

// ---------------------------------------------------------------------------
// Sample ledger.
// ---------------------------------------------------------------------------

struct SampleEntry {
    PrefixCondition query;
    std::optional<LaurentMonomial> answer;    // nullopt encodes EMPTY
    std::string backend;
    std::optional<LaurentMonomial> recovered; // derived-function value, when applicable
};

inline std::string to_string(const SampleEntry& e) {
    return "Q " + to_string(e.query) + " => A " + (e.answer ? to_string(*e.answer) : "EMPTY");
}

/// Ordered record of every sample drawn during one reconstruction run.
class SampleLedger {
  public:
    void append(SampleEntry e) { entries_.push_back(std::move(e)); }

    const std::vector<SampleEntry>& entries() const { return entries_; }
    size_t size() const { return entries_.size(); }

    void annotate_last(LaurentMonomial recovered) {
        if (!entries_.empty() && !entries_.back().recovered)
            entries_.back().recovered = std::move(recovered);
    }

    std::string transcript() const {
        std::string out;
        for (const auto& e : entries_) {
            out += to_string(e);
            out += '\n';
        }
        return out;
    }

  private:
    std::vector<SampleEntry> entries_;
};

struct LedgerReport {
    size_t query_count = 0;
    size_t distinct_terms = 0;
    std::string transcript;
};

inline LedgerReport ledger_report(const SampleLedger& l) {
    LedgerReport r;
    r.query_count = l.size();
    std::set<std::string> seen;
    for (const auto& e : l.entries())
        if (e.answer)
            seen.insert(to_string(*e.answer));
    r.distinct_terms = seen.size();
    r.transcript = l.transcript();
    return r;
}

// ---------------------------------------------------------------------------
// Structured backend: minimize the gap product over multisets S consistent
// with pinned exponents, instead of scanning a term table.
// ---------------------------------------------------------------------------

namespace detail {

/// Finds min over gap multisets S of gap_product(S) subject to the product
/// matching `pinned` exactly on indices 0..pinned.bound.  Returns nullopt if
/// no multiset matches.
class GapProductMinimizer {
  public:
    GapProductMinimizer(const RootedTree& t, PrefixCondition pinned)
        : tree_(t), pinned_(std::move(pinned)) {
        const int d = t.vertex_count();
        profiles_.reserve(d);
        for (int v = 0; v < d; ++v)
            profiles_.push_back(coheight_profile(t, v));
        // parents before children
        order_.push_back(t.root());
        for (size_t k = 0; k < order_.size(); ++k)
            for (int c : t.children(order_[k]))
                order_.push_back(c);
        lift_.assign(d, 0);
        mult_.assign(d, 0);
    }

    std::optional<LaurentMonomial> run() {
        budget_ = 0;
        for (int i = 0; i <= pinned_.bound; ++i) {
            if (pinned_.exponents[i] < 0)
                return std::nullopt;
            budget_ += pinned_.exponents[i];
        }
        best_.reset();
        current_ = LaurentMonomial::one();
        descend(0);
        return best_;
    }

  private:
    // how many copies of v may still matter: each copy must land a
    // contribution at index lift + j + h_v <= bound
    long long max_useful_mult(int v, long long lift) const {
        long long room = static_cast<long long>(pinned_.bound) - tree_.coheight(v) - lift + 1;
        return std::max<long long>(0, room);
    }

    bool exceeds_pin(const LaurentMonomial& m) const {
        for (const auto& [i, e] : m.exponents()) {
            if (i > pinned_.bound)
                break;
            if (e > pinned_.exponents[i])
                return true;
        }
        return false;
    }

    void descend(size_t pos) {
        if (best_ && lex_compare(current_, *best_) != std::strong_ordering::less)
            return;
        if (pos == order_.size()) {
            if (budget_ == 0)
                best_ = current_;
            return;
        }
        int v = order_[pos];
        long long lift = 0;
        if (int p = tree_.parent(v); p != RootedTree::no_parent)
            lift = lift_[p] + mult_[p];
        lift_[v] = lift;

        // mult = 0 first: smaller products come first
        mult_[v] = 0;
        descend(pos + 1);

        LaurentMonomial saved = current_;
        long long saved_budget = budget_;
        long long cap = std::min(max_useful_mult(v, lift), saved_budget);
        for (long long j = 0; j < cap; ++j) {
            LaurentMonomial contribution = sigma(profiles_[v], static_cast<int>(lift + j));
            // contribution at indices <= bound must not overshoot the pins
            long long spent = 0;
            bool bad = false;
            LaurentMonomial merged = mul(current_, contribution);
            for (const auto& [i, e] : merged.exponents()) {
                if (i > pinned_.bound)
                    break;
                if (e > pinned_.exponents[i]) {
                    bad = true;
                    break;
                }
            }
            for (const auto& [i, e] : contribution.exponents()) {
                if (i > pinned_.bound)
                    break;
                spent += e;
            }
            if (bad || spent > budget_)
                break;
            current_ = std::move(merged);
            budget_ -= spent;
            mult_[v] = j + 1;
            descend(pos + 1);
        }
        current_ = std::move(saved);
        budget_ = saved_budget;
        mult_[v] = 0;
    }

    const RootedTree& tree_;
    PrefixCondition pinned_;
    std::vector<LaurentMonomial> profiles_;
    std::vector<int> order_;
    std::vector<long long> lift_;
    std::vector<long long> mult_;
    LaurentMonomial current_;
    long long budget_ = 0;
    std::optional<LaurentMonomial> best_;
};

inline std::optional<LaurentMonomial> minimize_gap_product(const RootedTree& t,
                                                           const PrefixCondition& pinned) {
    return GapProductMinimizer(t, pinned).run();
}

/// Translates an F query on x_f exponents into the pinned exponents of the
/// gap product: pinning x_f at 1..n pins the product at 0..n-1.
inline std::optional<PrefixCondition> f_query_to_gap_pins(const RootedTree& t,
                                                          const PrefixCondition& q) {
    if (q.exponent(0) != 0)
        return std::nullopt; // no term carries x_0
    LaurentMonomial xh = coheight_profile(t);
    std::vector<long long> pins;
    long long acc = 0;
    for (int j = 0; j + 1 <= q.bound; ++j) {
        acc += xh.exponent(j) - q.exponent(j + 1);
        if (acc < 0)
            return std::nullopt;
        pins.push_back(acc);
    }
    return PrefixCondition(q.bound - 1, std::move(pins));
}

} // namespace detail

enum class Backend { brute, structured, both };

inline std::string to_string(Backend b) {
    switch (b) {
    case Backend::brute: return "brute";
    case Backend::structured: return "structured";
    default: return "both";
    }
}

// ---------------------------------------------------------------------------
// The sampling function F.
// ---------------------------------------------------------------------------

/// F of the query prefix: the lexicographically greatest term of the strict
/// order quasisymmetric function matching the prefix exactly, or EMPTY.
inline std::optional<LaurentMonomial> sample_F(const RootedTree& t, const PrefixCondition& q,
                                               Backend backend = Backend::structured,
                                               const TermTable* table = nullptr) {
    auto brute = [&]() -> std::optional<LaurentMonomial> {
        TermTable local;
        const TermTable* tbl = table;
        if (!tbl) {
            // per-query sufficient bound: every gap consumes one pinned unit,
            // and each gap raises colors by at most one
            LaurentMonomial xh = coheight_profile(t);
            long long acc = 0, gap_budget = 0;
            for (int j = 0; j + 1 <= q.bound; ++j) {
                acc += xh.exponent(j) - q.exponent(j + 1);
                gap_budget += std::max<long long>(acc, 0);
            }
            int bound = static_cast<int>(t.layer_count() + gap_budget + 1);
            local = build_term_table(t, std::max(bound, t.layer_count()));
            tbl = &local;
        }
        std::optional<LaurentMonomial> best;
        for (const auto& [term, coeff] : tbl->terms)
            if (matches_prefix(term, q))
                best = term; // map is lex ascending, the last match wins
        return best;
    };
    auto structured = [&]() -> std::optional<LaurentMonomial> {
        auto pins = detail::f_query_to_gap_pins(t, q);
        if (!pins)
            return std::nullopt;
        auto p = detail::minimize_gap_product(t, *pins);
        if (!p)
            return std::nullopt;
        return sigma(mul(coheight_profile(t), tau(*p)));
    };
    switch (backend) {
    case Backend::brute:
        return brute();
    case Backend::structured:
        return structured();
    case Backend::both: {
        auto a = brute();
        auto b = structured();
        if (a != b)
            throw oracle_inconsistency("brute and structured backends disagree on query '" +
                                       to_string(q) + "'");
        return a;
    }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Oracle objects: memoized, ledger-recording access to F.
// ---------------------------------------------------------------------------

class Oracle {
  public:
    virtual ~Oracle() = default;

    std::optional<LaurentMonomial> sample(const PrefixCondition& q) {
        auto key = std::make_pair(q.bound, q.exponents);
        auto it = memo_.find(key);
        if (it != memo_.end())
            return it->second;
        auto ans = evaluate(q);
        memo_.emplace(std::move(key), ans);
        ledger_.append(SampleEntry{q, ans, backend_name(), std::nullopt});
        return ans;
    }

    SampleLedger& ledger() { return ledger_; }
    const SampleLedger& ledger() const { return ledger_; }

  protected:
    virtual std::optional<LaurentMonomial> evaluate(const PrefixCondition& q) = 0;
    virtual std::string backend_name() const = 0;

  private:
    SampleLedger ledger_;
    std::map<std::pair<int, std::vector<long long>>, std::optional<LaurentMonomial>> memo_;
};

/// Oracle backed by a live tree.
class TreeOracle : public Oracle {
  public:
    explicit TreeOracle(RootedTree t, Backend backend = Backend::structured)
        : tree_(std::move(t)), backend_(backend) {}

    const RootedTree& tree() const { return tree_; }

  protected:
    std::optional<LaurentMonomial> evaluate(const PrefixCondition& q) override {
        if ((backend_ == Backend::brute || backend_ == Backend::both) && !table_) {
            table_.emplace(build_term_table(tree_, brute_color_bound(tree_)));
        }
        return sample_F(tree_, q, backend_, table_ ? &*table_ : nullptr);
    }

    std::string backend_name() const override { return to_string(backend_); }

  private:
    RootedTree tree_;
    Backend backend_;
    std::optional<TermTable> table_;
};

/// Oracle that replays a recorded transcript; queries outside the record are
/// inconsistencies.
class ReplayOracle : public Oracle {
  public:
    explicit ReplayOracle(const std::vector<SampleEntry>& entries) {
        for (const auto& e : entries)
            answers_[std::make_pair(e.query.bound, e.query.exponents)] = e.answer;
    }

  protected:
    std::optional<LaurentMonomial> evaluate(const PrefixCondition& q) override {
        auto it = answers_.find(std::make_pair(q.bound, q.exponents));
        if (it == answers_.end())
            throw oracle_inconsistency("transcript does not cover query '" + to_string(q) + "'");
        return it->second;
    }

    std::string backend_name() const override { return "replay"; }

  private:
    std::map<std::pair<int, std::vector<long long>>, std::optional<LaurentMonomial>> answers_;
};

/// Parses a transcript produced by SampleLedger::transcript().
inline std::vector<SampleEntry> parse_transcript(const std::string& text) {
    std::vector<SampleEntry> out;
    size_t pos = 0;
    while (pos < text.size()) {
        size_t eol = text.find('\n', pos);
        std::string line = text.substr(pos, eol == std::string::npos ? std::string::npos : eol - pos);
        pos = eol == std::string::npos ? text.size() : eol + 1;
        if (line.empty())
            continue;
        if (line.rfind("Q ", 0) != 0)
            throw domain_error("transcript line must start with 'Q ': " + line);
        size_t sep = line.find(" => A ");
        if (sep == std::string::npos)
            throw domain_error("transcript line missing ' => A ': " + line);
        SampleEntry e;
        e.query = parse_query(line.substr(2, sep - 2));
        std::string ans = line.substr(sep + 6);
        if (ans != "EMPTY")
            e.answer = parse_monomial(ans);
        e.backend = "replay";
        out.push_back(std::move(e));
    }
    return out;
}

// ---------------------------------------------------------------------------
// The derived sampling function F~.
// ---------------------------------------------------------------------------

/// F~ of a prefix condition on the gap product (indices 0..n): the minimal
/// gap product matching the pins, recovered through one F query.  Requires
/// the coheight profile, which the caller reconstructs first.
inline std::optional<LaurentMonomial> sample_F_tilde(Oracle& oracle, const LaurentMonomial& xh,
                                                     const PrefixCondition& q) {
    for (long long e : q.exponents)
        if (e < 0)
            return std::nullopt;
    // F query at sigma(phi_n(x_h) tau(prod x_i^{e_i})), truncated to n
    std::vector<long long> exps{0};
    bool feasible = true;
    for (int i = 1; i <= q.bound + 1; ++i) {
        long long e = xh.exponent(i - 1) + q.exponent(i - 2) - q.exponent(i - 1);
        if (e < 0)
            feasible = false;
        exps.push_back(e);
    }
    if (!feasible)
        return std::nullopt;
    PrefixCondition fq(q.bound + 1, std::move(exps));
    auto ans = oracle.sample(fq);
    if (!ans)
        return std::nullopt;
    LaurentMonomial recovered;
    try {
        recovered = tau_inverse(div(sigma_inverse(*ans), xh));
    } catch (const domain_error& err) {
        throw oracle_inconsistency(std::string("malformed oracle answer: ") + err.what());
    }
    oracle.ledger().annotate_last(recovered);
    return recovered;
}

} // namespace soq
