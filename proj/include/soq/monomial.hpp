#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace soq {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Input that violates an operation's precondition (bad parse, bad domain).
struct domain_error : error {
    using error::error;
};

/// The reconstruction procedure received an answer no genuine strict order
/// quasisymmetric function could produce.
struct oracle_inconsistency : error {
    using error::error;
};

namespace detail {

inline long long checked_add(long long a, long long b) {
    long long r;
    if (__builtin_add_overflow(a, b, &r))
        throw error("integer overflow in exponent arithmetic");
    return r;
}

inline long long checked_mul(long long a, long long b) {
    long long r;
    if (__builtin_mul_overflow(a, b, &r))
        throw error("integer overflow in exponent arithmetic");
    return r;
}

} // namespace detail

/// Element of the multiplicative group generated by indeterminates
/// x_0, x_1, x_2, ...  Exponents may be negative.  The map never stores a
/// zero exponent, so structural equality is group equality.
class LaurentMonomial {
  public:
    using exponent_map = std::map<int, long long>;

    LaurentMonomial() = default;

    explicit LaurentMonomial(exponent_map exps) : exps_(std::move(exps)) {
        for (auto it = exps_.begin(); it != exps_.end();) {
            if (it->first < 0)
                throw domain_error("negative indeterminate index");
            it = it->second == 0 ? exps_.erase(it) : std::next(it);
        }
    }

    /// The single indeterminate x_index.
    static LaurentMonomial variable(int index, long long exponent = 1) {
        LaurentMonomial m;
        if (exponent != 0) {
            if (index < 0)
                throw domain_error("negative indeterminate index");
            m.exps_[index] = exponent;
        }
        return m;
    }

    static LaurentMonomial one() { return LaurentMonomial{}; }

    bool is_one() const { return exps_.empty(); }

    long long exponent(int index) const {
        auto it = exps_.find(index);
        return it == exps_.end() ? 0 : it->second;
    }

    const exponent_map& exponents() const { return exps_; }

    /// Smallest index with nonzero exponent; -1 for the identity.
    int min_index() const { return exps_.empty() ? -1 : exps_.begin()->first; }

    /// Largest index with nonzero exponent; -1 for the identity.
    int max_index() const { return exps_.empty() ? -1 : exps_.rbegin()->first; }

    bool has_negative_exponent() const {
        for (const auto& [i, e] : exps_)
            if (e < 0)
                return true;
        return false;
    }

    /// Sum of all exponents.
    long long degree() const {
        long long d = 0;
        for (const auto& [i, e] : exps_)
            d = detail::checked_add(d, e);
        return d;
    }

    bool operator==(const LaurentMonomial& other) const = default;

    void mul_by(int index, long long exponent) {
        if (exponent == 0)
            return;
        auto [it, inserted] = exps_.try_emplace(index, exponent);
        if (!inserted) {
            it->second = detail::checked_add(it->second, exponent);
            if (it->second == 0)
                exps_.erase(it);
        }
    }

  private:
    exponent_map exps_;
};

/// Lexicographic comparison of exponent tuples (e_0, e_1, ...): the first
/// index where the exponents differ decides, larger exponent wins.
inline std::strong_ordering lex_compare(const LaurentMonomial& a, const LaurentMonomial& b) {
    auto ia = a.exponents().begin(), ea = a.exponents().end();
    auto ib = b.exponents().begin(), eb = b.exponents().end();
    while (ia != ea || ib != eb) {
        int idx_a = ia != ea ? ia->first : INT32_MAX;
        int idx_b = ib != eb ? ib->first : INT32_MAX;
        if (idx_a == idx_b) {
            if (ia->second != ib->second)
                return ia->second < ib->second ? std::strong_ordering::less
                                               : std::strong_ordering::greater;
            ++ia, ++ib;
        } else if (idx_a < idx_b) {
            // b has exponent 0 at idx_a
            if (ia->second != 0)
                return ia->second < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
            ++ia;
        } else {
            if (ib->second != 0)
                return ib->second > 0 ? std::strong_ordering::less : std::strong_ordering::greater;
            ++ib;
        }
    }
    return std::strong_ordering::equal;
}

inline bool lex_less(const LaurentMonomial& a, const LaurentMonomial& b) {
    return lex_compare(a, b) == std::strong_ordering::less;
}

/// Strict-weak-order functor so monomials can key ordered containers.
struct LexLess {
    bool operator()(const LaurentMonomial& a, const LaurentMonomial& b) const {
        return lex_less(a, b);
    }
};

inline LaurentMonomial mul(const LaurentMonomial& a, const LaurentMonomial& b) {
    LaurentMonomial r = a;
    for (const auto& [i, e] : b.exponents())
        r.mul_by(i, e);
    return r;
}

inline LaurentMonomial div(const LaurentMonomial& a, const LaurentMonomial& b) {
    LaurentMonomial r = a;
    for (const auto& [i, e] : b.exponents())
        r.mul_by(i, -e);
    return r;
}

inline LaurentMonomial pow(const LaurentMonomial& m, long long k) {
    LaurentMonomial r;
    for (const auto& [i, e] : m.exponents())
        r.mul_by(i, detail::checked_mul(e, k));
    return r;
}

/// Shift function: moves every exponent from index i to index i + s.
inline LaurentMonomial sigma(const LaurentMonomial& m, int s = 1) {
    if (s < 0)
        throw domain_error("sigma: negative shift");
    LaurentMonomial::exponent_map out;
    for (const auto& [i, e] : m.exponents())
        out.emplace(i + s, e);
    return LaurentMonomial(std::move(out));
}

/// Inverse shift.  Rejects input with support below index s, which cannot be
/// the image of a shift.
inline LaurentMonomial sigma_inverse(const LaurentMonomial& m, int s = 1) {
    if (s < 0)
        throw domain_error("sigma_inverse: negative shift");
    LaurentMonomial::exponent_map out;
    for (const auto& [i, e] : m.exponents()) {
        if (i < s)
            throw domain_error("sigma_inverse: nonzero exponent below shift index");
        out.emplace(i - s, e);
    }
    return LaurentMonomial(std::move(out));
}

/// Shift difference function tau(x) = sigma(x) / x.
inline LaurentMonomial tau(const LaurentMonomial& m) {
    return div(sigma(m), m);
}

/// Inverse of tau on its image: telescopes e_i = e_{i-1} - m_i with
/// e_{-1} = 0.  Rejects input whose telescoped exponents do not terminate
/// at zero (no finitely supported preimage exists).
inline LaurentMonomial tau_inverse(const LaurentMonomial& m) {
    LaurentMonomial::exponent_map out;
    long long acc = 0; // running prefix sum of m's exponents
    int prev = -1;
    for (const auto& [i, e] : m.exponents()) {
        // indices strictly between prev and i all carry the constant -acc
        if (acc != 0)
            for (int j = prev + 1; j < i; ++j)
                out.emplace(j, -acc);
        acc = detail::checked_add(acc, e);
        if (acc != 0)
            out.emplace(i, -acc);
        prev = i;
    }
    if (acc != 0)
        throw domain_error("tau_inverse: input is not in the image of tau");
    return LaurentMonomial(std::move(out));
}

/// Truncate function: drops all exponents at indices > n.
inline LaurentMonomial truncate(const LaurentMonomial& m, int n) {
    LaurentMonomial::exponent_map out;
    for (const auto& [i, e] : m.exponents()) {
        if (i > n)
            break;
        out.emplace(i, e);
    }
    return LaurentMonomial(std::move(out));
}

/// Exact exponent constraint on every index i <= bound.  Trailing zeros are
/// genuine constraints, so a bare sparse monomial cannot stand in for this.
struct PrefixCondition {
    int bound = -1;                   // -1 means no constraint at all
    std::vector<long long> exponents; // size bound + 1, indexed from 0

    PrefixCondition() = default;

    PrefixCondition(int n, std::vector<long long> exps) : bound(n), exponents(std::move(exps)) {
        if (bound < -1 || exponents.size() != static_cast<size_t>(bound + 1))
            throw domain_error("PrefixCondition: exponent count must be bound + 1");
    }

    /// Condition pinning indices 0..n to the exponents of m.
    static PrefixCondition of(const LaurentMonomial& m, int n) {
        std::vector<long long> exps;
        for (int i = 0; i <= n; ++i)
            exps.push_back(m.exponent(i));
        return PrefixCondition(n, std::move(exps));
    }

    long long exponent(int i) const {
        return i >= 0 && i <= bound ? exponents[i] : 0;
    }

    bool operator==(const PrefixCondition&) const = default;
};

inline bool matches_prefix(const LaurentMonomial& m, const PrefixCondition& c) {
    for (int i = 0; i <= c.bound; ++i)
        if (m.exponent(i) != c.exponents[i])
            return false;
    return true;
}

/// Text form: space-separated factors "x<i>^<e>" with ascending indices,
/// exponent 1 elided, identity written "1".
inline std::string to_string(const LaurentMonomial& m) {
    if (m.is_one())
        return "1";
    std::string out;
    for (const auto& [i, e] : m.exponents()) {
        if (!out.empty())
            out += ' ';
        out += 'x';
        out += std::to_string(i);
        if (e != 1) {
            out += '^';
            out += std::to_string(e);
        }
    }
    return out;
}

/// Query text form: like to_string, but a trailing "x<n>^0" marks a bound
/// whose last pinned exponent is zero (e.g. "x1 x2^0" pins e_2 = 0).
inline std::string to_string(const PrefixCondition& c) {
    std::string out;
    for (int i = 0; i <= c.bound; ++i) {
        long long e = c.exponents[i];
        if (e == 0 && !(i == c.bound && i >= 1))
            continue;
        if (!out.empty())
            out += ' ';
        out += 'x';
        out += std::to_string(i);
        if (e != 1) {
            out += '^';
            out += std::to_string(e);
        }
    }
    return out.empty() ? "1" : out;
}

/// Parses the monomial text form.  Accepts "1" for the identity.
inline LaurentMonomial parse_monomial(const std::string& text) {
    std::istringstream in(text);
    LaurentMonomial m;
    std::string tok;
    bool any = false;
    while (in >> tok) {
        any = true;
        if (tok == "1")
            continue;
        if (tok.size() < 2 || tok[0] != 'x')
            throw domain_error("bad monomial factor: '" + tok + "'");
        size_t caret = tok.find('^');
        int index;
        long long exp = 1;
        try {
            size_t used = 0;
            index = std::stoi(tok.substr(1, caret - 1), &used);
            if (used != (caret == std::string::npos ? tok.size() - 1 : caret - 1))
                throw std::invalid_argument(tok);
            if (caret != std::string::npos) {
                std::string etext = tok.substr(caret + 1);
                exp = std::stoll(etext, &used);
                if (used != etext.size())
                    throw std::invalid_argument(tok);
            }
        } catch (const std::exception&) {
            throw domain_error("bad monomial factor: '" + tok + "'");
        }
        if (index < 0)
            throw domain_error("bad monomial factor: '" + tok + "'");
        m.mul_by(index, exp);
    }
    if (!any)
        throw domain_error("empty monomial text");
    return m;
}

/// Parses the query text form: the bound is the largest index mentioned,
/// every unmentioned index below it is pinned to zero.  "1" is the
/// unconstrained query.
inline PrefixCondition parse_query(const std::string& text) {
    LaurentMonomial m = parse_monomial(text);
    // explicit ^0 factors vanish in the monomial, so rescan for the bound
    std::istringstream in(text);
    std::string tok;
    int bound = 0;
    while (in >> tok) {
        if (tok == "1")
            continue;
        size_t caret = tok.find('^');
        int index = std::stoi(tok.substr(1, caret == std::string::npos ? tok.size() - 1 : caret - 1));
        bound = std::max(bound, index);
    }
    return PrefixCondition::of(m, bound);
}

} // namespace soq
