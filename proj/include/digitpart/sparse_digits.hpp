#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <queue>
#include <stdexcept>
#include <utility>
#include <vector>

#include "digitpart/common.hpp"

namespace digitpart {

// Base-b digits of n, least significant first.
inline std::vector<unsigned long> digits_of(const Int& n, unsigned long base) {
    if (base < 2) throw std::invalid_argument("digits_of: base must be >= 2");
    if (n < 1) throw std::invalid_argument("digits_of: n must be positive");
    std::vector<unsigned long> ds;
    Int m = n;
    while (m > 0) {
        ds.push_back(mpz_fdiv_ui(m.get_mpz_t(), base));
        m /= base;
    }
    return ds;
}

inline std::size_t nonzero_digit_count(const Int& n, unsigned long base) {
    std::size_t k = 0;
    for (unsigned long d : digits_of(n, base))
        if (d != 0) ++k;
    return k;
}

struct SparseTerm {
    unsigned long digit;
    unsigned long exponent;
    bool operator==(const SparseTerm&) const = default;
};

namespace detail {

inline void check_terms(unsigned long base, const std::vector<SparseTerm>& terms) {
    if (base < 2) throw std::invalid_argument("sparse terms: base must be >= 2");
    if (terms.empty()) throw std::invalid_argument("sparse terms: at least one term required");
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (terms[i].digit == 0 || terms[i].digit >= base)
            throw std::invalid_argument("sparse terms: digit out of range [1, base-1]");
        if (i > 0 && terms[i].exponent >= terms[i - 1].exponent)
            throw std::invalid_argument("sparse terms: exponents must be strictly decreasing");
    }
    if (terms.back().exponent != 0)
        throw std::invalid_argument("sparse terms: lowest exponent must be 0 (value coprime to base)");
}

inline Int terms_value(unsigned long base, const std::vector<SparseTerm>& terms) {
    check_terms(base, terms);
    Int v = 0;
    for (const auto& t : terms) v += Int(t.digit) * ipow(base, t.exponent);
    return v;
}

}  // namespace detail

// An integer carried together with its nonzero base-b digits.  Canonical
// form: exponents strictly decreasing and the last exponent 0, so the value
// is never divisible by the base.
class SparseInt {
  public:
    SparseInt(unsigned long base, std::vector<SparseTerm> terms)
        : base_(base), terms_(std::move(terms)), value_(detail::terms_value(base, terms_)) {}

    static SparseInt from_value(const Int& n, unsigned long base) {
        if (base < 2) throw std::invalid_argument("SparseInt: base must be >= 2");
        if (n < 1) throw std::invalid_argument("SparseInt: value must be positive");
        if (mpz_divisible_ui_p(n.get_mpz_t(), base))
            throw std::invalid_argument("SparseInt: value divisible by the base has no canonical form");
        std::vector<SparseTerm> terms;
        auto ds = digits_of(n, base);
        for (std::size_t i = ds.size(); i-- > 0;)
            if (ds[i] != 0) terms.push_back({ds[i], static_cast<unsigned long>(i)});
        return SparseInt(base, std::move(terms));
    }

    unsigned long base() const { return base_; }
    const Int& value() const { return value_; }
    const std::vector<SparseTerm>& terms() const { return terms_; }
    std::size_t nonzero_terms() const { return terms_.size(); }
    unsigned long top_exponent() const { return terms_.front().exponent; }

    bool operator==(const SparseInt& o) const { return base_ == o.base_ && value_ == o.value_; }

  private:
    unsigned long base_;
    std::vector<SparseTerm> terms_;
    Int value_;
};

// Assembles a SparseInt from terms given in any order.  Exponents must be
// distinct, digits in [1, base), and some exponent must be zero.
inline SparseInt sparse_value(unsigned long base, std::vector<SparseTerm> terms) {
    std::sort(terms.begin(), terms.end(),
              [](const SparseTerm& a, const SparseTerm& b) { return a.exponent > b.exponent; });
    return SparseInt(base, std::move(terms));
}

// Streams u_1 < u_2 < ... : the positive integers coprime to the base with at
// most k nonzero base-b digits.  A min-heap holds frontier candidates; each
// member is generated from exactly one parent, so no deduplication is needed:
//   parent of (d_1, e_1), rest...   [top digit d_1 at top exponent e_1]
//     d_1 >= 2:                     decrement the top digit
//     d_1 = 1, e_1 > next_e + 1:    lower the top term by one exponent
//     d_1 = 1, e_1 = next_e + 1:    drop the top term
// (single-term members sit at exponent 0 and chain down to the root 1).
class EnumerationCursor {
  public:
    EnumerationCursor(unsigned long base, std::size_t max_nonzero)
        : base_(base), k_(max_nonzero) {
        if (base < 2) throw std::invalid_argument("EnumerationCursor: base must be >= 2");
        if (k_ == 0) throw std::invalid_argument("EnumerationCursor: need at least one nonzero digit");
        heap_.push(Node{Int(1), {SparseTerm{1, 0}}});
    }

    // Next member in increasing order; nullopt once the stream is exhausted
    // (finite exactly when k = 1 in any base: 1, 2, ..., b-1).
    std::optional<SparseInt> next() {
        if (heap_.empty()) return std::nullopt;
        Node top = heap_.top();
        heap_.pop();
        expand(top);
        return SparseInt(base_, std::move(top.terms));
    }

  private:
    struct Node {
        Int value;
        std::vector<SparseTerm> terms;
    };
    struct ByValue {
        bool operator()(const Node& a, const Node& b) const { return a.value > b.value; }
    };

    void expand(const Node& n) {
        const SparseTerm top = n.terms.front();
        if (top.digit + 1 < base_) {
            Node c{n.value + ipow(base_, top.exponent), n.terms};
            c.terms.front().digit++;
            heap_.push(std::move(c));
        }
        if (top.digit == 1 && n.terms.size() >= 2) {
            Node c{n.value + ipow(base_, top.exponent) * (base_ - 1), n.terms};
            c.terms.front().exponent++;
            heap_.push(std::move(c));
        }
        if (n.terms.size() < k_) {
            Node c{n.value + ipow(base_, top.exponent + 1), n.terms};
            c.terms.insert(c.terms.begin(), SparseTerm{1, top.exponent + 1});
            heap_.push(std::move(c));
        }
    }

    unsigned long base_;
    std::size_t k_;
    std::priority_queue<Node, std::vector<Node>, ByValue> heap_;
};

// Values a^m + c^n + 1 in increasing order with every witness pair (m, n).
// Distinct exponent pairs can collide (6^2 + 2^1 + 1 = 6^1 + 2^5 + 1 = 39);
// collisions are merged into one emission.
struct ThreeTermHit {
    Int value;
    std::vector<std::pair<unsigned long, unsigned long>> witnesses;  // (m, n), sorted
};

class ThreeTermCursor {
  public:
    ThreeTermCursor(unsigned long a, unsigned long c) : a_(a), c_(c) {
        if (a < 2 || c < 2) throw std::invalid_argument("ThreeTermCursor: bases must be >= 2");
        if (a == c) throw std::invalid_argument("ThreeTermCursor: bases must differ");
        heap_.push(Node{Int(a) + Int(c) + 1, 1, 1});
    }

    ThreeTermHit next() {
        ThreeTermHit hit;
        hit.value = heap_.top().value;
        while (!heap_.empty() && heap_.top().value == hit.value) {
            Node n = heap_.top();
            heap_.pop();
            hit.witnesses.emplace_back(n.m, n.n);
            expand(n);
        }
        std::sort(hit.witnesses.begin(), hit.witnesses.end());
        return hit;
    }

  private:
    struct Node {
        Int value;
        unsigned long m, n;
    };
    struct ByValue {
        bool operator()(const Node& a, const Node& b) const {
            if (a.value != b.value) return a.value > b.value;
            if (a.m != b.m) return a.m > b.m;
            return a.n > b.n;
        }
    };

    void expand(const Node& n) {
        heap_.push(Node{n.value - ipow(a_, n.m) + ipow(a_, n.m + 1), n.m + 1, n.n});
        if (n.m == 1) heap_.push(Node{n.value - ipow(c_, n.n) + ipow(c_, n.n + 1), n.m, n.n + 1});
    }

    unsigned long a_, c_;
    std::priority_queue<Node, std::vector<Node>, ByValue> heap_;
};

// Termination for the enumeration helpers: emit up to `count` members, or
// every member with value <= `ceiling`, whichever cuts off first.
struct StopRule {
    std::optional<std::uint64_t> count;
    std::optional<Int> ceiling;

    static StopRule first(std::uint64_t n) { return {n, std::nullopt}; }
    static StopRule below(Int v) { return {std::nullopt, std::move(v)}; }

    void validate() const {
        if (!count && !ceiling)
            throw std::invalid_argument("StopRule: need a count or a value ceiling");
    }
};

inline std::vector<SparseInt> enumerate_sparse(unsigned long base, std::size_t max_nonzero,
                                               const StopRule& stop) {
    stop.validate();
    std::vector<SparseInt> out;
    EnumerationCursor cur(base, max_nonzero);
    while (!stop.count || out.size() < *stop.count) {
        auto u = cur.next();
        if (!u) break;
        if (stop.ceiling && u->value() > *stop.ceiling) break;
        out.push_back(std::move(*u));
    }
    return out;
}

inline std::vector<ThreeTermHit> enumerate_three_term(unsigned long a, unsigned long c,
                                                      const StopRule& stop) {
    stop.validate();
    std::vector<ThreeTermHit> out;
    ThreeTermCursor cur(a, c);
    while (!stop.count || out.size() < *stop.count) {
        ThreeTermHit hit = cur.next();
        if (stop.ceiling && hit.value > *stop.ceiling) break;
        out.push_back(std::move(hit));
    }
    return out;
}

}  // namespace digitpart
