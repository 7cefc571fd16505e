#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "digitpart/arithmetic.hpp"
#include "digitpart/common.hpp"
#include "digitpart/rigorous.hpp"

namespace digitpart {

// Enclosure of log q for a positive rational.
inline RigorousReal precise_log(const Rat& q, mpfr_prec_t prec = 128) {
    if (sgn(q) <= 0) throw std::domain_error("precise_log: argument must be positive");
    return RigorousReal::rational(q, prec).log();
}

// v_p of a nonzero rational.
inline long rational_valuation(const Rat& q, const Int& p) {
    if (sgn(q) == 0) throw std::invalid_argument("rational_valuation: undefined at 0");
    Int t;
    long vn = mpz_remove(t.get_mpz_t(), q.get_num_mpz_t(), p.get_mpz_t());
    long vd = mpz_remove(t.get_mpz_t(), q.get_den_mpz_t(), p.get_mpz_t());
    return vn - vd;
}

// One factor (x/y)^b of a linear form in logarithms.
struct LinearFormItem {
    Int x;
    Int y;
    Int exponent;

    Rat alpha() const {
        if (y == 0) throw std::invalid_argument("LinearFormItem: zero denominator");
        Rat a(x, y);
        a.canonicalize();
        return a;
    }
};

// Lambda = (x_1/y_1)^{b_1} ... (x_n/y_n)^{b_n} - 1.  The bound evaluators
// must know Lambda != 0; that is checked exactly while the powering stays
// within `nonvanish_budget_bits`, beyond which the caller has to assert it.
struct LinearFormInstance {
    std::vector<LinearFormItem> items;
    bool product_differs_from_one = false;

    std::size_t size() const { return items.size(); }

    void validate_nonzero() const {
        if (items.size() < 2) throw std::invalid_argument("linear form: need n >= 2 items");
        for (const auto& it : items)
            if (it.x == 0 || it.y == 0)
                throw std::invalid_argument("linear form: zero numerator or denominator");
    }

    // Exact product when the result stays below the bit budget.
    std::optional<Rat> exact_product(unsigned long budget_bits = 1u << 20) const {
        validate_nonzero();
        unsigned long cost = 0;
        for (const auto& it : items) {
            unsigned long mag = std::max(mpz_sizeinbase(it.x.get_mpz_t(), 2),
                                         mpz_sizeinbase(it.y.get_mpz_t(), 2));
            Int e = abs(it.exponent);
            if (!mpz_fits_ulong_p(e.get_mpz_t())) return std::nullopt;
            unsigned long eu = e.get_ui();
            if (eu != 0 && mag > budget_bits / eu) return std::nullopt;
            cost += eu * mag;
            if (cost > budget_bits) return std::nullopt;
        }
        Rat prod(1);
        for (const auto& it : items) {
            long e = static_cast<long>(mpz_get_si(it.exponent.get_mpz_t()));
            prod *= qpow(it.alpha(), e);
        }
        return prod;
    }

    // Throws if the product is exactly 1, or if that cannot be established.
    void require_nonvanishing(unsigned long budget_bits = 1u << 20) const {
        if (auto p = exact_product(budget_bits)) {
            if (*p == 1) throw std::invalid_argument("linear form: product equals 1 (Lambda vanishes)");
            return;
        }
        if (!product_differs_from_one)
            throw std::invalid_argument(
                "linear form: exponents exceed the exact nonvanishing budget; "
                "set product_differs_from_one if Lambda != 0 is known");
    }
};

namespace formula {

// 8 * 30^{n+3} * n^{9/2}
inline RigorousReal matveev_leading(unsigned long n, mpfr_prec_t prec) {
    RigorousReal k = RigorousReal::exact(Int(8) * ipow(30, n + 3), prec);
    return k * RigorousReal::exact(Int(n), prec).pow_ui(9).sqrt();
}

// (16e)^{2(n+1)} * n^{3/2} * (log 2n)^2 * p / (log p)^2
inline RigorousReal yu_leading(unsigned long n, const Int& p, mpfr_prec_t prec) {
    RigorousReal c = (RigorousReal::exact(16, prec) * RigorousReal::euler(prec)).pow_ui(2 * (n + 1));
    c = c * RigorousReal::exact(Int(n), prec).pow_ui(3).sqrt();
    c = c * RigorousReal::exact(Int(2) * n, prec).log().pow_ui(2);
    RigorousReal logp = RigorousReal::exact(p, prec).log();
    return c * RigorousReal::exact(p, prec) / (logp * logp);
}

// e^{(n+1)(6n+5)}
inline RigorousReal yu_exp_factor(unsigned long n, mpfr_prec_t prec) {
    return RigorousReal::exact(Int(n + 1) * Int(6 * n + 5), prec).exp();
}

}  // namespace formula

struct BoundEvaluation {
    enum class Kind { archimedean, padic };

    Kind kind;
    RigorousReal value;           // enclosure of the displayed bound
    std::vector<RigorousReal> a;  // the A_i actually used
    RigorousReal b_value;         // B
    mpfr_prec_t precision;

    // p-adic only
    std::optional<Rat> b_n;
    std::optional<Rat> delta;
    std::optional<RigorousReal> t;

    // Endpoint that preserves the guarantee: log|Lambda| > certified lower
    // bound (Archimedean), v_p(Lambda) < certified upper bound (p-adic).
    double certified_d() const {
        return kind == Kind::archimedean ? value.lower_d() : value.upper_d();
    }
    std::string certified_str() const {
        return kind == Kind::archimedean ? value.lower_str() : value.upper_str();
    }
};

namespace detail {

inline RigorousReal item_a(const LinearFormItem& it, mpfr_prec_t prec) {
    Int m = std::max(abs(it.x), abs(it.y));
    return RigorousReal::max(RigorousReal::exact(m, prec), RigorousReal::euler(prec));
}

}  // namespace detail

// Lower bound for log|Lambda|: returns an enclosure of
//   -8 * 30^{n+3} * n^{9/2} * log(eB) * log A_1 ... log A_n
// with A_i = max{|x_i|, |y_i|, e} and
// B = max{1, max_j |b_j| log A_j / log A_n}.  The guarantee is
// log|Lambda| > value; its lower endpoint is the certified bound.
inline BoundEvaluation matveev_bound(const LinearFormInstance& inst, mpfr_prec_t prec = 128) {
    inst.validate_nonzero();
    for (const auto& it : inst.items)
        if (sgn(it.x) * sgn(it.y) < 0)
            throw std::invalid_argument("matveev_bound: x_i/y_i must be positive");
    inst.require_nonvanishing();

    unsigned long n = inst.size();
    BoundEvaluation ev{BoundEvaluation::Kind::archimedean,
                       RigorousReal(prec),
                       {},
                       RigorousReal(prec),
                       prec,
                       std::nullopt,
                       std::nullopt,
                       std::nullopt};

    std::vector<RigorousReal> logs;
    RigorousReal log_prod = RigorousReal::exact(1, prec);
    for (const auto& it : inst.items) {
        ev.a.push_back(detail::item_a(it, prec));
        logs.push_back(ev.a.back().log());
        log_prod = log_prod * logs.back();
    }

    RigorousReal b = RigorousReal::exact(1, prec);
    for (std::size_t j = 0; j + 1 < n; ++j)
        b = RigorousReal::max(
            b, RigorousReal::exact(abs(inst.items[j].exponent), prec) * logs[j] / logs[n - 1]);
    b = RigorousReal::max(b, RigorousReal::exact(abs(inst.items[n - 1].exponent), prec));
    ev.b_value = b;

    RigorousReal log_eb = (RigorousReal::euler(prec) * b).log();
    ev.value = -(formula::matveev_leading(n, prec) * log_eb * log_prod);
    return ev;
}

// Upper bound for v_p(Lambda): returns an enclosure of
//   (16e)^{2(n+1)} n^{3/2} (log 2n)^2 (p / (log p)^2)
//     * max{ log A_1 ... log A_n log T, delta B / B_n }
// with T = 2 B_n delta^{-1} e^{(n+1)(6n+5)} p^{n+1} log A_1 ... log A_{n-1}.
// The item of minimal v_p(exponent) is swapped into the last slot before
// evaluation; B_n constraints apply to the reordered form.  The guarantee is
// v_p(Lambda) < value; its upper endpoint is the certified bound.
inline BoundEvaluation yu_bound(const Int& p, LinearFormInstance inst, const Rat& b_cap,
                                const Rat& b_n, const Rat& delta, mpfr_prec_t prec = 128) {
    inst.validate_nonzero();
    if (classify_prime(p) != Primality::prime)
        throw std::invalid_argument("yu_bound: p must be a certified prime");
    if (sgn(delta) <= 0 || delta > Rat(1, 2))
        throw std::invalid_argument("yu_bound: delta must lie in (0, 1/2]");
    for (const auto& it : inst.items) {
        if (it.exponent == 0) throw std::invalid_argument("yu_bound: zero exponent");
        if (mpz_divisible_p(it.x.get_mpz_t(), p.get_mpz_t()) ||
            mpz_divisible_p(it.y.get_mpz_t(), p.get_mpz_t()))
            throw std::invalid_argument("yu_bound: items must be p-adic units (p | x_i y_i)");
    }
    inst.require_nonvanishing();

    // Swap the exponent of minimal v_p into the last slot.
    unsigned long n = inst.size();
    std::size_t min_i = 0;
    unsigned long min_v = valuation(inst.items[0].exponent, p);
    for (std::size_t i = 1; i < n; ++i) {
        unsigned long v = valuation(inst.items[i].exponent, p);
        if (v < min_v) {
            min_v = v;
            min_i = i;
        }
    }
    std::swap(inst.items[min_i], inst.items[n - 1]);

    Int max_abs_b = 3;
    for (const auto& it : inst.items) max_abs_b = std::max(max_abs_b, Int(abs(it.exponent)));
    if (b_cap < Rat(max_abs_b))
        throw std::invalid_argument("yu_bound: B < max{|b_i|, 3}");
    if (b_cap < b_n || b_n < Rat(abs(inst.items[n - 1].exponent)))
        throw std::invalid_argument("yu_bound: need B >= B_n >= |b_n| (after reorder)");

    BoundEvaluation ev{BoundEvaluation::Kind::padic,
                       RigorousReal(prec),
                       {},
                       RigorousReal::rational(b_cap, prec),
                       prec,
                       b_n,
                       delta,
                       std::nullopt};

    RigorousReal log_all = RigorousReal::exact(1, prec);
    RigorousReal log_head = RigorousReal::exact(1, prec);  // excludes the last item
    for (std::size_t i = 0; i < n; ++i) {
        ev.a.push_back(detail::item_a(inst.items[i], prec));
        RigorousReal lg = ev.a.back().log();
        log_all = log_all * lg;
        if (i + 1 < n) log_head = log_head * lg;
    }

    RigorousReal t = RigorousReal::rational(Rat(2) * b_n / delta, prec) *
                     formula::yu_exp_factor(n, prec) *
                     RigorousReal::exact(p, prec).pow_ui(n + 1) * log_head;
    ev.t = t;

    RigorousReal main_term = log_all * t.log();
    RigorousReal ratio = RigorousReal::rational(delta * b_cap / b_n, prec);
    ev.value = formula::yu_leading(n, p, prec) * RigorousReal::max(main_term, ratio);
    return ev;
}

// Enclosure of log|Lambda| by exact rational evaluation; the test oracle for
// matveev_bound.  Exponent budget as in exact_product.
inline RigorousReal true_archimedean_gap(const LinearFormInstance& inst, mpfr_prec_t prec = 128,
                                         unsigned long budget_bits = 1u << 20) {
    auto p = inst.exact_product(budget_bits);
    if (!p) throw std::invalid_argument("true_archimedean_gap: exponent budget exceeded");
    Rat lambda = *p - 1;
    if (sgn(lambda) == 0) throw std::domain_error("true_archimedean_gap: Lambda vanishes");
    return precise_log(abs(lambda), prec);
}

}  // namespace digitpart
