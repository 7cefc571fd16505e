#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include "digitpart/arithmetic.hpp"
#include "digitpart/common.hpp"
#include "digitpart/effective_bounds.hpp"
#include "digitpart/sparse_digits.hpp"

namespace digitpart {

// One equality d3*b^m + d2*b^n + d1 = q1^{r1}...qs^{rs}.  Degenerate
// two-nonzero-digit solutions d3*b^m + d1 are kept with n = 0, d2 = 0 (there
// the constraint m > n > 0 collapses and m may be 1).
struct SolutionRecord {
    unsigned long base = 0;
    unsigned long m = 0, n = 0;
    unsigned long d3 = 0, d2 = 0, d1 = 0;
    std::vector<unsigned long> r;  // aligned with the prime set, increasing
    Int u;

    bool two_digit() const { return d2 == 0; }

    friend bool operator==(const SolutionRecord& a, const SolutionRecord& b) {
        return a.base == b.base && a.m == b.m && a.n == b.n && a.d3 == b.d3 && a.d2 == b.d2 &&
               a.d1 == b.d1 && a.r == b.r && a.u == b.u;
    }
};

// Recompute u both from the digit side and from the exponent side.
inline void revalidate(const SolutionRecord& rec, const PrimeSet& s) {
    if (s.size() != rec.r.size())
        throw std::logic_error("SolutionRecord: exponent vector length mismatch");
    Int digit_side = Int(rec.d3) * ipow(rec.base, rec.m) + Int(rec.d2) * ipow(rec.base, rec.n) +
                     Int(rec.d1);
    Int unit_side = 1;
    for (std::size_t i = 0; i < rec.r.size(); ++i) {
        Int p;
        mpz_pow_ui(p.get_mpz_t(), s.primes()[i].get_mpz_t(), rec.r[i]);
        unit_side *= p;
    }
    if (digit_side != rec.u || unit_side != rec.u)
        throw std::logic_error("SolutionRecord: sides disagree");
    if (rec.u % rec.base == 0) throw std::logic_error("SolutionRecord: base divides value");
}

struct SolveOptions {
    unsigned workers = 1;
    bool prune = true;
    unsigned long prune_depth = 10;  // residue tables modulo q^t

    void validate() const {
        if (workers < 1) throw std::invalid_argument("SolveOptions: workers must be >= 1");
        if (prune_depth < 1) throw std::invalid_argument("SolveOptions: prune_depth must be >= 1");
    }
};

namespace solve_detail {

struct ResidueTable {
    Int q;
    Int qt;                 // q^t
    unsigned long t;
    std::vector<Int> bpow;  // b^j mod q^t, j = 0..m_max
};

inline std::vector<ResidueTable> build_tables(unsigned long b, const PrimeSet& s,
                                              unsigned long m_max, unsigned long t) {
    std::vector<ResidueTable> tabs;
    for (const Int& q : s.primes()) {
        ResidueTable tab;
        tab.q = q;
        tab.t = t;
        mpz_pow_ui(tab.qt.get_mpz_t(), q.get_mpz_t(), t);
        tab.bpow.resize(m_max + 1);
        tab.bpow[0] = 1 % tab.qt;
        for (unsigned long j = 1; j <= m_max; ++j) tab.bpow[j] = (tab.bpow[j - 1] * b) % tab.qt;
        tabs.push_back(std::move(tab));
    }
    return tabs;
}

// Sound rejection: if no q saturates its table depth, every v_q(u) is read
// off exactly from u mod q^t, so the only S-unit u could equal is
// prod q^{v_q(u)}; reject when that product is below b^m <= u.  Any
// saturation disables the rule for this candidate (exact division decides).
inline bool residue_reject(const std::vector<ResidueTable>& tabs, const Int& bm, unsigned long m,
                           unsigned long n, unsigned long d3, unsigned long d2, unsigned long d1) {
    Int pw = 1;
    for (const ResidueTable& tab : tabs) {
        Int res = (Int(d3) * tab.bpow[m] + Int(d2) * tab.bpow[n] + d1) % tab.qt;
        if (res == 0) return false;
        unsigned long e = mpz_remove(res.get_mpz_t(), res.get_mpz_t(), tab.q.get_mpz_t());
        Int qe;
        mpz_pow_ui(qe.get_mpz_t(), tab.q.get_mpz_t(), e);
        pw *= qe;
    }
    return pw < bm;
}

inline bool record_less(const SolutionRecord& a, const SolutionRecord& b) {
    return std::tie(a.u, a.m, a.n, a.d3, a.d2, a.d1) < std::tie(b.u, b.m, b.n, b.d3, b.d2, b.d1);
}

}  // namespace solve_detail

// Exhaustive search for d3*b^m + d2*b^n + d1 = S-unit with m <= m_max.
// The (m, n) grid (n = 0 marks the two-digit stratum) is split across
// workers round-robin; results are merged and sorted by
// (u, m, n, d3, d2, d1), so output does not depend on the worker count.
inline std::vector<SolutionRecord> solve_three_digit(unsigned long b, const PrimeSet& s,
                                                     unsigned long m_max,
                                                     const SolveOptions& opt = {}) {
    if (b < 2) throw std::invalid_argument("solve_three_digit: base must be >= 2");
    if (s.empty()) throw std::invalid_argument("solve_three_digit: S must be nonempty");
    if (m_max < 2) throw std::invalid_argument("solve_three_digit: m_max must be >= 2");
    opt.validate();

    std::vector<std::pair<unsigned long, unsigned long>> grid;
    for (unsigned long m = 1; m <= m_max; ++m) grid.emplace_back(m, 0);
    for (unsigned long m = 2; m <= m_max; ++m)
        for (unsigned long n = 1; n < m; ++n) grid.emplace_back(m, n);

    std::vector<Int> bpow(m_max + 1);
    bpow[0] = 1;
    for (unsigned long j = 1; j <= m_max; ++j) bpow[j] = bpow[j - 1] * b;
    std::vector<solve_detail::ResidueTable> tabs =
        opt.prune ? solve_detail::build_tables(b, s, m_max, opt.prune_depth)
                  : std::vector<solve_detail::ResidueTable>{};

    auto scan = [&](std::size_t first, std::size_t stride, std::vector<SolutionRecord>& out) {
        for (std::size_t i = first; i < grid.size(); i += stride) {
            auto [m, n] = grid[i];
            unsigned long d2_lo = n == 0 ? 0 : 1;
            unsigned long d2_hi = n == 0 ? 0 : b - 1;
            for (unsigned long d3 = 1; d3 < b; ++d3) {
                Int top = Int(d3) * bpow[m];
                for (unsigned long d2 = d2_lo; d2 <= d2_hi; ++d2) {
                    Int mid = top + Int(d2) * bpow[n];
                    for (unsigned long d1 = 1; d1 < b; ++d1) {
                        if (opt.prune &&
                            solve_detail::residue_reject(tabs, bpow[m], m, n, d3, d2, d1))
                            continue;
                        Int u = mid + d1;
                        Int cof = u;
                        std::vector<unsigned long> r(s.size());
                        for (std::size_t k = 0; k < s.size(); ++k)
                            r[k] = mpz_remove(cof.get_mpz_t(), cof.get_mpz_t(),
                                              s.primes()[k].get_mpz_t());
                        if (cof == 1)
                            out.push_back(SolutionRecord{b, m, n, d3, d2, d1, std::move(r),
                                                         std::move(u)});
                    }
                }
            }
        }
    };

    std::vector<std::vector<SolutionRecord>> parts(opt.workers);
    if (opt.workers == 1) {
        scan(0, 1, parts[0]);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 1; w < opt.workers; ++w)
            pool.emplace_back([&, w] { scan(w, opt.workers, parts[w]); });
        scan(0, opt.workers, parts[0]);
        for (std::thread& th : pool) th.join();
    }
    std::vector<SolutionRecord> all;
    for (std::vector<SolutionRecord>& part : parts)
        for (SolutionRecord& rec : part) all.push_back(std::move(rec));
    std::sort(all.begin(), all.end(), solve_detail::record_less);
    return all;
}

// One failure of [2^m + 2^n + 1]_{3,5} <= 2^{3m/4}.  The comparison is done
// on fourth powers ([u]_S^4 vs 2^{3m}); cap is a display value only.
struct Problem42Violation {
    unsigned long m = 0, n = 0;
    Int u;
    Int s_part;
    double cap = 0;

    friend bool operator==(const Problem42Violation& a, const Problem42Violation& b) {
        return a.m == b.m && a.n == b.n && a.u == b.u && a.s_part == b.s_part;
    }
};

inline std::vector<Problem42Violation> check_problem42(unsigned long m_max) {
    if (m_max < 2) throw std::invalid_argument("check_problem42: m_max must be >= 2");
    PrimeSet s{3, 5};
    std::vector<Problem42Violation> out;
    for (unsigned long m = 2; m <= m_max; ++m) {
        for (unsigned long n = 1; n < m; ++n) {
            Int u = ipow(2ul, m) + ipow(2ul, n) + 1;
            Int sp = s_part(u, s);
            Int sp4;
            mpz_pow_ui(sp4.get_mpz_t(), sp.get_mpz_t(), 4);
            if (sp4 > ipow(2ul, 3 * m))
                out.push_back(
                    Problem42Violation{m, n, std::move(u), std::move(sp), std::pow(2.0, 0.75 * m)});
        }
    }
    return out;
}

// Row of an evidence table; optional columns are filled depending on the
// producing operation.  Always: s_part * cofactor == u.
struct TrendRow {
    unsigned long j = 0;
    Int u;
    Int s_part;
    Int cofactor;
    bool spart_flag = false;             // [u]_S < u^eps, decided exactly
    double u_eps = 0;                    // display
    std::optional<double> p_threshold;   // (1-eps) llu * lllu / llllu, absent below domain
    std::optional<Int> p_value;          // greatest prime factor
    std::optional<Completeness> p_status;
    std::optional<bool> p_flag;          // P[u] > threshold; only when complete and in domain
    std::optional<double> cap42;         // 2^{3m/4}, base-2 three-digit rows only
    std::vector<std::pair<unsigned long, unsigned long>> witnesses;  // a^m + c^n + 1 sources
};

namespace solve_detail {

// [u]_S < u^{num/den} decided as s_part^den < u^num.
inline bool spart_below_power(const Int& sp, const Int& u, const Rat& eps) {
    if (!eps.get_num().fits_ulong_p() || !eps.get_den().fits_ulong_p())
        throw std::invalid_argument("eps numerator/denominator too large");
    Int lhs, rhs;
    mpz_pow_ui(lhs.get_mpz_t(), sp.get_mpz_t(), eps.get_den().get_ui());
    mpz_pow_ui(rhs.get_mpz_t(), u.get_mpz_t(), eps.get_num().get_ui());
    return lhs < rhs;
}

inline double power_display(const Int& u, const Rat& eps) {
    RigorousReal v =
        (RigorousReal::exact(u, 64).log() * RigorousReal::rational(eps, 64)).exp();
    return v.mid_d();
}

inline std::optional<double> threshold_display(const Int& u, const Rat& eps) {
    try {
        return smooth_threshold(u, eps, 128).mid_d();
    } catch (const std::domain_error&) {
        return std::nullopt;
    }
}

inline void check_eps(const Rat& eps) {
    if (sgn(eps) <= 0 || eps >= 1) throw std::invalid_argument("eps must lie in (0, 1)");
}

}  // namespace solve_detail

// First j_count members of the at-most-k-nonzero-digit sequence in base b,
// with their S-parts and the exact flag [u]_S < u^eps.
inline std::vector<TrendRow> verify_spart_trend(unsigned long b, unsigned long k,
                                                const PrimeSet& s, unsigned long j_count,
                                                const Rat& eps) {
    solve_detail::check_eps(eps);
    if (j_count < 1 || j_count > 100000)
        throw std::invalid_argument("verify_spart_trend: j_count out of range");
    if (s.empty()) throw std::invalid_argument("verify_spart_trend: S must be nonempty");
    EnumerationCursor cur(b, k);
    std::vector<TrendRow> rows;
    for (unsigned long j = 1; j <= j_count; ++j) {
        std::optional<SparseInt> nxt = cur.next();
        if (!nxt) break;  // k = 1 streams are finite
        TrendRow row;
        row.j = j;
        row.u = nxt->value();
        SFactorization f = s_factorization(row.u, s);
        row.s_part = f.s_part();
        row.cofactor = f.cofactor;
        row.spart_flag = solve_detail::spart_below_power(row.s_part, row.u, eps);
        row.u_eps = solve_detail::power_display(row.u, eps);
        row.p_threshold = solve_detail::threshold_display(row.u, eps);
        if (b == 2 && k == 3 && nxt->terms().size() == 3)
            row.cap42 = std::pow(2.0, 0.75 * static_cast<double>(nxt->top_exponent()));
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace solve_detail {

inline void fill_p_columns(TrendRow& row, const FactorEffort& effort, const Rat& eps) {
    GreatestPrimeFactor g = greatest_prime_factor(row.u, effort);
    row.p_value = g.value;
    row.p_status = g.status;
    row.p_threshold = threshold_display(row.u, eps);
    if (g.status == Completeness::complete && row.p_threshold) {
        // certainly_greater: an undecidable straddle reports false rather
        // than claiming the threshold is exceeded.
        RigorousReal thr = smooth_threshold(row.u, eps, 128);
        row.p_flag = RigorousReal::exact(g.value, 128).certainly_greater(thr);
    }
}

}  // namespace solve_detail

// Greatest-prime-factor evidence table over the sparse-digit stream.
// S only feeds the bookkeeping columns; pass the set of interest or leave
// empty (then s_part = 1, cofactor = u).
inline std::vector<TrendRow> p_table_sparse(unsigned long b, unsigned long k,
                                            const StopRule& range, const FactorEffort& effort,
                                            const Rat& eps, const PrimeSet& s = PrimeSet{}) {
    solve_detail::check_eps(eps);
    effort.validate();
    std::vector<TrendRow> rows;
    unsigned long j = 0;
    for (const SparseInt& v : enumerate_sparse(b, k, range)) {
        TrendRow row;
        row.j = ++j;
        row.u = v.value();
        SFactorization f = s_factorization(row.u, s);
        row.s_part = f.s_part();
        row.cofactor = f.cofactor;
        row.spart_flag = solve_detail::spart_below_power(row.s_part, row.u, eps);
        row.u_eps = solve_detail::power_display(row.u, eps);
        solve_detail::fill_p_columns(row, effort, eps);
        if (b == 2 && k == 3 && v.terms().size() == 3)
            row.cap42 = std::pow(2.0, 0.75 * static_cast<double>(v.top_exponent()));
        rows.push_back(std::move(row));
    }
    return rows;
}

// Same table over a^m + c^n + 1 values; duplicated values carry all (m, n)
// witnesses on one row.
inline std::vector<TrendRow> p_table_three_term(unsigned long a, unsigned long c,
                                                const StopRule& range, const FactorEffort& effort,
                                                const Rat& eps, const PrimeSet& s = PrimeSet{}) {
    solve_detail::check_eps(eps);
    effort.validate();
    std::vector<TrendRow> rows;
    unsigned long j = 0;
    for (const ThreeTermHit& hit : enumerate_three_term(a, c, range)) {
        TrendRow row;
        row.j = ++j;
        row.u = hit.value;
        SFactorization f = s_factorization(row.u, s);
        row.s_part = f.s_part();
        row.cofactor = f.cofactor;
        row.spart_flag = solve_detail::spart_below_power(row.s_part, row.u, eps);
        row.u_eps = solve_detail::power_display(row.u, eps);
        solve_detail::fill_p_columns(row, effort, eps);
        row.witnesses = hit.witnesses;
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace digitpart
