#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "digitpart/arithmetic.hpp"
#include "digitpart/common.hpp"
#include "digitpart/lfl_bounds.hpp"
#include "digitpart/rigorous.hpp"

namespace digitpart {

// Everything here concerns integers u = d3*b^m + d2*b^n + d1 with
// m > n > 0, digits in [0, b), d1*d3 != 0, factored as u = q1^r1...qs^rs * M
// with M coprime to S.  A certificate bounds the top exponent m whenever the
// cofactor M stays below an assumed cap, and separately publishes a uniform
// ratio that converts any solution into a lower bound on M, hence an upper
// bound on the S-part of u.
struct BoundCertificate {
    unsigned long base = 0;
    PrimeSet s;
    Int cofactor_cap;        // effective cap actually assumed: max(A, b-1, 3)
    RigorousReal q_product;  // Q = prod log q_i
    Int m_arch;              // branch m >= 2n: largest m not excluded
    Int m_padic;             // branch m <= 2n: largest m not excluded
    Int m0;                  // every relation with cofactor <= cap forces m <= m0
    Int ratio;               // every relation forces m <= ratio * log((b-1) * max{M, b, 3})
    Rat exponent;            // c: m > m0 implies [u]_S <= u^{1-c}
    mpfr_prec_t precision = 128;
    std::string assumptions;
};

struct ThresholdQuery {
    Int n;
    Rat eps;
};

namespace cert_detail {

constexpr mpfr_prec_t kPrecCap = 4096;
// Integer thresholds (search floors, ceilings of enclosures) are taken at a
// pinned precision so they never depend on the caller's starting precision;
// sign decisions escalate instead.
constexpr mpfr_prec_t kPinned = 256;

inline void check_prec(mpfr_prec_t prec) {
    if (prec < MPFR_PREC_MIN || prec > kPrecCap)
        throw std::invalid_argument("effective_bounds: precision out of range");
}

// f(x, prec) must enclose a fixed real F(x); escalate until the sign of F(x)
// is decided.  Consistent across starting precisions: a decision, once
// truthful at any precision, can never flip at another.
template <typename F>
inline bool decide_positive(const F& f, const Int& x, mpfr_prec_t prec0) {
    for (mpfr_prec_t p = prec0; p <= kPrecCap; p *= 2) {
        RigorousReal v = f(x, p);
        if (v.certainly_positive()) return true;
        if (v.certainly_nonpositive()) return false;
    }
    throw std::runtime_error("effective_bounds: enclosure undecidable at precision cap");
}

// Smallest x >= start with F(x) > 0, for F eventually positive and
// nondecreasing on [start, oo): geometric bracketing, then bisection.
template <typename F>
inline Int rising_crossover(const F& f, const Int& start, mpfr_prec_t prec0) {
    if (decide_positive(f, start, prec0)) return start;
    Int lo = start, step = 1, hi = start + 1;
    while (!decide_positive(f, hi, prec0)) {
        lo = hi;
        step *= 2;
        hi = start + step;
    }
    while (hi - lo > 1) {
        Int mid = lo + (hi - lo) / 2;
        if (decide_positive(f, mid, prec0))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

// Precision-free integer data shared by both branches.
struct BranchData {
    unsigned long b = 0;
    std::vector<Int> q;   // S, increasing
    Int a_eff;            // max(cap, b-1, 3)
    Int b_res;            // b with all S-primes divided out
    std::vector<unsigned long> vqb;  // v_q(b), aligned with q
    Int p;                // smallest prime divisor of b
    bool p_in_s = false;
    std::vector<Int> q_cu;  // S \ {p}
};

inline BranchData make_branch_data(unsigned long b, const PrimeSet& s, const Int& cap) {
    if (b < 2) throw std::invalid_argument("effective_bounds: base must be >= 2");
    if (s.empty()) throw std::invalid_argument("effective_bounds: S must be nonempty");
    if (cap < 2) throw std::invalid_argument("effective_bounds: cofactor cap must be >= 2");
    BranchData d;
    d.b = b;
    d.q = s.primes();
    d.a_eff = std::max<Int>(cap, std::max<Int>(Int(b) - 1, 3));
    d.b_res = b;
    for (const Int& qi : d.q)
        d.vqb.push_back(mpz_remove(d.b_res.get_mpz_t(), d.b_res.get_mpz_t(), qi.get_mpz_t()));
    for (unsigned long f = 2;; ++f) {
        if (f * f > b) {
            d.p = b;
            break;
        }
        if (b % f == 0) {
            d.p = f;
            break;
        }
    }
    d.p_in_s = s.contains(d.p);
    for (const Int& qi : d.q)
        if (qi != d.p) d.q_cu.push_back(qi);
    return d;
}

inline RigorousReal log_a_of(const Int& v, mpfr_prec_t prec) {
    // log max{v, e}
    return RigorousReal::max(RigorousReal::exact(v, prec), RigorousReal::euler(prec)).log();
}

// --- Archimedean branch (m >= 2n) -----------------------------------------
//
// 0 < |q1^{r1 - m v1} ... qs^{rs - m vs} * b_res^{-m} * (M/d3) - 1| <= b^{1+n-m},
// v_i = v_{q_i}(b): one linear-form item per prime of S, one for the residual
// part of b when b is not S-smooth, and one for M/d3.

struct ArchConsts {
    unsigned long n_tot;
    bool has_bres;
    RigorousReal logb, big_l, q_ca, kappa, ab_log, lead;
};

inline ArchConsts arch_consts(const BranchData& d, mpfr_prec_t prec) {
    ArchConsts c{0,
                 d.b_res > 1,
                 RigorousReal::exact(Int(d.b), prec).log(),
                 RigorousReal::exact(d.a_eff, prec).log(),
                 RigorousReal::exact(1, prec),
                 RigorousReal::exact(0, prec),
                 RigorousReal::exact(1, prec),
                 RigorousReal(prec)};
    c.n_tot = d.q.size() + (c.has_bres ? 1 : 0) + 1;
    for (const Int& qi : d.q) {
        RigorousReal la = log_a_of(qi, prec);
        c.q_ca = c.q_ca * la;
        c.kappa = RigorousReal::max(c.kappa, la / RigorousReal::exact(qi, prec).log());
    }
    if (c.has_bres) c.ab_log = log_a_of(d.b_res, prec);
    c.lead = formula::matveev_leading(c.n_tot, prec);
    return c;
}

// Positive exactly when m is excluded: the trivial upper estimate
// log Lambda_a <= -(m/2 - 1) log b drops below the Matveev lower bound
// evaluated with every parameter at its worst case (r_j log q_j <= (m+1)
// log b, A-slot for M/d3 capped by a_eff).
inline RigorousReal arch_margin(const BranchData& d, const Int& m, mpfr_prec_t prec) {
    ArchConsts c = arch_consts(d, prec);
    RigorousReal one = RigorousReal::exact(1, prec);
    RigorousReal mm = RigorousReal::exact(m, prec);
    RigorousReal bmax = RigorousReal::max(one, (mm + one) * c.logb * c.kappa / c.big_l);
    if (c.has_bres) bmax = RigorousReal::max(bmax, mm * c.ab_log / c.big_l);
    RigorousReal u = c.lead * (RigorousReal::euler(prec) * bmax).log() * c.q_ca * c.big_l;
    if (c.has_bres) u = u * c.ab_log;
    return (mm / RigorousReal::exact(2, prec) - one) * c.logb - u;
}

// --- p-adic branch (m <= 2n) -----------------------------------------------
//
// With p the smallest prime divisor of b, v_p(Lambda_u) >= m/2 - log b/log p
// while Yu's theorem caps it.  The p-power of the factorization folds into
// the last linear-form item (p^{r_p} M / d1, exponent 1), which is forced to
// be a p-adic unit once m > 2 log b / log p.  Items with zero exponent are
// dropped; the all-dropped degenerate case is excluded by a size argument.

struct PadicConsts {
    unsigned long s_cu, n_yu;
    RigorousReal logb, logp, q_cu, l_z, lead, expfac, log_qmin;
};

inline PadicConsts padic_consts(const BranchData& d, mpfr_prec_t prec) {
    PadicConsts c{d.q_cu.size(),
                  static_cast<unsigned long>(d.q_cu.size() + 1),
                  RigorousReal::exact(Int(d.b), prec).log(),
                  RigorousReal::exact(d.p, prec).log(),
                  RigorousReal::exact(1, prec),
                  RigorousReal(prec),
                  RigorousReal(prec),
                  RigorousReal(prec),
                  RigorousReal(prec)};
    for (const Int& qi : d.q_cu) c.q_cu = c.q_cu * log_a_of(qi, prec);
    Int inflate = d.p_in_s ? Int(d.b) - 1 : Int(1);
    c.l_z = RigorousReal::exact(inflate * d.a_eff, prec).log();
    if (c.s_cu > 0) {
        c.lead = formula::yu_leading(c.n_yu, d.p, prec);
        c.expfac = formula::yu_exp_factor(c.n_yu, prec);
        c.log_qmin = RigorousReal::exact(d.q_cu.front(), prec).log();
    }
    return c;
}

inline RigorousReal padic_margin(const BranchData& d, const Int& m, mpfr_prec_t prec) {
    PadicConsts c = padic_consts(d, prec);
    RigorousReal one = RigorousReal::exact(1, prec);
    RigorousReal mm = RigorousReal::exact(m, prec);
    RigorousReal bcap = RigorousReal::max(RigorousReal::exact(3, prec),
                                          (mm + one) * c.logb / c.log_qmin);
    RigorousReal t = RigorousReal::exact(2, prec) * c.expfac *
                     RigorousReal::exact(d.p, prec).pow_ui(c.n_yu + 1) * bcap / c.l_z;
    RigorousReal u = c.lead * c.q_cu * c.l_z * RigorousReal::max(t.log(), one);
    return mm / RigorousReal::exact(2, prec) - c.logb / c.logp - u;
}

// Floors below which the p-adic exclusion machinery is not yet valid:
// the unit forcing, the delta <= 1/2 dichotomy, the degenerate all-zero
// subcase, and the monotonicity threshold of the margin.
inline Int padic_start(const BranchData& d) {
    PadicConsts c = padic_consts(d, kPinned);
    RigorousReal logb1 = d.b > 2 ? RigorousReal::exact(Int(d.b) - 1, kPinned).log()
                                 : RigorousReal::exact(0, kPinned);
    RigorousReal la = RigorousReal::exact(d.a_eff, kPinned).log();
    Int m_force = (RigorousReal::exact(2, kPinned) * c.logb / c.logp).upper_ceil();
    Int m_triv = ((logb1 + la) / c.logb).upper_ceil();
    RigorousReal lqmax = RigorousReal::exact(d.q_cu.back(), kPinned).log();
    Int m_case_a = ((RigorousReal::exact(Int(2) * Int(c.s_cu), kPinned) * c.q_cu * c.l_z * lqmax +
                     logb1 + la) /
                    c.logb)
                       .upper_ceil();
    Int m_mono = (RigorousReal::exact(2, kPinned) * c.lead * c.q_cu * c.l_z).upper_ceil() + 1;
    Int start = 4;
    for (const Int& v : {Int(m_force + 1), Int(m_triv + 1), m_case_a, m_mono})
        start = std::max(start, v);
    return start;
}

}  // namespace cert_detail

// Largest m that the Archimedean branch cannot rule out for cofactors up to
// the cap: beyond it, log Lambda_a <= -(m/2 - 1) log b strictly contradicts
// the Matveev bound.
inline Int archimedean_m_bound(unsigned long b, const PrimeSet& s, const Int& cofactor_cap,
                               mpfr_prec_t prec = 128) {
    cert_detail::check_prec(prec);
    cert_detail::BranchData d = cert_detail::make_branch_data(b, s, cofactor_cap);
    cert_detail::ArchConsts c = cert_detail::arch_consts(d, cert_detail::kPinned);
    RigorousReal r = c.lead * c.q_ca * c.big_l;
    if (c.has_bres) r = r * c.ab_log;
    Int m_mono = (RigorousReal::exact(2, cert_detail::kPinned) * r / c.logb).upper_ceil() + 1;
    Int start = std::max<Int>(m_mono, 4);
    Int mc = cert_detail::rising_crossover(
        [&d](const Int& m, mpfr_prec_t p) { return cert_detail::arch_margin(d, m, p); }, start,
        prec);
    return mc - 1;
}

// Largest m the p-adic branch cannot rule out.
inline Int padic_m_bound(unsigned long b, const PrimeSet& s, const Int& cofactor_cap,
                         mpfr_prec_t prec = 128) {
    cert_detail::check_prec(prec);
    cert_detail::BranchData d = cert_detail::make_branch_data(b, s, cofactor_cap);
    if (d.q_cu.empty()) {
        // S = {p}: u is p^{v_p(d1)} * M once the unit forcing applies, so u
        // itself is bounded by (b-1) * cap.
        cert_detail::PadicConsts c = cert_detail::padic_consts(d, cert_detail::kPinned);
        RigorousReal logb1 = d.b > 2
                                 ? RigorousReal::exact(Int(d.b) - 1, cert_detail::kPinned).log()
                                 : RigorousReal::exact(0, cert_detail::kPinned);
        RigorousReal la = RigorousReal::exact(d.a_eff, cert_detail::kPinned).log();
        Int m_force = (RigorousReal::exact(2, cert_detail::kPinned) * c.logb / c.logp).upper_ceil();
        Int m_triv = ((logb1 + la) / c.logb).upper_ceil();
        return std::max(std::max(m_force, m_triv), Int(1));
    }
    Int start = cert_detail::padic_start(d);
    Int mc = cert_detail::rising_crossover(
        [&d](const Int& m, mpfr_prec_t p) { return cert_detail::padic_margin(d, m, p); }, start,
        prec);
    return mc - 1;
}

// Uniform ratio G: every relation, with no assumption on M, satisfies
// m <= G * log((b-1) * max{M, b, 3}).  Obtained by rerunning both branch
// arguments with the cofactor cap left symbolic; the crossover is searched
// in the ratio variable x = m / log((b-1) * max{M, b, 3}).
inline Int certified_ratio(unsigned long b, const PrimeSet& s, mpfr_prec_t prec = 128) {
    cert_detail::check_prec(prec);
    cert_detail::BranchData d = cert_detail::make_branch_data(b, s, Int(2));

    auto l0 = [&](mpfr_prec_t p) {  // log(3(b-1)), floor of the symbolic log
        return RigorousReal::exact(Int(3) * (Int(b) - 1), p).log();
    };
    auto logb1 = [&](mpfr_prec_t p) {
        return b > 2 ? RigorousReal::exact(Int(b) - 1, p).log() : RigorousReal::exact(0, p);
    };

    // Archimedean side: H_a(x) = (x/2 - 1/L0) log b - R * (c5 + log(x+1))
    // with R = lead * Q_ca * logA_bres and c5 = 1 + log(1 + kappa log b + logA_bres).
    auto arch_h = [&](const Int& x, mpfr_prec_t p) {
        cert_detail::ArchConsts c = cert_detail::arch_consts(d, p);
        RigorousReal one = RigorousReal::exact(1, p);
        RigorousReal r = c.lead * c.q_ca;
        RigorousReal c1 = c.logb * c.kappa, c2 = RigorousReal::exact(0, p);
        if (c.has_bres) {
            r = r * c.ab_log;
            c2 = c.ab_log;
        }
        RigorousReal c5 = one + (one + c1 + c2).log();
        RigorousReal xx = RigorousReal::exact(x, p);
        return (xx / RigorousReal::exact(2, p) - one / l0(p)) * c.logb -
               r * (c5 + (xx + one).log());
    };
    cert_detail::ArchConsts ca = cert_detail::arch_consts(d, cert_detail::kPinned);
    RigorousReal ra = ca.lead * ca.q_ca;
    if (ca.has_bres) ra = ra * ca.ab_log;
    Int ga_start = std::max<Int>(
        (RigorousReal::exact(2, cert_detail::kPinned) * ra / ca.logb).upper_ceil() + 1, 4);
    Int gamma_a = cert_detail::rising_crossover(arch_h, ga_start, prec);

    // p-adic side.
    cert_detail::PadicConsts cu = cert_detail::padic_consts(d, cert_detail::kPinned);
    Int gamma_u;
    RigorousReal l0p = l0(cert_detail::kPinned);
    Int g_force =
        ((RigorousReal::exact(2, cert_detail::kPinned) * cu.logb / cu.logp) / l0p).upper_ceil() + 1;
    Int g_triv = ((logb1(cert_detail::kPinned) / l0p +
                   RigorousReal::exact(1, cert_detail::kPinned)) /
                  cu.logb)
                     .upper_ceil() +
                 1;
    if (d.q_cu.empty()) {
        gamma_u = std::max(g_force, g_triv);
    } else {
        RigorousReal lqmax = RigorousReal::exact(d.q_cu.back(), cert_detail::kPinned).log();
        Int g_case_a = ((RigorousReal::exact(Int(2) * Int(cu.s_cu), cert_detail::kPinned) *
                             cu.q_cu * lqmax +
                         RigorousReal::exact(1, cert_detail::kPinned) +
                         logb1(cert_detail::kPinned) / l0p) /
                        cu.logb)
                           .upper_ceil() +
                       1;
        Int g_mono =
            (RigorousReal::exact(2, cert_detail::kPinned) * cu.lead * cu.q_cu).upper_ceil() + 1;
        auto padic_h = [&](const Int& x, mpfr_prec_t p) {
            cert_detail::PadicConsts c = cert_detail::padic_consts(d, p);
            RigorousReal one = RigorousReal::exact(1, p);
            RigorousReal chat_p = c.logb / c.logp / l0(p);
            RigorousReal chat_t = RigorousReal::exact(2, p) * c.expfac *
                                  RigorousReal::exact(d.p, p).pow_ui(c.n_yu + 1) *
                                  (RigorousReal::exact(3, p) + c.logb / c.log_qmin);
            RigorousReal xx = RigorousReal::exact(x, p);
            return xx / RigorousReal::exact(2, p) - chat_p -
                   c.lead * c.q_cu *
                       RigorousReal::max(chat_t.log() + (xx + one).log(), one);
        };
        Int start = 4;
        for (const Int& v : {g_force, g_triv, g_case_a, g_mono}) start = std::max(start, v);
        gamma_u = cert_detail::rising_crossover(padic_h, start, prec);
    }
    return std::max(gamma_a, gamma_u);
}

inline BoundCertificate three_digit_certificate(unsigned long b, const PrimeSet& s,
                                                std::optional<Int> cofactor_cap = std::nullopt,
                                                mpfr_prec_t prec = 128) {
    cert_detail::check_prec(prec);
    Int cap = cofactor_cap.value_or(std::max<Int>(Int(b), 3));
    cert_detail::BranchData d = cert_detail::make_branch_data(b, s, cap);

    BoundCertificate cert;
    cert.base = b;
    cert.s = s;
    cert.cofactor_cap = d.a_eff;
    cert.precision = prec;
    cert.m_arch = archimedean_m_bound(b, s, cap, prec);
    cert.m_padic = padic_m_bound(b, s, cap, prec);
    cert.ratio = certified_ratio(b, s, prec);

    RigorousReal q = RigorousReal::exact(1, prec);
    for (const Int& qi : s.primes()) q = q * RigorousReal::exact(qi, prec).log();
    cert.q_product = q;

    // m0 additionally clears G log(b-1) so that the chain
    //   m <= G log((b-1) M),  M > a_eff  ==>  M >= u^{1/D}
    // has a positive exponent margin at m = m0 + 1.
    RigorousReal logb1 = b > 2 ? RigorousReal::exact(Int(b) - 1, cert_detail::kPinned).log()
                               : RigorousReal::exact(0, cert_detail::kPinned);
    Int bump = (RigorousReal::exact(cert.ratio, cert_detail::kPinned) * logb1).upper_ceil() + 1;
    cert.m0 = std::max(std::max(cert.m_arch, cert.m_padic), std::max(bump, Int(1)));

    RigorousReal logb = RigorousReal::exact(Int(b), cert_detail::kPinned).log();
    RigorousReal denom = RigorousReal::exact(cert.m0 + 1, cert_detail::kPinned) /
                             RigorousReal::exact(cert.ratio, cert_detail::kPinned) -
                         logb1;
    Int dd = ((RigorousReal::exact(cert.m0 + 2, cert_detail::kPinned) * logb) / denom).upper_ceil();
    cert.exponent = Rat(1, std::max<Int>(dd, 2));

    cert.assumptions =
        "u = d3*b^m + d2*b^n + d1, m > n > 0, digits in [0,b), d1*d3 != 0, u = "
        "q1^r1...qs^rs*M with M coprime to S; m_arch/m_padic/m0 assume M <= " +
        d.a_eff.get_str() +
        "; the ratio bound m <= ratio*log((b-1)*max(M,b,3)) assumes nothing and yields "
        "[u]_S <= u^(1-exponent) whenever m > m0.";
    return cert;
}

// Certificate bound for S = the first s primes, cofactor cap max{b, 2}
// (covers the pure S-unit case M = 1).
inline Int first_primes_m_bound(unsigned long b, unsigned long s, mpfr_prec_t prec = 128) {
    if (s < 1) throw std::invalid_argument("first_primes_m_bound: need s >= 1");
    return three_digit_certificate(b, PrimeSet::first_primes(s), std::max<Int>(Int(b), 2), prec)
        .m0;
}

// (1 - eps) * (log log n) * (log log log n) / (log log log log n).
// Domain: n > exp(exp(e)), i.e. n >= 3814280, so that all four iterated
// logarithms are positive.
inline RigorousReal smooth_threshold(const Int& n, const Rat& eps, mpfr_prec_t prec = 128) {
    cert_detail::check_prec(prec);
    if (sgn(eps) <= 0 || eps >= 1)
        throw std::invalid_argument("smooth_threshold: eps must lie in (0, 1)");
    if (n < 3814280) throw std::domain_error("smooth_threshold: n <= exp(exp(e))");
    // Confirm log log log n > 1 rigorously, escalating if the enclosure
    // cannot decide (the integer boundary sits ~6e-10 above the cutoff).
    mpfr_prec_t use = prec;
    for (;; use *= 2) {
        RigorousReal lll = RigorousReal::exact(n, use).log().log().log();
        RigorousReal margin = lll - RigorousReal::exact(1, use);
        if (margin.certainly_positive()) break;
        if (margin.certainly_nonpositive())
            throw std::domain_error("smooth_threshold: n <= exp(exp(e))");
        if (use > cert_detail::kPrecCap)
            throw std::runtime_error("smooth_threshold: domain check undecidable");
    }
    RigorousReal ll = RigorousReal::exact(n, use).log().log();
    RigorousReal lll = ll.log();
    RigorousReal llll = lll.log();
    return RigorousReal::rational(Rat(1) - eps, use) * ll * lll / llll;
}

inline RigorousReal smooth_threshold(const ThresholdQuery& q, mpfr_prec_t prec = 128) {
    return smooth_threshold(q.n, q.eps, prec);
}

}  // namespace digitpart
