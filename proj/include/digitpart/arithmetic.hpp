#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "digitpart/common.hpp"

namespace digitpart {

enum class Primality { composite, prime, probably_prime };

// Largest bound below which the fixed Miller-Rabin witness set {2,...,41}
// is a deterministic primality test.
inline const Int& mr_certainty_limit() {
    static const Int limit("3317044064679887385961981");
    return limit;
}

namespace detail {

inline bool miller_rabin_witness(const Int& n, const Int& d, unsigned long s, unsigned long a) {
    Int base(a);
    base %= n;
    if (base == 0) return false;  // a shares a factor only when a >= n; treat as passing
    Int x;
    mpz_powm(x.get_mpz_t(), base.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
    if (x == 1 || x == n - 1) return false;
    for (unsigned long i = 1; i < s; ++i) {
        x = (x * x) % n;
        if (x == n - 1) return false;
    }
    return true;  // a witnesses compositeness
}

}  // namespace detail

inline Primality classify_prime(const Int& n) {
    if (n < 2) return Primality::composite;
    static const unsigned long small[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};
    for (unsigned long p : small) {
        if (n == p) return Primality::prime;
        if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return Primality::composite;
    }
    Int d = n - 1;
    unsigned long s = mpz_remove(d.get_mpz_t(), d.get_mpz_t(), Int(2).get_mpz_t());
    for (unsigned long a : small)
        if (detail::miller_rabin_witness(n, d, s, a)) return Primality::composite;
    return (n < mr_certainty_limit()) ? Primality::prime : Primality::probably_prime;
}

inline bool is_prime(const Int& n) { return classify_prime(n) == Primality::prime; }

// A set of primes, kept strictly increasing.  Every member must be certified
// prime; candidates at or above the Miller-Rabin certainty limit are rejected.
class PrimeSet {
  public:
    PrimeSet() = default;

    explicit PrimeSet(std::vector<Int> primes) : primes_(std::move(primes)) {
        std::sort(primes_.begin(), primes_.end());
        for (std::size_t i = 0; i < primes_.size(); ++i) {
            if (i > 0 && primes_[i] == primes_[i - 1])
                throw std::invalid_argument("PrimeSet: duplicate prime " + primes_[i].get_str());
            switch (classify_prime(primes_[i])) {
                case Primality::prime:
                    break;
                case Primality::composite:
                    throw std::invalid_argument("PrimeSet: " + primes_[i].get_str() + " is not prime");
                case Primality::probably_prime:
                    throw std::invalid_argument("PrimeSet: cannot certify " + primes_[i].get_str() +
                                                " (at or above the deterministic test limit)");
            }
        }
    }

    PrimeSet(std::initializer_list<unsigned long> primes)
        : PrimeSet(std::vector<Int>(primes.begin(), primes.end())) {}

    static PrimeSet first_primes(unsigned long s) {
        std::vector<Int> ps;
        Int c = 2;
        while (ps.size() < s) {
            if (is_prime(c)) ps.push_back(c);
            ++c;
        }
        return PrimeSet(std::move(ps));
    }

    const std::vector<Int>& primes() const { return primes_; }
    std::size_t size() const { return primes_.size(); }
    bool empty() const { return primes_.empty(); }
    const Int& operator[](std::size_t i) const { return primes_.at(i); }

    bool contains(const Int& p) const {
        return std::binary_search(primes_.begin(), primes_.end(), p);
    }

    bool operator==(const PrimeSet& o) const { return primes_ == o.primes_; }

    // True when every prime of o is also here.
    bool superset_of(const PrimeSet& o) const {
        for (const Int& p : o.primes_)
            if (!contains(p)) return false;
        return true;
    }

  private:
    std::vector<Int> primes_;
};

// v_p(n): exponent of p in n.  n must be nonzero, p prime.
inline unsigned long valuation(const Int& n, const Int& p) {
    if (n == 0) throw std::invalid_argument("valuation: undefined at 0");
    if (classify_prime(p) != Primality::prime)
        throw std::invalid_argument("valuation: " + p.get_str() + " is not a certified prime");
    Int q;
    return mpz_remove(q.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t());
}

// n = q_1^{e_1} ... q_s^{e_s} * cofactor with cofactor coprime to S.
struct SFactorization {
    Int n;
    PrimeSet s;
    std::vector<unsigned long> exponents;  // aligned with s.primes()
    Int cofactor;

    Int s_part() const {
        Int r = 1;
        for (std::size_t i = 0; i < exponents.size(); ++i) r *= ipow(s[i], exponents[i]);
        return r;
    }
};

inline SFactorization s_factorization(const Int& n, const PrimeSet& s) {
    if (n < 1) throw std::invalid_argument("s_factorization: n must be positive");
    SFactorization f;
    f.n = n;
    f.s = s;
    f.cofactor = n;
    f.exponents.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i)
        f.exponents.push_back(
            mpz_remove(f.cofactor.get_mpz_t(), f.cofactor.get_mpz_t(), s[i].get_mpz_t()));
    return f;
}

// [n]_S: the largest divisor of n composed only of primes in S.
inline Int s_part(const Int& n, const PrimeSet& s) {
    if (n < 1) throw std::invalid_argument("s_part: n must be positive");
    Int cof = n;
    for (std::size_t i = 0; i < s.size(); ++i)
        mpz_remove(cof.get_mpz_t(), cof.get_mpz_t(), s[i].get_mpz_t());
    return n / cof;
}

// Deterministic factoring budget.  The trial stage always runs to the
// ceiling; the optional second stage is Brent's cycle-finding method with a
// fixed iteration budget, so outcomes never depend on timing or randomness.
struct FactorEffort {
    Int trial_ceiling = 1000000;
    bool second_stage = false;
    unsigned long rho_iterations = 2000000;

    void validate() const {
        if (trial_ceiling < 2) throw std::invalid_argument("FactorEffort: trial ceiling must be >= 2");
    }
};

enum class Completeness { complete, partial };

struct Factorization {
    std::vector<std::pair<Int, unsigned long>> factors;  // certified primes, increasing
    std::vector<Int> opaque;  // unresolved parts; every prime factor exceeds the trial ceiling

    bool complete() const { return opaque.empty(); }

    Int unfactored() const {
        Int u = 1;
        for (const Int& c : opaque) u *= c;
        return u;
    }
};

namespace detail {

inline void push_factor(Factorization& f, const Int& p, unsigned long e) {
    for (auto& [q, k] : f.factors)
        if (q == p) {
            k += e;
            return;
        }
    f.factors.emplace_back(p, e);
}

// Trial division up to min(ceiling, sqrt(n)) on native words.
inline void trial_stage_u64(std::uint64_t& n, std::uint64_t ceiling, Factorization& f) {
    for (std::uint64_t d : {2ull, 3ull}) {
        if (d > ceiling) return;
        unsigned long e = 0;
        while (n % d == 0) {
            n /= d;
            ++e;
        }
        if (e) push_factor(f, Int(static_cast<unsigned long>(d)), e);
    }
    std::uint64_t d = 5;
    unsigned step = 2;
    while (d <= ceiling && d <= n / d) {
        unsigned long e = 0;
        while (n % d == 0) {
            n /= d;
            ++e;
        }
        if (e) push_factor(f, Int(static_cast<unsigned long>(d)), e);
        d += step;
        step = 6 - step;
    }
    if (n > 1 && d > n / d) {  // remainder is prime
        push_factor(f, Int(static_cast<unsigned long>(n)), 1);
        n = 1;
    }
}

inline void trial_stage(Int& n, const Int& ceiling, Factorization& f) {
    if (mpz_fits_ulong_p(n.get_mpz_t())) {
        std::uint64_t ceil_u64 = mpz_fits_ulong_p(ceiling.get_mpz_t())
                                     ? ceiling.get_ui()
                                     : ~0ull;
        std::uint64_t m = n.get_ui();
        trial_stage_u64(m, ceil_u64, f);
        n = static_cast<unsigned long>(m);
        return;
    }
    for (unsigned long d : {2ul, 3ul}) {
        if (ceiling < d) return;
        unsigned long e = mpz_remove(n.get_mpz_t(), n.get_mpz_t(), Int(d).get_mpz_t());
        if (e) push_factor(f, Int(d), e);
        if (mpz_fits_ulong_p(n.get_mpz_t())) {
            std::uint64_t ceil_u64 =
                mpz_fits_ulong_p(ceiling.get_mpz_t()) ? ceiling.get_ui() : ~0ull;
            std::uint64_t m = n.get_ui();
            trial_stage_u64(m, ceil_u64, f);
            n = static_cast<unsigned long>(m);
            return;
        }
    }
    Int d = 5;
    unsigned step = 2;
    Int root;
    mpz_sqrt(root.get_mpz_t(), n.get_mpz_t());
    while (d <= ceiling && d <= root) {
        if (mpz_divisible_p(n.get_mpz_t(), d.get_mpz_t())) {
            unsigned long e = mpz_remove(n.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
            push_factor(f, d, e);
            if (mpz_fits_ulong_p(n.get_mpz_t())) {
                std::uint64_t ceil_u64 =
                    mpz_fits_ulong_p(ceiling.get_mpz_t()) ? ceiling.get_ui() : ~0ull;
                std::uint64_t m = n.get_ui();
                trial_stage_u64(m, ceil_u64, f);
                n = static_cast<unsigned long>(m);
                return;
            }
            mpz_sqrt(root.get_mpz_t(), n.get_mpz_t());
        }
        d += step;
        step = 6 - step;
    }
    if (n > 1 && d > root) {
        push_factor(f, n, 1);
        n = 1;
    }
}

// Brent's variant of the rho method.  Returns a nontrivial divisor of n, or 0
// once the shared step budget is exhausted.  Polynomial offsets advance
// deterministically (c = 1, 2, ...), so results are reproducible.
inline Int brent_rho(const Int& n, unsigned long budget, unsigned long& used) {
    const unsigned long batch = 128;
    for (unsigned long c = 1; used < budget; ++c) {
        Int x = 2, y = 2, ys = 2, d = 1, q = 1;
        unsigned long r = 1;
        while (d == 1 && used < budget) {
            x = y;
            for (unsigned long i = 0; i < r && used < budget; ++i) {
                y = (y * y + c) % n;
                ++used;
            }
            unsigned long k = 0;
            while (k < r && d == 1 && used < budget) {
                ys = y;
                unsigned long lim = std::min(batch, r - k);
                for (unsigned long i = 0; i < lim && used < budget; ++i) {
                    y = (y * y + c) % n;
                    q = (q * abs(x - y)) % n;
                    ++used;
                }
                d = gcd(q, n);
                k += lim;
            }
            r *= 2;
        }
        if (d == n) {
            do {
                ys = (ys * ys + c) % n;
                d = gcd(abs(x - ys), n);
            } while (d == 1);
        }
        if (d > 1 && d < n) return d;
    }
    return 0;
}

}  // namespace detail

inline Factorization factorize(const Int& n, const FactorEffort& effort = {}) {
    if (n < 1) throw std::invalid_argument("factorize: n must be positive");
    effort.validate();
    Factorization f;
    Int rem = n;
    detail::trial_stage(rem, effort.trial_ceiling, f);

    std::vector<Int> pending;
    if (rem > 1) pending.push_back(rem);
    unsigned long used = 0;
    while (!pending.empty()) {
        Int part = pending.back();
        pending.pop_back();
        Primality cls = classify_prime(part);
        if (cls == Primality::prime) {
            detail::push_factor(f, part, 1);
            continue;
        }
        Int div;
        if (cls == Primality::composite && effort.second_stage &&
            (div = detail::brent_rho(part, effort.rho_iterations, used)) != 0) {
            pending.push_back(div);
            pending.push_back(part / div);
        } else {
            f.opaque.push_back(part);
        }
    }
    std::sort(f.factors.begin(), f.factors.end());
    std::sort(f.opaque.begin(), f.opaque.end());
    return f;
}

struct GreatestPrimeFactor {
    Int value;  // P[n]; under partial status, the largest certified prime (1 if none)
    Completeness status;
};

// P[1] = 1 by convention.
inline GreatestPrimeFactor greatest_prime_factor(const Int& n, const FactorEffort& effort = {}) {
    Factorization f = factorize(n, effort);
    Int best = 1;
    for (const auto& [p, e] : f.factors) best = std::max(best, p);
    return {best, f.complete() ? Completeness::complete : Completeness::partial};
}

struct Radical {
    Int value;  // Q[n]; under partial status, a multiple of the true radical dividing n
    Completeness status;
};

// Q[1] = 1 by convention.
inline Radical radical(const Int& n, const FactorEffort& effort = {}) {
    Factorization f = factorize(n, effort);
    Int r = 1;
    for (const auto& [p, e] : f.factors) r *= p;
    r *= f.unfactored();
    return {r, f.complete() ? Completeness::complete : Completeness::partial};
}

enum class Smoothness { smooth, not_smooth, unknown };

// Is every prime factor of n at most bound?  Answers only when certain:
// a certified prime above the bound (or an unresolved part whose factors all
// exceed a trial ceiling >= bound) settles it negatively; a complete
// factorization, or unresolved parts that are themselves <= bound, settles it
// positively.
inline Smoothness is_smooth(const Int& n, const Int& bound, const FactorEffort& effort = {}) {
    if (n < 1) throw std::invalid_argument("is_smooth: n must be positive");
    if (bound < 2) throw std::invalid_argument("is_smooth: bound must be >= 2");
    Factorization f = factorize(n, effort);
    for (const auto& [p, e] : f.factors)
        if (p > bound) return Smoothness::not_smooth;
    if (f.complete()) return Smoothness::smooth;
    if (effort.trial_ceiling >= bound) return Smoothness::not_smooth;
    bool all_small = true;
    for (const Int& part : f.opaque)
        if (part > bound) all_small = false;
    return all_small ? Smoothness::smooth : Smoothness::unknown;
}

}  // namespace digitpart
