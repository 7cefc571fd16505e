#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace digitpart {

using Int = mpz_class;
using Rat = mpq_class;

inline Int ipow(const Int& base, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline Int ipow(unsigned long base, unsigned long e) {
    Int r;
    mpz_ui_pow_ui(r.get_mpz_t(), base, e);
    return r;
}

// q^e for signed e; q must be nonzero when e < 0.
inline Rat qpow(const Rat& q, long e) {
    if (e == 0) return Rat(1);
    Rat r;
    unsigned long a = static_cast<unsigned long>(e < 0 ? -e : e);
    mpz_pow_ui(r.get_num_mpz_t(), q.get_num_mpz_t(), a);
    mpz_pow_ui(r.get_den_mpz_t(), q.get_den_mpz_t(), a);
    if (e < 0) {
        if (sgn(q) == 0) throw std::domain_error("qpow: zero base with negative exponent");
        mpq_inv(r.get_mpq_t(), r.get_mpq_t());
    }
    r.canonicalize();
    return r;
}

// Accepts "123", "1e100", "2.5e3" (must denote an integer).
inline Int parse_int(const std::string& text) {
    auto epos = text.find_first_of("eE");
    std::string mant = (epos == std::string::npos) ? text : text.substr(0, epos);
    long exp10 = 0;
    if (epos != std::string::npos) exp10 = std::stol(text.substr(epos + 1));
    auto dot = mant.find('.');
    if (dot != std::string::npos) {
        exp10 -= static_cast<long>(mant.size() - dot - 1);
        mant.erase(dot, 1);
    }
    if (mant.empty() || mant == "-" || mant == "+") throw std::invalid_argument("parse_int: empty mantissa");
    Int m(mant);
    if (exp10 < 0) {
        Int scale = ipow(Int(10), static_cast<unsigned long>(-exp10));
        if (m % scale != 0) throw std::invalid_argument("parse_int: not an integer: " + text);
        return m / scale;
    }
    return m * ipow(Int(10), static_cast<unsigned long>(exp10));
}

// Decimal (optionally scientific) text to an exact rational.
inline Rat parse_rational(const std::string& text) {
    if (auto slash = text.find('/'); slash != std::string::npos) {
        Int num = parse_int(text.substr(0, slash));
        Int den = parse_int(text.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("parse_rational: zero denominator");
        Rat r(num, den);
        r.canonicalize();
        return r;
    }
    auto epos = text.find_first_of("eE");
    std::string mant = (epos == std::string::npos) ? text : text.substr(0, epos);
    long exp10 = 0;
    if (epos != std::string::npos) exp10 = std::stol(text.substr(epos + 1));
    auto dot = mant.find('.');
    if (dot != std::string::npos) {
        exp10 -= static_cast<long>(mant.size() - dot - 1);
        mant.erase(dot, 1);
    }
    if (mant.empty() || mant == "-" || mant == "+") throw std::invalid_argument("parse_rational: empty mantissa");
    Rat r{Int(mant)};
    if (exp10 < 0)
        r /= Rat(ipow(Int(10), static_cast<unsigned long>(-exp10)));
    else
        r *= Rat(ipow(Int(10), static_cast<unsigned long>(exp10)));
    r.canonicalize();
    return r;
}

inline std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace digitpart
