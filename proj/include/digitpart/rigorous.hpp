#pragma once

#include <mpfr.h>

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>

#include "digitpart/common.hpp"

namespace digitpart {

// Closed interval [lo, hi] with endpoints rounded outward (RNDD/RNDU), so the
// represented real set always contains the exact value of the expression that
// produced it.  Comparisons are three-valued: a predicate is only reported
// when the enclosure decides it.
class RigorousReal {
  public:
    explicit RigorousReal(mpfr_prec_t prec = 128) : prec_(check_prec(prec)) {
        mpfr_init2(lo_, prec_);
        mpfr_init2(hi_, prec_);
        mpfr_set_ui(lo_, 0, MPFR_RNDD);
        mpfr_set_ui(hi_, 0, MPFR_RNDU);
    }

    RigorousReal(const RigorousReal& o) : prec_(o.prec_) {
        mpfr_init2(lo_, prec_);
        mpfr_init2(hi_, prec_);
        mpfr_set(lo_, o.lo_, MPFR_RNDD);
        mpfr_set(hi_, o.hi_, MPFR_RNDU);
    }

    RigorousReal(RigorousReal&& o) noexcept : prec_(o.prec_) {
        mpfr_init2(lo_, prec_);
        mpfr_init2(hi_, prec_);
        mpfr_swap(lo_, o.lo_);
        mpfr_swap(hi_, o.hi_);
    }

    RigorousReal& operator=(RigorousReal o) noexcept {
        std::swap(prec_, o.prec_);
        mpfr_swap(lo_, o.lo_);
        mpfr_swap(hi_, o.hi_);
        return *this;
    }

    ~RigorousReal() {
        mpfr_clear(lo_);
        mpfr_clear(hi_);
    }

    static RigorousReal exact(const Int& v, mpfr_prec_t prec) {
        RigorousReal r(prec);
        mpfr_set_z(r.lo_, v.get_mpz_t(), MPFR_RNDD);
        mpfr_set_z(r.hi_, v.get_mpz_t(), MPFR_RNDU);
        return r;
    }

    static RigorousReal exact(long v, mpfr_prec_t prec) { return exact(Int(v), prec); }

    static RigorousReal rational(const Rat& q, mpfr_prec_t prec) {
        RigorousReal r(prec);
        mpfr_set_q(r.lo_, q.get_mpq_t(), MPFR_RNDD);
        mpfr_set_q(r.hi_, q.get_mpq_t(), MPFR_RNDU);
        return r;
    }

    // Enclosure of e.
    static RigorousReal euler(mpfr_prec_t prec) {
        RigorousReal one = exact(1, prec);
        return one.exp();
    }

    mpfr_prec_t precision() const { return prec_; }

    RigorousReal operator+(const RigorousReal& o) const {
        RigorousReal r(join(o));
        mpfr_add(r.lo_, lo_, o.lo_, MPFR_RNDD);
        mpfr_add(r.hi_, hi_, o.hi_, MPFR_RNDU);
        return r;
    }

    RigorousReal operator-(const RigorousReal& o) const {
        RigorousReal r(join(o));
        mpfr_sub(r.lo_, lo_, o.hi_, MPFR_RNDD);
        mpfr_sub(r.hi_, hi_, o.lo_, MPFR_RNDU);
        return r;
    }

    RigorousReal operator-() const {
        RigorousReal r(prec_);
        mpfr_neg(r.lo_, hi_, MPFR_RNDD);
        mpfr_neg(r.hi_, lo_, MPFR_RNDU);
        return r;
    }

    RigorousReal operator*(const RigorousReal& o) const {
        RigorousReal r(join(o));
        mpfr_t t;
        mpfr_init2(t, r.prec_);
        // lower: min of the four corner products rounded down
        mpfr_mul(r.lo_, lo_, o.lo_, MPFR_RNDD);
        mpfr_mul(t, lo_, o.hi_, MPFR_RNDD);
        mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
        mpfr_mul(t, hi_, o.lo_, MPFR_RNDD);
        mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
        mpfr_mul(t, hi_, o.hi_, MPFR_RNDD);
        mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
        // upper: max of the four corner products rounded up
        mpfr_mul(r.hi_, lo_, o.lo_, MPFR_RNDU);
        mpfr_mul(t, lo_, o.hi_, MPFR_RNDU);
        mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
        mpfr_mul(t, hi_, o.lo_, MPFR_RNDU);
        mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
        mpfr_mul(t, hi_, o.hi_, MPFR_RNDU);
        mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
        mpfr_clear(t);
        return r;
    }

    // Divisor must be strictly positive (its lower endpoint > 0).
    RigorousReal operator/(const RigorousReal& o) const {
        if (mpfr_sgn(o.lo_) <= 0)
            throw std::domain_error("RigorousReal: division requires a strictly positive divisor");
        RigorousReal r(join(o));
        mpfr_t t;
        mpfr_init2(t, r.prec_);
        mpfr_div(r.lo_, lo_, o.lo_, MPFR_RNDD);
        mpfr_div(t, lo_, o.hi_, MPFR_RNDD);
        mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
        mpfr_div(r.hi_, hi_, o.lo_, MPFR_RNDU);
        mpfr_div(t, hi_, o.hi_, MPFR_RNDU);
        mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
        mpfr_clear(t);
        return r;
    }

    // Natural log; requires lo > 0.
    RigorousReal log() const {
        if (mpfr_sgn(lo_) <= 0)
            throw std::domain_error("RigorousReal: log of a nonpositive enclosure");
        RigorousReal r(prec_);
        mpfr_log(r.lo_, lo_, MPFR_RNDD);
        mpfr_log(r.hi_, hi_, MPFR_RNDU);
        return r;
    }

    RigorousReal exp() const {
        RigorousReal r(prec_);
        mpfr_exp(r.lo_, lo_, MPFR_RNDD);
        mpfr_exp(r.hi_, hi_, MPFR_RNDU);
        return r;
    }

    // Requires lo >= 0.
    RigorousReal sqrt() const {
        if (mpfr_sgn(lo_) < 0)
            throw std::domain_error("RigorousReal: sqrt of a negative enclosure");
        RigorousReal r(prec_);
        mpfr_sqrt(r.lo_, lo_, MPFR_RNDD);
        mpfr_sqrt(r.hi_, hi_, MPFR_RNDU);
        return r;
    }

    // x^k for nonnegative x (monotone powering).
    RigorousReal pow_ui(unsigned long k) const {
        if (mpfr_sgn(lo_) < 0)
            throw std::domain_error("RigorousReal: pow_ui needs a nonnegative enclosure");
        RigorousReal r(prec_);
        mpfr_pow_ui(r.lo_, lo_, k, MPFR_RNDD);
        mpfr_pow_ui(r.hi_, hi_, k, MPFR_RNDU);
        return r;
    }

    static RigorousReal max(const RigorousReal& a, const RigorousReal& b) {
        RigorousReal r(a.join(b));
        mpfr_max(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
        mpfr_max(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
        return r;
    }

    static RigorousReal min(const RigorousReal& a, const RigorousReal& b) {
        RigorousReal r(a.join(b));
        mpfr_min(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
        mpfr_min(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
        return r;
    }

    bool certainly_positive() const { return mpfr_sgn(lo_) > 0; }
    bool certainly_negative() const { return mpfr_sgn(hi_) < 0; }
    bool certainly_nonpositive() const { return mpfr_sgn(hi_) <= 0; }
    bool certainly_less(const RigorousReal& o) const { return mpfr_cmp(hi_, o.lo_) < 0; }
    bool certainly_greater(const RigorousReal& o) const { return mpfr_cmp(lo_, o.hi_) > 0; }
    bool contains_zero() const { return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0; }

    bool contains(const Rat& q) const {
        return mpfr_cmp_q(lo_, q.get_mpq_t()) <= 0 && mpfr_cmp_q(hi_, q.get_mpq_t()) >= 0;
    }

    double lower_d() const { return mpfr_get_d(lo_, MPFR_RNDD); }
    double upper_d() const { return mpfr_get_d(hi_, MPFR_RNDU); }
    double mid_d() const { return 0.5 * (lower_d() + upper_d()); }
    double width_d() const { return upper_d() - lower_d(); }

    // Exact endpoint as a rational (every finite mpfr value is rational).
    Rat lower_q() const { return to_rat(lo_); }
    Rat upper_q() const { return to_rat(hi_); }

    // floor(hi) as an integer; endpoint must be finite.
    Int upper_floor() const {
        if (!mpfr_number_p(hi_)) throw std::domain_error("RigorousReal: non-finite endpoint");
        Int r;
        mpfr_get_z(r.get_mpz_t(), hi_, MPFR_RNDD);
        return r;
    }

    // ceil(hi): an integer certainly >= every point of the enclosure.
    Int upper_ceil() const {
        if (!mpfr_number_p(hi_)) throw std::domain_error("RigorousReal: non-finite endpoint");
        Int r;
        mpfr_get_z(r.get_mpz_t(), hi_, MPFR_RNDU);
        return r;
    }

    Int lower_ceil() const {
        if (!mpfr_number_p(lo_)) throw std::domain_error("RigorousReal: non-finite endpoint");
        Int r;
        mpfr_get_z(r.get_mpz_t(), lo_, MPFR_RNDU);
        return r;
    }

    bool is_finite() const { return mpfr_number_p(lo_) && mpfr_number_p(hi_); }

    // Lossless hex-float form, "lo hi".
    std::string hex() const { return fmt("%Ra", lo_) + " " + fmt("%Ra", hi_); }

    static RigorousReal from_hex(const std::string& text, mpfr_prec_t prec) {
        auto sp = text.find(' ');
        if (sp == std::string::npos) throw std::invalid_argument("RigorousReal: bad hex pair");
        RigorousReal r(prec);
        if (mpfr_set_str(r.lo_, text.substr(0, sp).c_str(), 0, MPFR_RNDD) != 0 ||
            mpfr_set_str(r.hi_, text.substr(sp + 1).c_str(), 0, MPFR_RNDU) != 0)
            throw std::invalid_argument("RigorousReal: bad hex pair");
        if (mpfr_cmp(r.lo_, r.hi_) > 0) throw std::invalid_argument("RigorousReal: endpoints out of order");
        return r;
    }

    std::string decimal(int digits = 17) const {
        std::string f = "%." + std::to_string(digits) + "RNg";
        return fmt(f.c_str(), lo_) + " " + fmt(f.c_str(), hi_);
    }

    std::string lower_str(int digits = 17) const {
        std::string f = "%." + std::to_string(digits) + "RDg";
        return fmt(f.c_str(), lo_);
    }

    std::string upper_str(int digits = 17) const {
        std::string f = "%." + std::to_string(digits) + "RUg";
        return fmt(f.c_str(), hi_);
    }

  private:
    static mpfr_prec_t check_prec(mpfr_prec_t p) {
        if (p < MPFR_PREC_MIN || p > 1 << 20)
            throw std::invalid_argument("RigorousReal: precision out of range");
        return p;
    }

    mpfr_prec_t join(const RigorousReal& o) const { return std::max(prec_, o.prec_); }

    static Rat to_rat(const mpfr_t x) {
        if (!mpfr_number_p(x)) throw std::domain_error("RigorousReal: non-finite endpoint");
        mpf_t f;
        mpf_init2(f, mpfr_get_prec(x));
        mpfr_get_f(f, x, MPFR_RNDN);  // exact: target has the same precision
        Rat q{mpf_class(f)};
        mpf_clear(f);
        return q;
    }

    static std::string fmt(const char* f, const mpfr_t v) {
        char* s = nullptr;
        if (mpfr_asprintf(&s, f, v) < 0) throw std::runtime_error("mpfr_asprintf failed");
        std::string out(s);
        mpfr_free_str(s);
        return out;
    }

    mpfr_t lo_, hi_;
    mpfr_prec_t prec_;
};

}  // namespace digitpart
