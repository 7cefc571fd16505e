#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "digitpart/rigorous.hpp"

using namespace digitpart;

namespace {

Rat random_rat(std::mt19937_64& rng, long lo, long hi) {
    std::uniform_int_distribution<long> num(lo, hi);
    std::uniform_int_distribution<long> den(1, hi);
    Rat r(num(rng), den(rng));
    r.canonicalize();
    return r;
}

}  // namespace

TEST_CASE("exact integers become degenerate intervals") {
    RigorousReal v = RigorousReal::exact(Int(42), 128);
    CHECK(v.lower_q() == Rat(42));
    CHECK(v.upper_q() == Rat(42));
    CHECK(v.contains(Rat(42)));
    CHECK_FALSE(v.contains(Rat(41)));
}

TEST_CASE("rational constructor encloses the value tightly") {
    Rat third(1, 3);
    RigorousReal v = RigorousReal::rational(third, 128);
    CHECK(v.lower_q() <= third);
    CHECK(v.upper_q() >= third);
    // The interval itself is ~2^-128 wide; the double endpoints round
    // outward, so they can straddle at most a couple of double ulps.
    CHECK(v.upper_q() - v.lower_q() < Rat(1, Int(1) << 100));
    CHECK(v.width_d() < 1e-15);
}

TEST_CASE("field operations preserve containment", "[property]") {
    std::mt19937_64 rng(20240811);
    for (int i = 0; i < 2000; ++i) {
        Rat a = random_rat(rng, -1000, 1000);
        Rat b = random_rat(rng, -1000, 1000);
        RigorousReal ra = RigorousReal::rational(a, 96);
        RigorousReal rb = RigorousReal::rational(b, 96);
        CHECK((ra + rb).contains(a + b));
        CHECK((ra - rb).contains(a - b));
        CHECK((ra * rb).contains(Rat(a * b)));
        if (b > 0) CHECK((ra / rb).contains(Rat(a / b)));
    }
}

TEST_CASE("division requires a certainly positive divisor") {
    RigorousReal one = RigorousReal::exact(1, 64);
    RigorousReal z = RigorousReal::exact(1, 64) - RigorousReal::exact(1, 64);
    CHECK(z.contains_zero());
    CHECK_THROWS_AS(one / z, std::domain_error);
}

TEST_CASE("log fixes 1 at zero and rejects nonpositive input") {
    RigorousReal l1 = RigorousReal::exact(1, 128).log();
    CHECK(l1.lower_q() == 0);
    CHECK(l1.upper_q() == 0);
    CHECK_THROWS_AS(RigorousReal::exact(0, 64).log(), std::domain_error);
    CHECK_THROWS_AS(RigorousReal::exact(Int(-3), 64).log(), std::domain_error);
}

TEST_CASE("log 2 and log 1/2") {
    RigorousReal l2 = RigorousReal::exact(2, 128).log();
    CHECK(l2.lower_d() <= 0.6931471805599453);
    CHECK(l2.upper_d() > 0.6931471805599452);
    RigorousReal lh = RigorousReal::rational(Rat(1, 2), 128).log();
    CHECK(lh.lower_d() < -0.6931471805599452);
    CHECK(lh.upper_d() > -0.6931471805599454);
    CHECK((l2 + lh).contains(Rat(0)));
}

TEST_CASE("exp(log x) contains x", "[property]") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 500; ++i) {
        Rat x = random_rat(rng, 1, 5000);
        RigorousReal v = RigorousReal::rational(x, 128).log().exp();
        CHECK(v.contains(x));
    }
}

TEST_CASE("sqrt and pow_ui") {
    RigorousReal s = RigorousReal::exact(2, 128).sqrt();
    CHECK((s * s).contains(Rat(2)));
    CHECK(RigorousReal::exact(3, 128).pow_ui(4).contains(Rat(81)));
    CHECK(RigorousReal::exact(7, 128).pow_ui(0).contains(Rat(1)));
}

TEST_CASE("euler constant") {
    RigorousReal e = RigorousReal::euler(128);
    CHECK(e.lower_d() <= 2.718281828459045);
    CHECK(e.upper_d() >= 2.718281828459045);
    CHECK(e.width_d() < 1e-14);
    CHECK(e.upper_q() - e.lower_q() < Rat(1, Int(1) << 100));
}

TEST_CASE("min max") {
    RigorousReal a = RigorousReal::exact(2, 64);
    RigorousReal b = RigorousReal::exact(5, 64);
    CHECK(RigorousReal::max(a, b).contains(Rat(5)));
    CHECK(RigorousReal::min(a, b).contains(Rat(2)));
}

TEST_CASE("certainty predicates") {
    CHECK(RigorousReal::exact(1, 64).certainly_positive());
    CHECK(RigorousReal::exact(Int(-1), 64).certainly_negative());
    RigorousReal tiny = RigorousReal::rational(Rat(1, Int("1000000000000000000000")), 128);
    CHECK(tiny.certainly_positive());
    RigorousReal z = RigorousReal::exact(3, 64) - RigorousReal::exact(3, 64);
    CHECK_FALSE(z.certainly_positive());
    CHECK(z.certainly_nonpositive());
    CHECK(RigorousReal::exact(1, 64).certainly_less(RigorousReal::exact(2, 64)));
    CHECK(RigorousReal::exact(2, 64).certainly_greater(RigorousReal::exact(1, 64)));
}

TEST_CASE("integer endpoint extraction") {
    RigorousReal v = RigorousReal::rational(Rat(7, 2), 128);
    CHECK(v.upper_ceil() == 4);
    CHECK(v.upper_floor() == 3);
    CHECK(v.lower_ceil() == 4);
    RigorousReal w = RigorousReal::exact(5, 128);
    CHECK(w.upper_ceil() == 5);
    CHECK(w.upper_floor() == 5);
}

TEST_CASE("higher precision gives nested enclosures") {
    Rat x(17, 7);
    RigorousReal lo = RigorousReal::rational(x, 64).log();
    RigorousReal hi = RigorousReal::rational(x, 256).log();
    CHECK(lo.lower_q() <= hi.lower_q());
    CHECK(hi.upper_q() <= lo.upper_q());
    CHECK(hi.width_d() <= lo.width_d());
}

TEST_CASE("hex serialization is lossless") {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 200; ++i) {
        Rat x = random_rat(rng, 1, 100000);
        RigorousReal v = RigorousReal::rational(x, 192).log().exp();
        RigorousReal w = RigorousReal::from_hex(v.hex(), v.precision());
        CHECK(w.lower_q() == v.lower_q());
        CHECK(w.upper_q() == v.upper_q());
        CHECK(w.precision() == v.precision());
    }
}

TEST_CASE("binary operations join operand precisions") {
    RigorousReal a(64), b(256);
    a = RigorousReal::exact(2, 64);
    b = RigorousReal::exact(3, 256);
    CHECK((a * b).precision() == 256);
    CHECK((a + b).precision() == 256);
}

TEST_CASE("precision bounds are enforced") {
    CHECK_THROWS_AS(RigorousReal::exact(1, 0), std::invalid_argument);
    CHECK_THROWS_AS(RigorousReal::exact(1, (1 << 20) + 1), std::invalid_argument);
}
