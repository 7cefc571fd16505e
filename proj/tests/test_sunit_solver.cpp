#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "digitpart/sunit_solver.hpp"

using namespace digitpart;

namespace {

SolutionRecord rec(unsigned long b, unsigned long m, unsigned long n, unsigned long d3,
                   unsigned long d2, unsigned long d1, std::vector<unsigned long> r, long u) {
    return SolutionRecord{b, m, n, d3, d2, d1, std::move(r), Int(u)};
}

}  // namespace

TEST_CASE("solver output for base 2, S = {3, 5}, m <= 20") {
    PrimeSet s{3, 5};
    auto found = solve_three_digit(2, s, 20);
    std::vector<SolutionRecord> expect{
        rec(2, 1, 0, 1, 0, 1, {1, 0}, 3),   rec(2, 2, 0, 1, 0, 1, {0, 1}, 5),
        rec(2, 3, 0, 1, 0, 1, {2, 0}, 9),   rec(2, 4, 3, 1, 1, 1, {0, 2}, 25),
        rec(2, 6, 4, 1, 1, 1, {4, 0}, 81),
    };
    CHECK(found == expect);
    for (const auto& r : found) {
        CHECK_NOTHROW(revalidate(r, s));
        CHECK(r.two_digit() == (r.n == 0));
    }
}

TEST_CASE("solver output for base 2, S = {7}, m <= 12") {
    auto found = solve_three_digit(2, PrimeSet{7}, 12);
    std::vector<SolutionRecord> expect{
        rec(2, 2, 1, 1, 1, 1, {1}, 7),
        rec(2, 5, 4, 1, 1, 1, {2}, 49),
    };
    CHECK(found == expect);
}

TEST_CASE("solver output for base 3, S = {2, 5}, m <= 10") {
    auto found = solve_three_digit(3, PrimeSet{2, 5}, 10);
    REQUIRE(found.size() == 11);
    CHECK(found.front() == rec(3, 1, 0, 1, 0, 1, {2, 0}, 4));
    CHECK(found[4] == rec(3, 2, 1, 1, 2, 1, {4, 0}, 16));
    CHECK(found.back() == rec(3, 5, 1, 1, 2, 1, {1, 3}, 250));
    for (const auto& r : found) CHECK_NOTHROW(revalidate(r, PrimeSet{2, 5}));
}

TEST_CASE("residue pruning never changes the result", "[property]") {
    struct Cfg {
        unsigned long b, m_max;
        PrimeSet s;
    };
    std::vector<Cfg> cfgs{{2, 16, PrimeSet{3, 5}},
                          {2, 14, PrimeSet{7}},
                          {3, 12, PrimeSet{2, 5}},
                          {10, 12, PrimeSet{3, 7}}};
    for (const auto& cfg : cfgs) {
        SolveOptions with, without;
        without.prune = false;
        auto a = solve_three_digit(cfg.b, cfg.s, cfg.m_max, with);
        auto b = solve_three_digit(cfg.b, cfg.s, cfg.m_max, without);
        CHECK(a == b);
        // shallow tables exercise the saturation fall-through
        SolveOptions shallow;
        shallow.prune_depth = 1;
        CHECK(solve_three_digit(cfg.b, cfg.s, cfg.m_max, shallow) == a);
    }
}

TEST_CASE("solver result does not depend on the worker count") {
    for (unsigned workers : {1u, 4u, 8u}) {
        SolveOptions opt;
        opt.workers = workers;
        auto found = solve_three_digit(2, PrimeSet{3, 5}, 20, opt);
        CHECK(found == solve_three_digit(2, PrimeSet{3, 5}, 20));
    }
}

TEST_CASE("solver records arrive sorted") {
    auto found = solve_three_digit(3, PrimeSet{2, 5}, 10);
    for (std::size_t i = 1; i < found.size(); ++i)
        CHECK(solve_detail::record_less(found[i - 1], found[i]));
}

TEST_CASE("solver argument validation") {
    CHECK_THROWS_AS(solve_three_digit(1, PrimeSet{3}, 10), std::invalid_argument);
    CHECK_THROWS_AS(solve_three_digit(2, PrimeSet{}, 10), std::invalid_argument);
    CHECK_THROWS_AS(solve_three_digit(2, PrimeSet{3}, 1), std::invalid_argument);
    SolveOptions bad;
    bad.workers = 0;
    CHECK_THROWS_AS(solve_three_digit(2, PrimeSet{3}, 10, bad), std::invalid_argument);
    bad.workers = 1;
    bad.prune_depth = 0;
    CHECK_THROWS_AS(solve_three_digit(2, PrimeSet{3}, 10, bad), std::invalid_argument);
}

TEST_CASE("revalidate rejects tampered records") {
    PrimeSet s{3, 5};
    SolutionRecord good = rec(2, 4, 3, 1, 1, 1, {0, 2}, 25);
    CHECK_NOTHROW(revalidate(good, s));

    SolutionRecord wrong_u = good;
    wrong_u.u = 26;
    CHECK_THROWS_AS(revalidate(wrong_u, s), std::logic_error);

    SolutionRecord wrong_r = good;
    wrong_r.r = {1, 2};
    CHECK_THROWS_AS(revalidate(wrong_r, s), std::logic_error);

    SolutionRecord short_r = good;
    short_r.r = {2};
    CHECK_THROWS_AS(revalidate(short_r, s), std::logic_error);
}

TEST_CASE("the two known cap failures below m = 16") {
    auto v = check_problem42(16);
    REQUIRE(v.size() == 2);
    CHECK(v[0] == Problem42Violation{4, 3, Int(25), Int(25), 0});
    CHECK(v[1] == Problem42Violation{6, 4, Int(81), Int(81), 0});
    CHECK(v[0].cap == Catch::Approx(8.0));
    CHECK(v[1].cap == Catch::Approx(22.627).epsilon(0.001));

    CHECK(check_problem42(3).empty());
    // prefix stability
    auto v8 = check_problem42(8);
    REQUIRE(v8.size() == 2);
    CHECK(v8[0] == v[0]);
    CHECK(v8[1] == v[1]);
    CHECK_THROWS_AS(check_problem42(1), std::invalid_argument);
}

TEST_CASE("S-part trend rows") {
    PrimeSet s{3, 5};
    auto rows = verify_spart_trend(2, 3, s, 30, Rat(9, 10));
    REQUIRE(rows.size() == 30);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const TrendRow& r = rows[i];
        CHECK(r.j == i + 1);
        CHECK(r.s_part * r.cofactor == r.u);
        CHECK_FALSE(r.p_value.has_value());
        CHECK_FALSE(r.p_status.has_value());
        CHECK_FALSE(r.p_flag.has_value());
        CHECK_FALSE(r.p_threshold.has_value());  // all u here sit below the domain
        CHECK(r.u_eps > 0);
    }
    CHECK(rows[0].u == 1);
    CHECK(rows[0].s_part == 1);

    // u = 81 = 2^6 + 2^4 + 1 is the 21st member: a pure S-unit whose S-part
    // is far above u^{9/10} = 52.2...
    const TrendRow& r81 = rows[20];
    CHECK(r81.u == 81);
    CHECK(r81.s_part == 81);
    CHECK(r81.cofactor == 1);
    CHECK_FALSE(r81.spart_flag);
    REQUIRE(r81.cap42.has_value());
    CHECK(*r81.cap42 == Catch::Approx(22.627).epsilon(0.001));

    // two-nonzero-digit members carry no cap column; u = 7 = 111 does
    CHECK_FALSE(rows[1].cap42.has_value());  // u = 3
    CHECK_FALSE(rows[4].cap42.has_value());  // u = 9 = 1001, two bits
    REQUIRE(rows[3].cap42.has_value());      // u = 7
    CHECK(*rows[3].cap42 == Catch::Approx(2.8284).epsilon(0.001));
}

TEST_CASE("S-part flags are monotone in eps") {
    PrimeSet s{3, 5};
    auto strict = verify_spart_trend(2, 3, s, 100, Rat(1, 2));
    auto loose = verify_spart_trend(2, 3, s, 100, Rat(19, 20));
    REQUIRE(strict.size() == loose.size());
    for (std::size_t i = 0; i < strict.size(); ++i) {
        if (strict[i].spart_flag) CHECK(loose[i].spart_flag);
    }
}

TEST_CASE("trend argument validation") {
    PrimeSet s{3};
    CHECK_THROWS_AS(verify_spart_trend(2, 3, s, 0, Rat(1, 2)), std::invalid_argument);
    CHECK_THROWS_AS(verify_spart_trend(2, 3, s, 100001, Rat(1, 2)), std::invalid_argument);
    CHECK_THROWS_AS(verify_spart_trend(2, 3, s, 10, Rat(0)), std::invalid_argument);
    CHECK_THROWS_AS(verify_spart_trend(2, 3, s, 10, Rat(1)), std::invalid_argument);
    CHECK_THROWS_AS(verify_spart_trend(2, 3, PrimeSet{}, 10, Rat(1, 2)), std::invalid_argument);
}

TEST_CASE("greatest-prime-factor table over the sparse stream") {
    auto rows = p_table_sparse(2, 3, StopRule::below(Int(1100000)), FactorEffort{}, Rat(1, 10));
    REQUIRE_FALSE(rows.empty());
    const TrendRow* hit = nullptr;
    for (const auto& r : rows) {
        CHECK(r.s_part == 1);  // default S is empty
        CHECK(r.cofactor == r.u);
        REQUIRE(r.p_status.has_value());
        CHECK(*r.p_status == Completeness::complete);
        CHECK_FALSE(r.p_threshold.has_value());  // u < domain floor everywhere here
        CHECK_FALSE(r.p_flag.has_value());
        if (r.u == 1049601) hit = &r;
    }
    REQUIRE(hit != nullptr);
    CHECK(*hit->p_value == 331);
    REQUIRE(hit->cap42.has_value());
    CHECK(*hit->cap42 == Catch::Approx(32768.0));
}

TEST_CASE("p table over a^m + c^n + 1 values") {
    auto rows = p_table_three_term(6, 2, StopRule::first(5), FactorEffort{}, Rat(1, 10));
    REQUIRE(rows.size() == 5);
    CHECK(rows[0].u == 9);
    CHECK(rows[1].u == 11);
    CHECK(rows[2].u == 15);
    CHECK(rows[3].u == 23);
    CHECK(rows[4].u == 39);
    using W = std::vector<std::pair<unsigned long, unsigned long>>;
    CHECK(rows[0].witnesses == W{{1, 1}});
    CHECK(rows[4].witnesses == W{{1, 5}, {2, 1}});
    CHECK(*rows[4].p_value == 13);
    for (const auto& r : rows) {
        CHECK(r.s_part == 1);
        CHECK(r.cofactor == r.u);
    }

    PrimeSet s{3};
    auto with_s = p_table_three_term(6, 2, StopRule::first(1), FactorEffort{}, Rat(1, 10), s);
    REQUIRE(with_s.size() == 1);
    CHECK(with_s[0].s_part == 9);
    CHECK(with_s[0].cofactor == 1);
}

TEST_CASE("p columns stay honest under a starved factoring budget") {
    FactorEffort eff;
    eff.trial_ceiling = 100;
    auto rows = p_table_sparse(10, 3, StopRule::below(Int(10500)), eff, Rat(1, 10));
    REQUIRE(rows.size() == 2565);
    unsigned long partial = 0;
    for (const auto& r : rows) {
        REQUIRE(r.p_status.has_value());
        if (*r.p_status == Completeness::partial) {
            ++partial;
            CHECK_FALSE(r.p_flag.has_value());
            CHECK((r.u == 10201 || r.u == 10403));  // 101^2 and 101 * 103
            CHECK(*r.p_value == 1);  // no certified prime factor at all
        }
    }
    CHECK(partial == 2);
}
