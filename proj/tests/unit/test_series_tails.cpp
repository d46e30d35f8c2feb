#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ousv/series_tails.hpp"
#include "test_util.hpp"

using namespace ousv::series;
using testutil::rel_err;

TEST_SUITE_BEGIN("series_tails");

TEST_CASE("zeta-value limits at lambda = 0") {
    CHECK(rel_err(b0(0.0), 1.0 / 3.0) <= 1e-15);
    CHECK(rel_err(c0(0.0), 2.0 / 45.0) <= 1e-15);
    CHECK(rel_err(d0(0.0), 8.0 / 945.0) <= 1e-15);
    CHECK(rel_err(f0(0.0), 1.0 / 45.0) <= 1e-15);
    CHECK(rel_err(g0(0.0), 4.0 / 45.0) <= 1e-15);
}

TEST_CASE("spot values and asymptotes") {
    CHECK(b0(1.0) == doctest::Approx(0.31303528549933130).epsilon(1e-14));
    CHECK(c0(4.0) == doctest::Approx(0.0079069086779154551).epsilon(1e-14));
    CHECK(d0(4.0) == doctest::Approx(0.00051812663283996333).epsilon(1e-14));
    CHECK(g0(2.0) == doctest::Approx(0.034905617181392691).epsilon(1e-14));
    // b0 -> 1/lambda as coth -> 1
    CHECK(b0(40.0) == doctest::Approx((40.0 - 1.0) / 1600.0).epsilon(1e-14));
    CHECK(rel_err(b0(200.0), 1.0 / 200.0) < 5.1e-3);
}

TEST_CASE("continuity across the series/closed-form switch") {
    const double at = 1.5;  // closed-form branch starts here
    const double below = std::nextafter(at, 0.0);
    CHECK(rel_err(b0(below), b0(at)) <= 1e-12);
    CHECK(rel_err(c0(below), c0(at)) <= 1e-12);
    CHECK(rel_err(d0(below), d0(at)) <= 1e-12);
    CHECK(rel_err(f0(below), f0(at)) <= 1e-12);
    CHECK(rel_err(g0(below), g0(at)) <= 1e-12);
}

TEST_CASE("odd/even split identities") {
    CHECK(even_part(Sum::c, 0.0) == doctest::Approx(1.0 / 360.0).epsilon(1e-14));
    for (double lambda : {0.0, 1.0, 4.0, 40.0}) {
        CHECK(rel_err(odd_part(Sum::c, lambda) + even_part(Sum::c, lambda), c0(lambda)) <= 1e-14);
        CHECK(rel_err(odd_part(Sum::f, lambda) + even_part(Sum::f, lambda), f0(lambda)) <= 1e-14);
        CHECK(rel_err(odd_part(Sum::g, lambda) + even_part(Sum::g, lambda), g0(lambda)) <= 1e-14);
    }
}

TEST_CASE("analytic tails vs direct summation") {
    const std::vector<int> ls = {0, 2, 6};
    for (double lambda : {0.0, 0.5, 2.0, 10.0}) {
        const auto ref = reference_tail_sums(lambda, ls, 2'000'000);
        for (std::size_t i = 0; i < ls.size(); ++i) {
            const auto ana = tail_family(lambda, ls[i]);
            CHECK(rel_err(ana.b, ref[i].b) <= 1e-9);
            CHECK(rel_err(ana.c, ref[i].c) <= 1e-9);
            CHECK(rel_err(ana.d, ref[i].d) <= 1e-9);
            CHECK(rel_err(ana.f, ref[i].f) <= 1e-9);
            CHECK(rel_err(ana.g, ref[i].g) <= 1e-9);
            CHECK(rel_err(ana.c_odd, ref[i].c_odd) <= 1e-9);
            CHECK(rel_err(ana.c_even, ref[i].c_even) <= 1e-9);
            CHECK(rel_err(ana.f_odd, ref[i].f_odd) <= 1e-9);
            CHECK(rel_err(ana.f_even, ref[i].f_even) <= 1e-9);
            CHECK(rel_err(ana.g_odd, ref[i].g_odd) <= 1e-9);
            CHECK(rel_err(ana.g_even, ref[i].g_even) <= 1e-9);
        }
    }
}

TEST_CASE("make_tail rejects bad configuration") {
    CHECK_THROWS_AS(make_tail(1.0, 3), std::invalid_argument);
    CHECK_THROWS_AS(make_tail(1.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(make_tail(1.0, -2), std::invalid_argument);
    CHECK_THROWS_AS(make_tail(-0.5, 4), std::invalid_argument);
    CHECK_THROWS_AS(tail_family(1.0, 5), std::invalid_argument);
}

TEST_CASE("tail monotonicity in L and covariance consistency") {
    for (double lambda : {0.0, 1.0, 4.0, 40.0}) {
        SeriesTail prev = make_tail(lambda, 2);
        for (int l = 4; l <= 64; l += 2) {
            const SeriesTail cur = make_tail(lambda, l);
            CHECK(cur.odd_f < prev.odd_f);
            CHECK(cur.odd_c < prev.odd_c);
            CHECK(cur.odd_g < prev.odd_g);
            CHECK(cur.even_g < prev.even_g);
            CHECK(cur.full_c < prev.full_c);
            CHECK(cur.b_tail < prev.b_tail);
            CHECK(cur.odd_f > 0.0);
            CHECK(cur.rho_l > 0.0);
            CHECK(cur.rho_l <= 1.0);
            if (lambda > 0.0) CHECK(cur.rho_l < 1.0);
            // positive semidefiniteness of the (G,P) block
            CHECK(cur.odd_c * cur.odd_c <= cur.odd_f * cur.odd_g * (1.0 + 1e-14));
            prev = cur;
        }
    }
}

TEST_CASE("tail correlation degenerates to 1 at lambda = 0") {
    // the odd G/P sequences are proportional there: a_n/(n pi) = n pi a_n^3/2
    const SeriesTail tail = make_tail(0.0, 8);
    CHECK(tail.rho_l == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(tail.rho_comp <= 1e-6);
    CHECK(tail.odd_c == doctest::Approx(2.0 * tail.odd_f).epsilon(1e-12));
    CHECK(tail.odd_g == doctest::Approx(4.0 * tail.odd_f).epsilon(1e-12));
}

TEST_CASE("make_tail per-path arrays") {
    const double lambda = 4.0;
    const SeriesTail tail = make_tail(lambda, 8);
    REQUIRE(tail.a.size() == 8);
    for (int n = 1; n <= 8; ++n) {
        const int i = n - 1;
        CHECK(tail.a_sq[i] == doctest::Approx(tail.a[i] * tail.a[i]).epsilon(1e-15));
        if (n % 2 == 0) {
            CHECK(tail.u_coef[i] == 0.0);
        } else {
            CHECK(tail.u_coef[i] > 0.0);
        }
        if (n > 1) CHECK(tail.a[i] < tail.a[i - 1]);
    }
    double head = 0.0;
    for (double x : tail.a_sq) head += x;
    CHECK(tail.head_b == doctest::Approx(head).epsilon(1e-13));
}

TEST_CASE("reference_tail_sums input validation") {
    const std::vector<int> bad_order = {4, 2};
    CHECK_THROWS_AS(reference_tail_sums(1.0, bad_order, 1000), std::invalid_argument);
    const std::vector<int> ok = {0, 2};
    CHECK_THROWS_AS(reference_tail_sums(-1.0, ok, 1000), std::invalid_argument);
    CHECK_THROWS_AS(reference_tail_sums(1.0, std::vector<int>{0, 2000}, 1000),
                    std::invalid_argument);
}

TEST_SUITE_END();
