#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ousv/kl_engine.hpp"
#include "ousv/pricing.hpp"
#include "test_util.hpp"

using namespace ousv;
using testutil::mean_var;
using testutil::rel_err;

namespace {

std::vector<Triplet> draw_triplets(const ModelParams& p, double t, int l, long n,
                                   std::uint64_t seed) {
    const auto tail = series::make_tail(p.kappa * t, l);
    NormalRng rng(seed, 0);
    DrawBlock d(l);
    std::vector<Triplet> out;
    out.reserve(n);
    for (long i = 0; i < n; i += 2) {
        fill_draws(rng, d);
        out.push_back(sample_triplet(d, p, t, tail));
        negate_draws(d);
        out.push_back(sample_triplet(d, p, t, tail));
    }
    return out;
}

}  // namespace

TEST_SUITE_BEGIN("pricing");

TEST_CASE("bs_call edge cases and shape") {
    CHECK(bs_call(100.0, 110.0, 0.0) == 10.0);
    CHECK(bs_call(110.0, 100.0, 0.0) == 0.0);
    CHECK(bs_put(110.0, 100.0, 0.0) == 10.0);
    // ATM closed form f*(2 Phi(s/2) - 1)
    CHECK(bs_call(100.0, 100.0, 0.2) ==
          doctest::Approx(100.0 * 0.079655674554057963).epsilon(1e-13));
    double prev = 0.0;
    for (double s : {0.05, 0.1, 0.3, 0.8, 2.0}) {
        const double c = bs_call(100.0, 100.0, s);
        CHECK(c > prev);
        prev = c;
    }
    // pointwise parity
    for (double f : {80.0, 100.0, 123.4}) {
        for (double s : {1e-8, 0.2, 1.5}) {
            CHECK(std::abs(bs_call(100.0, f, s) - bs_put(100.0, f, s) - (f - 100.0)) <=
                  1e-12 * f);
        }
    }
}

TEST_CASE("cond_law basics") {
    ModelParams p;
    const double t = 1.0;
    const Triplet tr{0.23, 0.2, 0.042};

    SUBCASE("rho = 0 pins the forward") {
        ModelParams p0 = p;
        p0.rho = 0.0;
        const CondLaw cl = cond_law(tr, p0, t);
        CHECK(cl.fwd == p0.s0 * std::exp(p0.r * t));
        CHECK(cl.sig_total == doctest::Approx(std::sqrt(t * tr.v_avg)).epsilon(1e-15));
    }

    SUBCASE("constant-volatility triplet reduces algebraically") {
        const Triplet flat{p.theta, p.theta, p.theta * p.theta};
        const CondLaw cl = cond_law(flat, p, t);
        // exponent collapses to rT + (rho/2xi)(-xi^2 - rho xi theta^2)T
        const double expo =
            p.r * t + (p.rho / (2.0 * p.xi)) * (-p.xi * p.xi - p.rho * p.xi * p.theta * p.theta) * t;
        CHECK(cl.fwd == doctest::Approx(p.s0 * std::exp(expo)).epsilon(1e-14));
    }

    SUBCASE("sig_total definition") {
        const CondLaw cl = cond_law(tr, p, t);
        CHECK(cl.sig_total ==
              doctest::Approx(std::sqrt((1 - p.rho * p.rho) * t * tr.v_avg)).epsilon(1e-15));
        CHECK(cl.fwd > 0.0);
    }
}

TEST_CASE("discounted forward mean sits on s0 (martingale test)") {
    const ModelParams p;
    const double t = 1.0;
    const auto triplets = draw_triplets(p, t, 6, 200'000, 314159);
    const double disc = std::exp(-p.r * t);
    std::vector<double> pair_mean(triplets.size() / 2);
    for (std::size_t i = 0; i < pair_mean.size(); ++i) {
        pair_mean[i] = 0.5 * disc *
                       (cond_law(triplets[2 * i], p, t).fwd + cond_law(triplets[2 * i + 1], p, t).fwd);
    }
    const auto m = mean_var(pair_mean);
    CHECK(std::abs(m.mean - p.s0) <= 3 * m.se_mean);
}

TEST_CASE("sample_spot") {
    const ModelParams p;
    const double t = 1.0;
    const Triplet tr{0.21, 0.198, 0.0405};
    const CondLaw cl = cond_law(tr, p, t);
    CHECK(sample_spot(tr, 0.0, p, t) ==
          doctest::Approx(cl.fwd * std::exp(-0.5 * cl.sig_total * cl.sig_total)).epsilon(1e-14));

    NormalRng rng(5, 5);
    const long n = 100'000;
    std::vector<double> s(n);
    for (long i = 0; i < n; ++i) s[i] = sample_spot(tr, rng.next(), p, t);
    const auto m = mean_var(s);
    CHECK(std::abs(m.mean - cl.fwd) <= 3 * m.se_mean);
}

TEST_CASE("payoff-averaged and conditional estimators agree") {
    const ModelParams p;
    const double t = 1.0;
    const double strike = 100.0;
    const auto triplets = draw_triplets(p, t, 6, 100'000, 2718);
    const double disc = std::exp(-p.r * t);

    const CallPrice cond = price_call(triplets, strike, p, t, /*use_cv=*/false);

    NormalRng rng(999, 7);
    std::vector<double> payoff(triplets.size());
    for (std::size_t i = 0; i < triplets.size(); ++i) {
        const double s = sample_spot(triplets[i], rng.next(), p, t);
        payoff[i] = disc * std::max(s - strike, 0.0);
    }
    const auto m = mean_var(payoff);
    // conditional estimator variance is negligible next to the payoff one
    CHECK(std::abs(m.mean - cond.price) <= 3.2 * m.se_mean);
}

TEST_CASE("control variate rescales a degenerate stream exactly") {
    const ModelParams p;
    const double t = 1.0;
    // constant forward: mu rescales it to s0 e^{rT} exactly
    const Triplet flat{p.theta, p.theta, p.theta * p.theta};
    const std::vector<Triplet> stream(1000, flat);
    const CallPrice cv = price_call(stream, 90.0, p, t, /*use_cv=*/true);
    const double sig = cond_law(flat, p, t).sig_total;
    const double expected = std::exp(-p.r * t) * bs_call(90.0, p.s0 * std::exp(p.r * t), sig);
    CHECK(cv.price == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("parity of the stream estimators") {
    const ModelParams p;
    const double t = 1.0;
    const double strike = 100.0;
    const auto triplets = draw_triplets(p, t, 4, 40'000, 1618);
    const double disc = std::exp(-p.r * t);

    SUBCASE("with control variate") {
        const CallPrice call = price_call(triplets, strike, p, t, true);
        const CallPrice put = price_put(triplets, strike, p, t, true);
        const double rhs = p.s0 - disc * strike;  // cv pins the forward mean
        CHECK(std::abs(call.price - put.price - rhs) <= 1e-12 * p.s0);
    }
    SUBCASE("without control variate") {
        const CallPrice call = price_call(triplets, strike, p, t, false);
        const CallPrice put = price_put(triplets, strike, p, t, false);
        const double rhs = call.spot_check - disc * strike;
        CHECK(std::abs(call.price - put.price - rhs) <= 1e-12 * p.s0);
    }
}

TEST_CASE("empty stream is rejected") {
    const ModelParams p;
    CHECK_THROWS_AS(price_call({}, 100.0, p, 1.0, true), std::invalid_argument);
}

TEST_SUITE_END();
