#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ousv/euler_baseline.hpp"
#include "ousv/pricing.hpp"
#include "ousv/rng.hpp"
#include "test_util.hpp"

using namespace ousv;
using testutil::mean_var;

TEST_SUITE_BEGIN("euler_baseline");

TEST_CASE("input validation") {
    const ModelParams p;
    std::vector<double> draws(8);
    CHECK_THROWS_AS(simulate_euler(p, 1.0, EulerConfig{0}, draws), std::invalid_argument);
    CHECK_THROWS_AS(simulate_euler(p, 1.0, EulerConfig{3}, draws), std::invalid_argument);
    CHECK_NOTHROW(simulate_euler(p, 1.0, EulerConfig{4}, draws));
}

TEST_CASE("constant volatility degenerates to Black-Scholes at any step count") {
    ModelParams p;
    p.xi = 1e-13;  // validate() wants xi > 0; dynamics are effectively frozen
    const double t = 1.0;
    const double strike = 100.0;
    const double disc = std::exp(-p.r * t);
    const double bs_ref = disc * bs_call(strike, p.s0 * std::exp(p.r * t), p.theta * std::sqrt(t));

    for (int steps : {1, 16}) {
        NormalRng rng(7777, steps);
        std::vector<double> draws(2 * steps);
        const long n = 200'000;
        std::vector<double> payoff(n), disc_spot(n);
        const EulerConfig cfg{steps};
        for (long i = 0; i < n; i += 2) {
            rng.fill(draws);
            double s = simulate_euler(p, t, cfg, draws).s_t;
            payoff[i] = disc * std::max(s - strike, 0.0);
            disc_spot[i] = disc * s;
            for (double& d : draws) d = -d;
            s = simulate_euler(p, t, cfg, draws).s_t;
            payoff[i + 1] = disc * std::max(s - strike, 0.0);
            disc_spot[i + 1] = disc * s;
        }
        const auto m = mean_var(payoff);
        CHECK(std::abs(m.mean - bs_ref) <= 3 * m.se_mean);
        const auto ms = mean_var(disc_spot);
        CHECK(std::abs(ms.mean - p.s0) <= 3 * ms.se_mean);
    }
}

TEST_CASE("volatility marginal is exact at any step count") {
    const ModelParams p;  // kappa 4, sigma0 = theta = 0.2
    const double t = 1.0;
    const int steps = 3;
    NormalRng rng(606, 1);
    std::vector<double> draws(2 * steps);
    const long n = 150'000;
    std::vector<double> sig(n), sig_dev_sq(n);
    const double mean_ref = p.theta + (p.sigma0 - p.theta) * std::exp(-p.kappa * t);
    for (long i = 0; i < n; ++i) {
        rng.fill(draws);
        sig[i] = simulate_euler(p, t, EulerConfig{steps}, draws).sigma_t;
        sig_dev_sq[i] = (sig[i] - mean_ref) * (sig[i] - mean_ref);
    }
    const auto m = mean_var(sig);
    CHECK(std::abs(m.mean - mean_ref) <= 3 * m.se_mean);
    const auto mv = mean_var(sig_dev_sq);
    const double var_ref = p.xi * p.xi * t * phi(2 * p.kappa * t);
    CHECK(std::abs(mv.mean - var_ref) <= 3 * mv.se_mean);
}

TEST_SUITE_END();
