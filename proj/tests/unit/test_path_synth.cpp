#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <numbers>
#include <vector>

#include "ousv/path_synth.hpp"
#include "ousv/rng.hpp"
#include "test_util.hpp"

using namespace ousv;
using testutil::rel_err;

TEST_SUITE_BEGIN("path_synth");

TEST_CASE("constant path") {
    const ModelParams p;  // sigma0 == theta
    const auto grid = build_path(0.0, std::vector<double>(4, 0.0), p, 1.0, 33);
    for (double s : grid.sigma_vals) CHECK(s == doctest::Approx(p.theta).epsilon(1e-14));
    const auto [u, v] = integrate_path(grid);
    CHECK(u == doctest::Approx(p.theta).epsilon(1e-14));
    CHECK(v == doctest::Approx(p.theta * p.theta).epsilon(1e-13));
}

TEST_CASE("endpoint pinning for arbitrary draws") {
    ModelParams p;
    p.sigma0 = 0.35;
    p.kappa = 2.0;
    p.xi = 0.4;
    const double t = 3.0;
    NormalRng rng(3, 3);
    std::vector<double> z(16);
    for (int rep = 0; rep < 5; ++rep) {
        const double z0 = rng.next();
        rng.fill(z);
        const auto grid = build_path(z0, z, p, t, 257);
        const double sigma_hat = sample_terminal_std(z0, p.kappa * t, p.xi, t);
        const double end = p.theta + (p.sigma0 - p.theta) * std::exp(-p.kappa * t) + sigma_hat;
        CHECK(std::abs(grid.sigma_vals.front() - p.sigma0) <= 1e-12);
        CHECK(std::abs(grid.sigma_vals.back() - end) <= 1e-12);
        CHECK(grid.t_grid.front() == 0.0);
        CHECK(grid.t_grid.back() == t);
    }
}

TEST_CASE("kappa = 0 reduces to the Brownian bridge plus linear pull") {
    ModelParams p;
    p.kappa = 0.0;
    p.theta = 0.0;
    p.sigma0 = 0.0;
    p.xi = 1.0;
    const double t = 4.0;
    const double z0 = 1.3;
    const auto grid = build_path(z0, std::vector<double>(8, 0.0), p, t, 101);
    // terminal value z0*sqrt(T), interior the linear interpolant
    CHECK(grid.sigma_vals.back() == doctest::Approx(z0 * 2.0).epsilon(1e-13));
    CHECK(grid.sigma_vals[50] == doctest::Approx(z0 * 2.0 * 0.5).epsilon(1e-12));
}

TEST_CASE("pure sine path integrates to the closed forms") {
    const int n = 4097;
    PathGrid g;
    g.n_terms = 1;
    g.t_grid.resize(n);
    g.sigma_vals.resize(n);
    const double t = 2.0;
    for (int i = 0; i < n; ++i) {
        const double frac = static_cast<double>(i) / (n - 1);
        g.t_grid[i] = t * frac;
        g.sigma_vals[i] = std::sin(std::numbers::pi * frac);
    }
    const auto [u, v] = integrate_path(g);
    CHECK(rel_err(u, 2.0 / std::numbers::pi) <= 1e-6);
    CHECK(rel_err(v, 0.5) <= 1e-6);
}

TEST_CASE("trapezoid error decays quadratically") {
    const auto err_at = [](int n) {
        PathGrid g;
        g.t_grid.resize(n);
        g.sigma_vals.resize(n);
        for (int i = 0; i < n; ++i) {
            const double frac = static_cast<double>(i) / (n - 1);
            g.t_grid[i] = frac;
            g.sigma_vals[i] = std::sin(std::numbers::pi * frac);
        }
        return std::abs(integrate_path(g).first - 2.0 / std::numbers::pi);
    };
    const double e1 = err_at(1025);
    const double e2 = err_at(2049);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("refinement is nested when modes share draws") {
    ModelParams p;
    p.sigma0 = 0.2;
    p.theta = 0.2;
    p.xi = 0.2;
    p.kappa = 1.0;
    NormalRng rng(42, 0);
    const double z0 = rng.next();
    std::vector<double> z(64);
    rng.fill(z);

    const auto fine = build_path(z0, z, p, 1.0, 257);
    double prev_sup = 1e300;
    for (int n : {2, 8, 16}) {
        const auto coarse =
            build_path(z0, std::span<const double>(z.data(), n), p, 1.0, 257);
        double sup = 0.0;
        for (std::size_t i = 0; i < coarse.sigma_vals.size(); ++i) {
            sup = std::max(sup, std::abs(coarse.sigma_vals[i] - fine.sigma_vals[i]));
        }
        CHECK(sup < prev_sup);
        prev_sup = sup;
    }
}

TEST_CASE("input validation") {
    const ModelParams p;
    CHECK_THROWS_AS(build_path(0.0, {}, p, 1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(build_path(0.0, {}, p, 0.0, 16), std::invalid_argument);
    PathGrid g;
    g.t_grid = {0.0};
    g.sigma_vals = {1.0};
    CHECK_THROWS_AS(integrate_path(g), std::invalid_argument);
}

TEST_SUITE_END();
