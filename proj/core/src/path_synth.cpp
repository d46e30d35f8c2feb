#include "ousv/path_synth.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ousv/summation.hpp"

namespace ousv {

namespace {

// sinh(lambda*frac)/sinh(lambda) in exp form, overflow-free; frac in [0,1].
double bridge_ratio(double lambda, double frac) {
    if (lambda < 1e-300) return frac;
    const double num = -std::expm1(-2.0 * lambda * frac);
    const double den = -std::expm1(-2.0 * lambda);
    return std::exp(lambda * (frac - 1.0)) * num / den;
}

}  // namespace

PathGrid build_path(double z0, std::span<const double> z, const ModelParams& p, double t,
                    int n_grid) {
    if (n_grid < 2) throw std::invalid_argument("path: n_grid must be >= 2");
    if (!(t > 0.0)) throw std::invalid_argument("path: maturity must be > 0");

    const int n_terms = static_cast<int>(z.size());
    const double lambda = p.kappa * t;
    const double sigma_bar0 = p.sigma0 - p.theta;
    const double sigma_hat = sample_terminal_std(z0, lambda, p.xi, t);
    const double noise_scale = p.xi * std::sqrt(t);

    std::vector<double> coeff(z.size());
    for (int n = 1; n <= n_terms; ++n) coeff[n - 1] = kl_coeff(n, lambda) * z[n - 1];

    PathGrid g;
    g.n_terms = n_terms;
    g.t_grid.resize(n_grid);
    g.sigma_vals.resize(n_grid);
    for (int i = 0; i < n_grid; ++i) {
        const double frac = static_cast<double>(i) / (n_grid - 1);
        double series = 0.0;
        for (int n = n_terms; n >= 1; --n) {
            series += coeff[n - 1] * std::sin(n * std::numbers::pi * frac);
        }
        g.t_grid[i] = t * frac;
        g.sigma_vals[i] = p.theta + sigma_bar0 * std::exp(-lambda * frac) +
                          sigma_hat * bridge_ratio(lambda, frac) + noise_scale * series;
    }
    return g;
}

std::pair<double, double> integrate_path(const PathGrid& g) {
    const std::size_t n = g.t_grid.size();
    if (n < 2) throw std::invalid_argument("path: need at least 2 grid points");

    NeumaierSum u_int, v_int;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double dt = g.t_grid[i + 1] - g.t_grid[i];
        const double a = g.sigma_vals[i];
        const double b = g.sigma_vals[i + 1];
        u_int.add(0.5 * (a + b) * dt);
        v_int.add(0.5 * (a * a + b * b) * dt);
    }
    const double span = g.t_grid.back() - g.t_grid.front();
    return {u_int.value() / span, v_int.value() / span};
}

}  // namespace ousv
