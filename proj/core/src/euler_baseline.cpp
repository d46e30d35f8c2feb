#include "ousv/euler_baseline.hpp"

#include <cmath>
#include <stdexcept>

namespace ousv {

EulerTerminal simulate_euler(const ModelParams& p, double t, const EulerConfig& cfg,
                             std::span<const double> draws) {
    if (cfg.n_steps < 1) throw std::invalid_argument("euler: n_steps must be >= 1");
    if (draws.size() != static_cast<std::size_t>(2 * cfg.n_steps)) {
        throw std::invalid_argument("euler: need 2*n_steps draws");
    }

    const double dt = t / cfg.n_steps;
    const double decay = std::exp(-p.kappa * dt);
    const double vol_std = p.xi * std::sqrt(dt * phi(2.0 * p.kappa * dt));
    const double sqrt_dt = std::sqrt(dt);
    const double rho_comp = std::sqrt(1.0 - p.rho * p.rho);

    double log_s = std::log(p.s0);
    double sigma = p.sigma0;
    for (int k = 0; k < cfg.n_steps; ++k) {
        const double zv = draws[2 * k];
        const double zw = draws[2 * k + 1];
        log_s += (p.r - 0.5 * sigma * sigma) * dt +
                 sigma * sqrt_dt * (p.rho * zv + rho_comp * zw);
        sigma = p.theta + (sigma - p.theta) * decay + vol_std * zv;
    }
    return {std::exp(log_s), sigma};
}

}  // namespace ousv
