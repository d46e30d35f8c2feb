#pragma once

#include <span>

#include "ousv/ou_analytics.hpp"

namespace ousv {

struct EulerConfig {
    int n_steps = 256;
};

struct EulerTerminal {
    double s_t;
    double sigma_t;
};

/// Time-discretized baseline. The volatility is stepped by its exact Gaussian
/// one-step transition (so the discretization bias sits entirely in the asset
/// leg); log S takes a left-point Euler step with correlated increments.
/// draws must hold 2*n_steps normals, ordered (z_vol, w_asset) per step.
EulerTerminal simulate_euler(const ModelParams& p, double t, const EulerConfig& cfg,
                             std::span<const double> draws);

}  // namespace ousv
