#pragma once

#include <span>
#include <utility>
#include <vector>

#include "ousv/ou_analytics.hpp"

namespace ousv {

/// Volatility path reconstructed from the sine expansion on a uniform grid.
struct PathGrid {
    std::vector<double> t_grid;
    std::vector<double> sigma_vals;
    int n_terms = 0;
};

/// Evaluates sigma_t = theta + sigma_bar0 e^{-kappa t}
///                   + sigma_hat_T sinh(kappa t)/sinh(kappa T)
///                   + xi sqrt(T) sum a_n sin(n pi t/T) Z_n
/// with z.size() sine modes. kappa = 0 falls back to the t/T bridge ratio.
/// n_grid >= 2 points over [0, T].
PathGrid build_path(double z0, std::span<const double> z, const ModelParams& p, double t,
                    int n_grid);

/// Trapezoid time averages ((1/T) int sigma dt, (1/T) int sigma^2 dt).
std::pair<double, double> integrate_path(const PathGrid& g);

}  // namespace ousv
