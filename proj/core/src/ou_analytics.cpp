#include "ousv/ou_analytics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ousv/series_tails.hpp"

namespace ousv {

void ModelParams::validate() const {
    if (!(s0 > 0.0)) throw std::invalid_argument("model: s0 must be > 0");
    if (!(xi > 0.0)) throw std::invalid_argument("model: xi must be > 0");
    if (!(kappa >= 0.0)) throw std::invalid_argument("model: kappa must be >= 0");
    if (!(rho >= -1.0 && rho <= 1.0)) throw std::invalid_argument("model: rho must be in [-1,1]");
    if (!std::isfinite(sigma0) || !std::isfinite(theta) || !std::isfinite(r)) {
        throw std::invalid_argument("model: non-finite parameter");
    }
}

double phi(double x) {
    if (x == 0.0) return 1.0;
    return -std::expm1(-x) / x;
}

double kl_coeff(int n, double lambda) {
    const double np = n * std::numbers::pi;
    return std::sqrt(2.0 / (lambda * lambda + np * np));
}

double sample_terminal_std(double z0, double lambda, double xi, double t) {
    return xi * std::sqrt(t * phi(2.0 * lambda)) * z0;
}

double cond_mean_u(double sigma_bar0, double sigma_hat_t, double lambda) {
    return (sigma_bar0 + sigma_hat_t / (1.0 + std::exp(-lambda))) * phi(lambda);
}

double cond_mean_v(double sigma_bar0, double sigma_hat_t, double lambda, double xi, double t) {
    return sigma_bar0 * sigma_bar0 * phi(2.0 * lambda) +
           sigma_hat_t * sigma_hat_t * detail::bridge_sq_weight(lambda) +
           0.5 * xi * xi * t * series::b0(lambda) +
           sigma_bar0 * sigma_hat_t * detail::bridge_cross_weight(lambda);
}

CondMoments uncond_means(const ModelParams& p, double t) {
    const double lambda = p.kappa * t;
    const double d = p.sigma0 - p.theta;
    CondMoments out;
    out.mean_u = p.theta + d * phi(lambda);
    // The xi^2/(2 kappa) pieces combine to xi^2*T*(1-phi(2l))/(2l), finite at
    // kappa = 0.
    out.mean_v = p.theta * p.theta + 2.0 * p.theta * d * phi(lambda) +
                 d * d * phi(2.0 * lambda) +
                 p.xi * p.xi * t * detail::one_minus_phi_over_x(2.0 * lambda);
    return out;
}

Triplet convert_triplet(double sigma_bar_t, double u_bar, double v_bar, double theta) {
    return {theta + sigma_bar_t, theta + u_bar,
            theta * theta + 2.0 * theta * u_bar + v_bar};
}

namespace detail {

double one_minus_phi_over_x(double x) {
    if (x < 0.5) {
        // sum_{k>=0} (-x)^k/(k+2)!
        double term = 0.5;
        double sum = term;
        for (int k = 1; k <= 18; ++k) {
            term *= -x / (k + 2);
            sum += term;
        }
        return sum;
    }
    return (x + std::expm1(-x)) / (x * x);
}

double sinh_minus_arg(double x) {
    if (std::abs(x) < 0.5) {
        // sum_{k>=1} x^(2k+1)/(2k+1)!
        const double x2 = x * x;
        double term = x * x2 / 6.0;
        double sum = term;
        for (int k = 2; k <= 8; ++k) {
            term *= x2 / ((2 * k) * (2 * k + 1));
            sum += term;
        }
        return sum;
    }
    return std::sinh(x) - x;
}

double bridge_sq_weight(double lambda) {
    if (lambda < 1e-8) return 1.0 / 3.0;
    if (lambda < 1.0) {
        // sinh(2l)-2l = 2(sinh l - l)cosh l + 2l(cosh l - 1); both addends are
        // positive, so no cancellation is left.
        const double sh = std::sinh(lambda);
        const double half = std::sinh(0.5 * lambda);
        const double num = sinh_minus_arg(lambda) * std::cosh(lambda) +
                           2.0 * lambda * half * half;
        return num / (2.0 * lambda * sh * sh);
    }
    // coth(l)/(2l) - 1/(2 sinh^2 l), overflow-free in e^(-2l)
    const double e2 = std::exp(-2.0 * lambda);
    const double den = 1.0 - e2;
    return (1.0 + e2) / (2.0 * lambda * den) - 2.0 * e2 / (den * den);
}

double bridge_cross_weight(double lambda) {
    if (lambda == 0.0) return 1.0;
    // (e^-l/l)(1/phi(2l)-1) = 4 l psi(2l) e^-l / (1 - e^-2l)
    const double psi = one_minus_phi_over_x(2.0 * lambda);
    return 4.0 * lambda * psi * std::exp(-lambda) / -std::expm1(-2.0 * lambda);
}

}  // namespace detail

}  // namespace ousv
