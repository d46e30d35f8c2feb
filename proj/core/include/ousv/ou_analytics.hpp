#pragma once

namespace ousv {

/// OUSV model parameters. sigma follows dsigma = kappa(theta - sigma)dt + xi dZ,
/// the price dS/S = r dt + sigma (rho dZ + sqrt(1-rho^2) dW).
struct ModelParams {
    double s0 = 100.0;
    double sigma0 = 0.2;
    double theta = 0.2;
    double kappa = 4.0;
    double xi = 0.1;
    double rho = -0.7;
    double r = 0.09531;

    /// Throws std::invalid_argument on s0 <= 0, xi <= 0, kappa < 0 or |rho| > 1.
    void validate() const;
};

/// Sufficient statistics for conditional pricing: terminal volatility and the
/// time averages of sigma and sigma^2 over [0,T]. The volatility may go
/// negative (the OU process is Gaussian); only v_avg is sign-constrained.
struct Triplet {
    double sigma_t;
    double u_avg;
    double v_avg;  // >= u_avg^2 (Cauchy-Schwarz)
};

struct CondMoments {
    double mean_u;
    double mean_v;
};

/// phi(x) = (1 - e^-x)/x with phi(0) = 1; continuous, decreasing.
double phi(double x);

/// KL weight a_n = sqrt(2/(lambda^2 + (n pi)^2)), lambda = kappa*T.
double kl_coeff(int n, double lambda);

/// Centered terminal draw: sigma_hat_T = xi*sqrt(T*phi(2*lambda))*z0.
double sample_terminal_std(double z0, double lambda, double xi, double t);

/// E(U_bar | sigma_hat_T) = [sigma_bar0 + sigma_hat_T/(1+e^-lambda)] phi(lambda).
double cond_mean_u(double sigma_bar0, double sigma_hat_t, double lambda);

/// E(V_bar | sigma_hat_T): decay, bridge-end, bridge-variance and cross terms.
/// With xi = 0 this is exactly the time average of the squared deterministic
/// (decay + bridge-end) path.
double cond_mean_v(double sigma_bar0, double sigma_hat_t, double lambda, double xi, double t);

/// Unconditional E(U), E(V); E(V) is the fair strike of the continuous
/// variance swap. kappa = 0 is handled through the limit.
CondMoments uncond_means(const ModelParams& p, double t);

/// Centered quantities (sigma_bar_T, U_bar, V_bar) back to (sigma_T, U, V).
Triplet convert_triplet(double sigma_bar_t, double u_bar, double v_bar, double theta);

namespace detail {

/// (1 - phi(x))/x, with the value 1/2 at x = 0.
double one_minus_phi_over_x(double x);

/// sinh(x) - x without cancellation for small x.
double sinh_minus_arg(double x);

/// (sinh 2l - 2l)/(4 l sinh^2 l): time average of the squared bridge-end
/// profile; limit 1/3 at l = 0.
double bridge_sq_weight(double lambda);

/// (e^-l/l)(1/phi(2l) - 1) = 2 l psi(2l)/sinh(l): decay-times-bridge-end
/// cross average; limit 1 at l = 0.
double bridge_cross_weight(double lambda);

}  // namespace detail

}  // namespace ousv
