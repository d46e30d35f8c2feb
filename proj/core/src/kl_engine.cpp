#include "ousv/kl_engine.hpp"

#include <cassert>
#include <cmath>

namespace ousv {

namespace {

struct HeadSums {
    double u;      // sum over odd n<=L of (a_n/n pi) Z_n
    double v_odd;  // sum over odd n<=L of n pi a_n^3 Z_n
    double v_even; // same over even n
    double q;      // sum over n<=L of a_n^2 Z_n^2
};

HeadSums head_sums(const DrawBlock& d, const series::SeriesTail& tail) {
    const int l = tail.l_terms;
    assert(static_cast<int>(d.z.size()) == l);
    HeadSums s{0.0, 0.0, 0.0, 0.0};
    for (int i = 0; i < l; i += 2) {  // index i holds mode n = i+1 (odd)
        const double zi = d.z[i];
        s.u += tail.u_coef[i] * zi;
        s.v_odd += tail.v_coef[i] * zi;
        s.q += tail.a_sq[i] * zi * zi;
    }
    for (int i = 1; i < l; i += 2) {  // even modes
        const double zi = d.z[i];
        s.v_even += tail.v_coef[i] * zi;
        s.q += tail.a_sq[i] * zi * zi;
    }
    return s;
}

}  // namespace

void fill_draws(NormalRng& rng, DrawBlock& d) {
    d.z0 = rng.next();
    rng.fill(d.z);
    rng.fill(d.w);
}

void negate_draws(DrawBlock& d) {
    d.z0 = -d.z0;
    for (double& x : d.z) x = -x;
    for (double& x : d.w) x = -x;
}

TailSample sample_tail(const std::array<double, 4>& w, const series::SeriesTail& tail) {
    TailSample out;
    out.g_l = tail.sqrt_odd_f * (tail.rho_comp * w[0] + tail.rho_l * w[1]);
    out.p_l = tail.sqrt_odd_g * w[1];
    out.q_l = tail.sqrt_even_g * w[2];
    out.r_l = tail.sqrt_full_c * (w[3] * w[3] - 1.0);
    return out;
}

Triplet sample_triplet(const DrawBlock& d, const ModelParams& p, double t,
                       const series::SeriesTail& tail, bool* v_floored) {
    const double lambda = p.kappa * t;
    assert(std::abs(lambda - tail.lambda) <= 1e-12 * (1.0 + lambda));

    const double sigma_bar0 = p.sigma0 - p.theta;
    const double sqrt_t = std::sqrt(t);
    const double sigma_hat = sample_terminal_std(d.z0, lambda, p.xi, t);
    const double sigma_bar_t = sigma_bar0 * std::exp(-lambda) + sigma_hat;

    const HeadSums s = head_sums(d, tail);
    const TailSample ts = sample_tail(d.w, tail);

    const double u_bar =
        cond_mean_u(sigma_bar0, sigma_hat, lambda) + 2.0 * p.xi * sqrt_t * (s.u + ts.g_l);

    const double quad = (s.q - tail.head_b) + ts.r_l;  // sum a_n^2(Z_n^2-1) + R_L
    const double v_bar =
        cond_mean_v(sigma_bar0, sigma_hat, lambda, p.xi, t) +
        p.xi * sqrt_t * (sigma_bar0 * (s.v_odd + s.v_even + ts.p_l + ts.q_l) +
                         sigma_bar_t * (s.v_odd - s.v_even + ts.p_l - ts.q_l)) +
        0.5 * p.xi * p.xi * t * quad;

    Triplet out = convert_triplet(sigma_bar_t, u_bar, v_bar, p.theta);
    const double v_floor = out.u_avg * out.u_avg;
    const bool floored = out.v_avg < v_floor;
    if (floored) out.v_avg = v_floor;
    if (v_floored) *v_floored = floored;
    return out;
}

PathAverages truncated_path_averages(const DrawBlock& d, const ModelParams& p, double t,
                                     const series::SeriesTail& tail) {
    const double lambda = p.kappa * t;
    const double sigma_bar0 = p.sigma0 - p.theta;
    const double sqrt_t = std::sqrt(t);
    const double sigma_hat = sample_terminal_std(d.z0, lambda, p.xi, t);
    const double sigma_bar_t = sigma_bar0 * std::exp(-lambda) + sigma_hat;

    const HeadSums s = head_sums(d, tail);

    PathAverages out;
    out.u_bar = cond_mean_u(sigma_bar0, sigma_hat, lambda) + 2.0 * p.xi * sqrt_t * s.u;
    // xi = 0 in cond_mean_v keeps only the deterministic decay/bridge-end
    // part; the retained modes enter through their own sums below.
    out.v_bar = cond_mean_v(sigma_bar0, sigma_hat, lambda, 0.0, t) +
                p.xi * sqrt_t * (sigma_bar0 * (s.v_odd + s.v_even) +
                                 sigma_bar_t * (s.v_odd - s.v_even)) +
                0.5 * p.xi * p.xi * t * s.q;
    return out;
}

}  // namespace ousv
