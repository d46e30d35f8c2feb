#include "ousv/pricing.hpp"

#include <cassert>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "ousv/summation.hpp"

namespace ousv {

double norm_cdf(double x) {
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

CondLaw cond_law(const Triplet& tr, const ModelParams& p, double t) {
    assert(tr.v_avg >= 0.0);
    const double expo =
        p.r * t + (p.rho / (2.0 * p.xi)) *
                      ((-p.xi * p.xi - 2.0 * p.kappa * p.theta * tr.u_avg +
                        (2.0 * p.kappa - p.rho * p.xi) * tr.v_avg) *
                           t +
                       tr.sigma_t * tr.sigma_t - p.sigma0 * p.sigma0);
    CondLaw out;
    out.fwd = p.s0 * std::exp(expo);
    out.sig_total = std::sqrt((1.0 - p.rho * p.rho) * t * tr.v_avg);
    return out;
}

double bs_call(double k, double f, double sig_total) {
    assert(k > 0.0 && f > 0.0);
    if (sig_total <= 0.0) return std::max(f - k, 0.0);
    const double d1 = std::log(f / k) / sig_total + 0.5 * sig_total;
    const double d2 = d1 - sig_total;
    return f * norm_cdf(d1) - k * norm_cdf(d2);
}

double bs_put(double k, double f, double sig_total) {
    assert(k > 0.0 && f > 0.0);
    if (sig_total <= 0.0) return std::max(k - f, 0.0);
    const double d1 = std::log(f / k) / sig_total + 0.5 * sig_total;
    const double d2 = d1 - sig_total;
    return k * norm_cdf(-d2) - f * norm_cdf(-d1);
}

double sample_spot(const Triplet& tr, double z, const ModelParams& p, double t) {
    const CondLaw cl = cond_law(tr, p, t);
    return cl.fwd * std::exp(cl.sig_total * (z - 0.5 * cl.sig_total));
}

namespace {

template <typename Payoff>
CallPrice price_stream(std::span<const Triplet> triplets, const ModelParams& p, double t,
                       bool use_cv, Payoff payoff) {
    if (triplets.empty()) throw std::invalid_argument("pricing: empty triplet stream");

    const auto n = static_cast<double>(triplets.size());
    std::vector<CondLaw> laws(triplets.size());
    NeumaierSum fwd_sum;
    for (std::size_t i = 0; i < triplets.size(); ++i) {
        laws[i] = cond_law(triplets[i], p, t);
        fwd_sum.add(laws[i].fwd);
    }
    const double mean_fwd = fwd_sum.value() / n;
    const double mu = use_cv ? p.s0 * std::exp(p.r * t) / mean_fwd : 1.0;

    NeumaierSum value_sum;
    for (const CondLaw& cl : laws) value_sum.add(payoff(mu * cl.fwd, cl.sig_total));

    const double disc = std::exp(-p.r * t);
    return {disc * value_sum.value() / n, disc * mean_fwd};
}

}  // namespace

CallPrice price_call(std::span<const Triplet> triplets, double k, const ModelParams& p, double t,
                     bool use_cv) {
    return price_stream(triplets, p, t, use_cv,
                        [k](double f, double s) { return bs_call(k, f, s); });
}

CallPrice price_put(std::span<const Triplet> triplets, double k, const ModelParams& p, double t,
                    bool use_cv) {
    return price_stream(triplets, p, t, use_cv,
                        [k](double f, double s) { return bs_put(k, f, s); });
}

}  // namespace ousv
