#pragma once

#include <span>

#include "ousv/ou_analytics.hpp"

namespace ousv {

/// Conditional law of S_T given a triplet: S_T = fwd * exp(sig_total Z - sig_total^2/2).
struct CondLaw {
    double fwd;        // conditional forward F_T, always > 0
    double sig_total;  // total conditional volatility over [0,T], sqrt((1-rho^2) T V)
};

/// Summary of one estimator across MC sets. bias/rmse are NaN when no
/// reference price is available.
struct PriceStats {
    double mean = 0.0;
    double bias = 0.0;
    double rmse = 0.0;
    double std_error = 0.0;
    double wall_seconds = 0.0;
    long long n_floor_events = 0;
};

double norm_cdf(double x);

/// F_T and Sigma_{0,T} from a triplet. rho = 0 gives fwd = s0 e^{rT} exactly.
/// Requires v_avg >= 0 (guaranteed by the sampler's floor).
CondLaw cond_law(const Triplet& tr, const ModelParams& p, double t);

/// Undiscounted Black-Scholes call with total volatility sig_total
/// (= sigma*sqrt(T)); sig_total = 0 degenerates to the intrinsic value.
double bs_call(double k, double f, double sig_total);
double bs_put(double k, double f, double sig_total);

/// Terminal price draw conditional on the triplet.
double sample_spot(const Triplet& tr, double z, const ModelParams& p, double t);

struct CallPrice {
    double price;
    double spot_check;  // e^{-rT} mean F_T, should sit on s0
};

/// Conditional-simulation price: discounted mean of BS values over the
/// triplet stream. With use_cv the forwards are rescaled by
/// mu = s0 e^{rT}/mean(F_T) first, which pins the discounted forward mean to
/// s0 exactly. Throws std::invalid_argument on an empty stream.
CallPrice price_call(std::span<const Triplet> triplets, double k, const ModelParams& p, double t,
                     bool use_cv);
CallPrice price_put(std::span<const Triplet> triplets, double k, const ModelParams& p, double t,
                    bool use_cv);

}  // namespace ousv
