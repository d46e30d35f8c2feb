#pragma once

#include <array>
#include <vector>

#include "ousv/ou_analytics.hpp"
#include "ousv/rng.hpp"
#include "ousv/series_tails.hpp"

namespace ousv {

/// Random inputs for one path: terminal draw Z_0, the L retained mode draws
/// Z_1..Z_L, and the four tail draws W_1..W_4. fill_draws consumes normals in
/// exactly that order.
struct DrawBlock {
    double z0 = 0.0;
    std::vector<double> z;
    std::array<double, 4> w{};

    explicit DrawBlock(int l_terms) : z(static_cast<std::size_t>(l_terms), 0.0) {}
};

void fill_draws(NormalRng& rng, DrawBlock& d);

/// Antithetic partner: negates every draw in place.
void negate_draws(DrawBlock& d);

/// Sampled contributions of the truncated modes n > L.
struct TailSample {
    double g_l;  // tail of the U_bar sum (odd n)
    double p_l;  // odd tail of the n pi a_n^3 sum
    double q_l;  // even tail of the n pi a_n^3 sum
    double r_l;  // moment-matched chi-square surrogate for the a_n^2(Z^2-1) tail
};

/// (G,P,Q) are drawn from their exact joint Gaussian law; R from the matched
/// mean/variance surrogate sqrt(c_L)(W4^2-1). The scheme's only approximation
/// is R.
TailSample sample_tail(const std::array<double, 4>& w, const series::SeriesTail& tail);

/// One draw of (sigma_T, U, V). Exact in distribution for sigma_T and U; V
/// carries the R_L approximation. If the sampled V falls below U^2 it is
/// floored there and *v_floored (when given) is set.
Triplet sample_triplet(const DrawBlock& d, const ModelParams& p, double t,
                       const series::SeriesTail& tail, bool* v_floored = nullptr);

/// Exact time averages (U_bar, V_bar) of the L-mode path itself (tail draws
/// ignored). This is the closed-form counterpart of trapezoid-integrating the
/// reconstructed path; unlike sample_triplet it carries no compensation for
/// the truncated modes' variance.
struct PathAverages {
    double u_bar;
    double v_bar;
};

PathAverages truncated_path_averages(const DrawBlock& d, const ModelParams& p, double t,
                                     const series::SeriesTail& tail);

}  // namespace ousv
