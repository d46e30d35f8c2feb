#pragma once

#include <span>
#include <vector>

namespace ousv::series {

// Infinite sums over the KL eigenvalues a_n^2 = 2/(lambda^2 + (n pi)^2),
// as functions of lambda = kappa*T:
//
//   b0 = sum a_n^2        c0 = sum a_n^4        d0 = sum a_n^6
//   f0 = sum a_n^2/(n pi)^2                     g0 = sum (n pi)^2 a_n^6
//
// Closed forms are combinations of coth/sinh; below lambda = 1.5 they are
// evaluated from Maclaurin tables instead (the coth-based expressions cancel
// catastrophically as lambda -> 0).

double b0(double lambda);
double c0(double lambda);
double d0(double lambda);
double f0(double lambda);
double g0(double lambda);

/// Series whose odd/even index splits are needed by the sampling scheme.
enum class Sum { c, f, g };

/// Sum over even n only: base(lambda/2)/16 (reindex n = 2m).
double even_part(Sum s, double lambda);
/// Sum over odd n: full sum minus the even part.
double odd_part(Sum s, double lambda);

/// Tail sums from n = l_terms+1 upward, analytic route: full/odd/even sums
/// minus compensated partial sums of the first l_terms terms.
struct SeriesSums {
    double b = 0, c = 0, d = 0, f = 0, g = 0;
    double c_odd = 0, c_even = 0;
    double f_odd = 0, f_even = 0;
    double g_odd = 0, g_even = 0;
};

/// l_terms must be even and >= 0 (0 returns the full sums).
SeriesSums tail_family(double lambda, int l_terms);

/// Precomputed per-(lambda, L) state: the first-L coefficient arrays the
/// per-path dot products run over, plus the analytic tail sums and the
/// constants needed to sample the truncated remainder exactly.
struct SeriesTail {
    double lambda = 0.0;
    int l_terms = 0;

    std::vector<double> a;      // a_1..a_L

    double odd_f = 0;           // sum_{n>L, odd} a_n^2/(n pi)^2
    double odd_c = 0;           // sum_{n>L, odd} a_n^4
    double odd_g = 0;           // sum_{n>L, odd} (n pi)^2 a_n^6
    double even_g = 0;          // sum_{n>L, even} (n pi)^2 a_n^6
    double full_c = 0;          // sum_{n>L} a_n^4
    double b_tail = 0;          // sum_{n>L} a_n^2
    double rho_l = 0;           // odd_c / sqrt(odd_f * odd_g), in (0,1]; exactly 1 at lambda = 0

    // per-path machinery (index i holds mode n = i+1)
    std::vector<double> u_coef;   // a_n/(n pi) for odd n, 0 for even
    std::vector<double> v_coef;   // n pi a_n^3
    std::vector<double> a_sq;     // a_n^2
    double head_b = 0;            // sum_{n<=L} a_n^2

    double sqrt_odd_f = 0, sqrt_odd_g = 0, sqrt_even_g = 0, sqrt_full_c = 0;
    double rho_comp = 0;          // sqrt(1 - rho_l^2)
};

/// Builds the tail state. l_terms must be even and >= 2; throws
/// std::invalid_argument otherwise. Throws std::runtime_error if a tail
/// subtraction comes out negative beyond rounding slack.
SeriesTail make_tail(double lambda, int l_terms);

/// Reference route: direct compensated summation from n_terms down to
/// l+1 for each requested l (ascending, >= 0). The b family decays only as
/// n^-2, so its beyond-cap remainder is folded in with a midpoint integral
/// estimate; the others decay at least as n^-4 and truncate below 1e-20 at
/// the default cap.
std::vector<SeriesSums> reference_tail_sums(double lambda,
                                            std::span<const int> l_values,
                                            long long n_terms = 10'000'000);

}  // namespace ousv::series
