#include "ousv/series_tails.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "ousv/detail/series_coeffs.hpp"
#include "ousv/summation.hpp"

namespace ousv::series {

namespace {

constexpr double kPi = std::numbers::pi;

// Shared pieces of the closed forms, written in exp(-2*lambda) so nothing
// overflows for any lambda >= 0:
//   lambda*coth(lambda)       = lambda*(1+e2)/(1-e2)
//   lambda^2/sinh(lambda)^2   = 4*lambda^2*e2/(1-e2)^2
struct HyperbolicTerms {
    double lcoth;
    double lam2_inv_sinh2;
};

HyperbolicTerms hyperbolic_terms(double lambda) {
    const double e2 = std::exp(-2.0 * lambda);
    const double den = 1.0 - e2;
    return {lambda * (1.0 + e2) / den, 4.0 * lambda * lambda * e2 / (den * den)};
}

double b0_closed(double lambda) {
    return (hyperbolic_terms(lambda).lcoth - 1.0) / (lambda * lambda);
}

double c0_closed(double lambda) {
    const auto h = hyperbolic_terms(lambda);
    const double lam2 = lambda * lambda;
    return (h.lcoth + h.lam2_inv_sinh2 - 2.0) / (lam2 * lam2);
}

double d0_closed(double lambda) {
    const auto h = hyperbolic_terms(lambda);
    const double lam2 = lambda * lambda;
    return (3.0 * h.lcoth + h.lam2_inv_sinh2 * (3.0 + 2.0 * h.lcoth) - 8.0) /
           (2.0 * lam2 * lam2 * lam2);
}

void require_even_nonnegative(int l_terms) {
    if (l_terms < 0 || l_terms % 2 != 0) {
        throw std::invalid_argument("series: number of retained terms must be even and >= 0, got " +
                                    std::to_string(l_terms));
    }
}

// Full sums carried as an unevaluated hi + lo pair. Deep tails are the full
// sum minus a nearly equal head, so a plain double full sum caps the tail at
// ~ulp(full)/tail relative accuracy (1e6 amplification at L = 16). On the
// series branch hi is the exact leading coefficient and lo collects its
// representation residual plus the k >= 1 terms, which pushes the pair's
// error down to ulp(lo).
struct SumParts {
    double hi;
    double lo;
};

template <std::size_t N>
SumParts series_parts(const std::array<double, N>& coeffs, double residual, double u) {
    double rest = 0.0;
    for (std::size_t i = N; i-- > 1;) rest = rest * u + coeffs[i];
    return {coeffs[0], residual + u * rest};
}

// residual = exact rational leading coefficient minus its nearest double
constexpr double kB0Lo = 1.850371707708594e-17;    // 1/3
constexpr double kC0Lo = -1.6961740653995447e-18;  // 2/45
constexpr double kD0Lo = -5.708984137870762e-19;   // 8/945
constexpr double kF0Lo = -8.480870326997723e-19;   // 1/45
constexpr double kG0Lo = -3.3923481307990893e-18;  // 4/45

SumParts b0_parts(double lambda) {
    using namespace detail;
    if (lambda < kSeriesCutoff) return series_parts(kB0Series, kB0Lo, lambda * lambda);
    return {b0_closed(lambda), 0.0};
}

SumParts c0_parts(double lambda) {
    using namespace detail;
    if (lambda < kSeriesCutoff) return series_parts(kC0Series, kC0Lo, lambda * lambda);
    return {c0_closed(lambda), 0.0};
}

SumParts d0_parts(double lambda) {
    using namespace detail;
    if (lambda < kSeriesCutoff) return series_parts(kD0Series, kD0Lo, lambda * lambda);
    return {d0_closed(lambda), 0.0};
}

SumParts f0_parts(double lambda) {
    using namespace detail;
    if (lambda < kSeriesCutoff) return series_parts(kF0Series, kF0Lo, lambda * lambda);
    return {(1.0 / 3.0 - b0_closed(lambda)) / (lambda * lambda), 0.0};
}

SumParts g0_parts(double lambda) {
    using namespace detail;
    if (lambda < kSeriesCutoff) return series_parts(kG0Series, kG0Lo, lambda * lambda);
    return {2.0 * c0_closed(lambda) - lambda * lambda * d0_closed(lambda), 0.0};
}

// even-index sum: base(lambda/2)/16, exact scaling of both halves
SumParts even_parts(const SumParts& base_half) {
    return {base_half.hi / 16.0, base_half.lo / 16.0};
}

void start_tail(NeumaierSum& acc, const SumParts& full) {
    acc.add(full.hi);
    acc.add(full.lo);
}

// Double-double arithmetic (Dekker/Knuth error-free transforms) for the head
// terms. A deep tail is full-sum minus head, with the head up to ~1e7 times
// the tail; per-term rounding of plain-double heads would therefore cap the
// tails near 1e-9 relative. Heads are L <= 64 terms built once per
// configuration, so the extra cost is irrelevant.
struct DD {
    double hi = 0.0, lo = 0.0;
};

DD quick_two_sum(double a, double b) {  // requires |a| >= |b|
    const double s = a + b;
    return {s, b - (s - a)};
}

DD two_sum(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

DD two_prod(double a, double b) {
    const double p = a * b;
    return {p, std::fma(a, b, -p)};
}

DD dd_add(const DD& x, const DD& y) {
    DD s = two_sum(x.hi, y.hi);
    s.lo += x.lo + y.lo;
    return quick_two_sum(s.hi, s.lo);
}

DD dd_mul(const DD& x, const DD& y) {
    DD p = two_prod(x.hi, y.hi);
    p.lo += x.hi * y.lo + x.lo * y.hi;
    return quick_two_sum(p.hi, p.lo);
}

DD dd_div(const DD& x, const DD& y) {
    const double q1 = x.hi / y.hi;
    DD r = dd_add(x, dd_mul({-q1, 0.0}, y));
    const double q2 = r.hi / y.hi;
    r = dd_add(r, dd_mul({-q2, 0.0}, y));
    const double q3 = r.hi / y.hi;
    DD q = quick_two_sum(q1, q2);
    return dd_add(q, {q3, 0.0});
}

// pi to double-double precision
constexpr double kPiLo = 1.2246467991473532e-16;

struct HeadTerms {
    DD a2, a4, a6, f_term, g_term;
};

HeadTerms head_terms_dd(const DD& lam2, int n) {
    DD np = two_prod(static_cast<double>(n), kPi);
    np.lo += static_cast<double>(n) * kPiLo;
    const DD np2 = dd_mul(np, np);
    HeadTerms t;
    t.a2 = dd_div({2.0, 0.0}, dd_add(lam2, np2));
    t.a4 = dd_mul(t.a2, t.a2);
    t.a6 = dd_mul(t.a4, t.a2);
    t.f_term = dd_div(t.a2, np2);
    t.g_term = dd_mul(np2, t.a6);
    return t;
}

void subtract_dd(NeumaierSum& acc, const DD& x) {
    acc.add(-x.hi);
    acc.add(-x.lo);
}

}  // namespace

double b0(double lambda) {
    const SumParts p = b0_parts(lambda);
    return p.hi + p.lo;
}

double c0(double lambda) {
    const SumParts p = c0_parts(lambda);
    return p.hi + p.lo;
}

double d0(double lambda) {
    const SumParts p = d0_parts(lambda);
    return p.hi + p.lo;
}

double f0(double lambda) {
    const SumParts p = f0_parts(lambda);
    return p.hi + p.lo;
}

double g0(double lambda) {
    const SumParts p = g0_parts(lambda);
    return p.hi + p.lo;
}

double even_part(Sum s, double lambda) {
    // Even indices n = 2m reduce to the same sum at lambda/2, scaled by 1/16.
    switch (s) {
        case Sum::c: return c0(0.5 * lambda) / 16.0;
        case Sum::f: return f0(0.5 * lambda) / 16.0;
        case Sum::g: return g0(0.5 * lambda) / 16.0;
    }
    throw std::invalid_argument("series: unknown sum id");
}

double odd_part(Sum s, double lambda) {
    switch (s) {
        case Sum::c: return c0(lambda) - even_part(Sum::c, lambda);
        case Sum::f: return f0(lambda) - even_part(Sum::f, lambda);
        case Sum::g: return g0(lambda) - even_part(Sum::g, lambda);
    }
    throw std::invalid_argument("series: unknown sum id");
}

SeriesSums tail_family(double lambda, int l_terms) {
    if (lambda < 0.0) throw std::invalid_argument("series: lambda must be >= 0");
    require_even_nonnegative(l_terms);

    const SumParts b_full = b0_parts(lambda);
    const SumParts c_full = c0_parts(lambda);
    const SumParts d_full = d0_parts(lambda);
    const SumParts f_full = f0_parts(lambda);
    const SumParts g_full = g0_parts(lambda);
    const SumParts c_even = even_parts(c0_parts(0.5 * lambda));
    const SumParts f_even = even_parts(f0_parts(0.5 * lambda));
    const SumParts g_even = even_parts(g0_parts(0.5 * lambda));

    // Each tail is accumulated as full (hi then lo) minus the head terms,
    // all inside one compensated sum: the hi-vs-head cancellation is then
    // tracked exactly instead of rounding through an intermediate double.
    NeumaierSum b_t, d_t, c_odd_t, c_even_t, f_odd_t, f_even_t, g_odd_t, g_even_t;
    start_tail(b_t, b_full);
    start_tail(d_t, d_full);
    start_tail(c_even_t, c_even);
    start_tail(f_even_t, f_even);
    start_tail(g_even_t, g_even);
    // odd full sums: full minus even, fed in as four addends
    start_tail(c_odd_t, c_full);
    c_odd_t.add(-c_even.hi);
    c_odd_t.add(-c_even.lo);
    start_tail(f_odd_t, f_full);
    f_odd_t.add(-f_even.hi);
    f_odd_t.add(-f_even.lo);
    start_tail(g_odd_t, g_full);
    g_odd_t.add(-g_even.hi);
    g_odd_t.add(-g_even.lo);

    const DD lam2 = two_prod(lambda, lambda);
    for (int n = 1; n <= l_terms; ++n) {
        const HeadTerms t = head_terms_dd(lam2, n);
        subtract_dd(b_t, t.a2);
        subtract_dd(d_t, t.a6);
        if (n & 1) {
            subtract_dd(c_odd_t, t.a4);
            subtract_dd(f_odd_t, t.f_term);
            subtract_dd(g_odd_t, t.g_term);
        } else {
            subtract_dd(c_even_t, t.a4);
            subtract_dd(f_even_t, t.f_term);
            subtract_dd(g_even_t, t.g_term);
        }
    }

    SeriesSums out;
    out.b = b_t.value();
    out.d = d_t.value();
    out.c_odd = c_odd_t.value();
    out.c_even = c_even_t.value();
    out.f_odd = f_odd_t.value();
    out.f_even = f_even_t.value();
    out.g_odd = g_odd_t.value();
    out.g_even = g_even_t.value();
    out.c = out.c_odd + out.c_even;
    out.f = out.f_odd + out.f_even;
    out.g = out.g_odd + out.g_even;
    return out;
}

SeriesTail make_tail(double lambda, int l_terms) {
    if (lambda < 0.0) throw std::invalid_argument("series: lambda must be >= 0");
    if (l_terms < 2 || l_terms % 2 != 0) {
        throw std::invalid_argument("series: L must be even and >= 2, got " +
                                    std::to_string(l_terms));
    }

    const SeriesSums fam = tail_family(lambda, l_terms);

    // A tail is a positive-term series; anything below -slack means the
    // analytic full sum and the explicit head disagree.
    const auto checked = [&](double tail, double full, const char* name) {
        const double slack = 1e-12 * std::abs(full) + 1e-300;
        if (tail < -slack) {
            throw std::runtime_error(std::string("series: negative tail for ") + name);
        }
        return std::max(tail, 0.0);
    };

    SeriesTail out;
    out.lambda = lambda;
    out.l_terms = l_terms;
    out.odd_f = checked(fam.f_odd, f0(lambda), "odd f");
    out.odd_c = checked(fam.c_odd, c0(lambda), "odd c");
    out.odd_g = checked(fam.g_odd, g0(lambda), "odd g");
    out.even_g = checked(fam.g_even, g0(lambda), "even g");
    out.full_c = checked(fam.c, c0(lambda), "c");
    out.b_tail = checked(fam.b, b0(lambda), "b");

    // At lambda = 0 the odd G/P term sequences are proportional
    // (a_n/(n pi) = n pi a_n^3 / 2), so the correlation is exactly 1 and the
    // tail Gaussian block is rank-one; sampling stays valid. Clamp the
    // rounding excess, reject anything genuinely outside (0, 1].
    out.rho_l = out.odd_c / std::sqrt(out.odd_f * out.odd_g);
    if (!(out.rho_l > 0.0 && out.rho_l <= 1.0 + 1e-12)) {
        throw std::runtime_error("series: tail correlation outside (0,1]");
    }
    out.rho_l = std::min(out.rho_l, 1.0);

    out.a.resize(l_terms);
    out.u_coef.resize(l_terms);
    out.v_coef.resize(l_terms);
    out.a_sq.resize(l_terms);
    NeumaierSum head_b;
    const double lam2 = lambda * lambda;
    for (int n = 1; n <= l_terms; ++n) {
        const double np = n * kPi;
        const double a2 = 2.0 / (lam2 + np * np);
        const double a1 = std::sqrt(a2);
        const int i = n - 1;
        out.a[i] = a1;
        out.a_sq[i] = a2;
        out.u_coef[i] = (n % 2 == 1) ? a1 / np : 0.0;
        out.v_coef[i] = np * a1 * a2;
        head_b.add(a2);
    }
    out.head_b = head_b.value();

    out.sqrt_odd_f = std::sqrt(out.odd_f);
    out.sqrt_odd_g = std::sqrt(out.odd_g);
    out.sqrt_even_g = std::sqrt(out.even_g);
    out.sqrt_full_c = std::sqrt(out.full_c);
    out.rho_comp = std::sqrt(std::max(1.0 - out.rho_l * out.rho_l, 0.0));
    return out;
}

std::vector<SeriesSums> reference_tail_sums(double lambda, std::span<const int> l_values,
                                            long long n_terms) {
    if (lambda < 0.0) throw std::invalid_argument("series: lambda must be >= 0");
    if (l_values.empty()) return {};
    for (std::size_t i = 0; i < l_values.size(); ++i) {
        if (l_values[i] < 0 || (i > 0 && l_values[i] <= l_values[i - 1])) {
            throw std::invalid_argument("series: l_values must be strictly ascending and >= 0");
        }
    }
    if (n_terms <= l_values.back()) {
        throw std::invalid_argument("series: n_terms must exceed the largest L");
    }

    NeumaierSum b_acc, d_acc, c_acc[2], f_acc[2], g_acc[2];

    // Remainder of the b series beyond the cap: midpoint integral of
    // 2/(lambda^2 + (pi x)^2) from n_terms + 1/2. The Euler-Maclaurin
    // correction terms are O(N^-3) and irrelevant at N = 1e7.
    const double edge = static_cast<double>(n_terms) + 0.5;
    const double b_rest = lambda > 0.0
                              ? (2.0 / (kPi * lambda)) * std::atan(lambda / (kPi * edge))
                              : 2.0 / (kPi * kPi * edge);
    b_acc.add(b_rest);

    std::vector<SeriesSums> out(l_values.size());
    const auto snapshot = [&](SeriesSums& s) {
        s.b = b_acc.value();
        s.d = d_acc.value();
        s.c_odd = c_acc[1].value();
        s.c_even = c_acc[0].value();
        s.f_odd = f_acc[1].value();
        s.f_even = f_acc[0].value();
        s.g_odd = g_acc[1].value();
        s.g_even = g_acc[0].value();
        s.c = s.c_odd + s.c_even;
        s.f = s.f_odd + s.f_even;
        s.g = s.g_odd + s.g_even;
    };

    const double lam2 = lambda * lambda;
    std::size_t idx = l_values.size();
    for (long long n = n_terms; n >= 1; --n) {
        while (idx > 0 && l_values[idx - 1] == n) snapshot(out[--idx]);
        const double np = static_cast<double>(n) * kPi;
        const double np2 = np * np;
        const double a2 = 2.0 / (lam2 + np2);
        const double a4 = a2 * a2;
        const double a6 = a4 * a2;
        const int par = static_cast<int>(n & 1);
        b_acc.add(a2);
        d_acc.add(a6);
        c_acc[par].add(a4);
        f_acc[par].add(a2 / np2);
        g_acc[par].add(np2 * a6);
    }
    while (idx > 0 && l_values[idx - 1] == 0) snapshot(out[--idx]);
    return out;
}

}  // namespace ousv::series
