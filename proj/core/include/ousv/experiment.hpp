#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "ousv/ou_analytics.hpp"
#include "ousv/pricing.hpp"

namespace ousv {

enum class Scheme { kl_exact, euler };

/// One bias/RMSE experiment: a pool of n_total antithetic samples grouped
/// into sets of n_path paths, estimators evaluated per set. Rows are produced
/// for every maturity x L x n_path combination. strikes are matched to
/// maturities by index (a single strike broadcasts).
struct RunConfig {
    ModelParams params;
    std::vector<double> maturities{1.0};
    std::vector<double> strikes{100.0};
    std::vector<int> l_values{6};
    std::vector<long long> n_path_values{160'000};
    long long n_total = 2'560'000;
    std::uint64_t seed = 12345;
    bool antithetic = true;
    Scheme scheme = Scheme::kl_exact;
    std::optional<double> reference_price;  // per-table override; defaults below
    int euler_steps = 256;
    int n_threads = 0;  // 0 = OUSV_THREADS env, then hardware concurrency
};

/// Per-set estimator values. call_cv/put_cv use the multiplicative forward
/// control variate (Euler falls back to a regression control variate on the
/// discounted spot). cv_spot is the discounted mean of the rescaled forwards,
/// equal to s0 by construction of the control variate.
struct SetResult {
    double spot = 0.0;
    double call_plain = 0.0;
    double call_cv = 0.0;
    double put_cv = 0.0;
    double cv_spot = 0.0;
    double gen_seconds = 0.0;
    double price_seconds = 0.0;
    long long floor_events = 0;
};

/// Runs n_set independent MC sets; set i draws from substream (seed, i) so
/// results are bit-identical for any thread count. Aborts (std::runtime_error)
/// if the V < U^2 floor fires on more than 0.1% of paths.
std::vector<SetResult> run_sets(const RunConfig& cfg, double maturity, double strike, int l_terms,
                                long long n_path, long long n_set);

/// Mirrors the report tables: per-estimator bias/RMSE against the reference
/// across sets, plus means and standard errors for reference-free runs.
struct ReportRow {
    double maturity = 0.0;
    int l = 0;  // retained KL modes; Euler rows carry n_steps here
    long long n_path = 0;
    long long n_set = 0;
    double spot_mean = 0.0, spot_stderr = 0.0, spot_bias = 0.0, spot_rmse = 0.0;
    double opt_mean = 0.0, opt_stderr = 0.0, opt_bias = 0.0, opt_rmse = 0.0;
    double cv_mean = 0.0, cv_stderr = 0.0, cv_bias = 0.0, cv_rmse = 0.0;
    double seconds_per_set = 0.0;
    long long n_floor_events = 0;
    bool has_reference = false;  // opt/cv bias & rmse are NaN when false
};

std::vector<ReportRow> run_table(const RunConfig& cfg);

/// Reference prices for the standard test parameter set (T = 1, 5, 10).
std::optional<double> default_reference_price(double maturity);

/// Aggregates per-set estimates; bias/rmse are taken about the reference when
/// given, otherwise NaN.
PriceStats summarize(std::span<const double> per_set, std::optional<double> reference);

/// Wall-clock cost of one MC set, first (warm-up) set discarded, generation
/// and pricing reported separately. Runs single-threaded so per-set times are
/// not skewed by sibling workers.
struct TimingStats {
    double gen_mean = 0.0, gen_median = 0.0;
    double price_mean = 0.0, price_median = 0.0;
    int n_sets_measured = 0;
};

TimingStats timing_probe(const RunConfig& cfg);

/// CSV is locale-independent (period decimals, fixed column order). The
/// timing column is optional so reports compared across runs stay
/// bit-identical. Text output echoes the table layout (bias in 1e-4 units,
/// RMSE in 1e-2).
void write_csv(std::span<const ReportRow> rows, std::ostream& os, bool include_timing = true);
void write_text(std::span<const ReportRow> rows, std::ostream& os);

/// Worker count: explicit request, else OUSV_THREADS (0 = auto), else
/// hardware concurrency; never more than n_tasks.
int resolve_thread_count(int requested, long long n_tasks);

}  // namespace ousv
