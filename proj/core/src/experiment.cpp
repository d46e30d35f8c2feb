#include "ousv/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

#include "ousv/euler_baseline.hpp"
#include "ousv/kl_engine.hpp"
#include "ousv/summation.hpp"

namespace ousv {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

void parallel_for(long long n, int n_threads, const std::function<void(long long)>& fn) {
    if (n_threads <= 1 || n <= 1) {
        for (long long i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<long long> next{0};
    std::mutex err_mutex;
    std::exception_ptr error;
    auto work = [&] {
        for (;;) {
            const long long i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(err_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(work);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

SetResult run_kl_set(const ModelParams& p, double t, double strike,
                     const series::SeriesTail& tail, long long n_path, std::uint64_t seed,
                     std::uint64_t set_index, bool antithetic) {
    const auto t_gen = Clock::now();
    NormalRng rng(seed, set_index);
    DrawBlock block(tail.l_terms);
    std::vector<double> fwd(n_path), sig(n_path);
    long long floors = 0;

    const long long stride = antithetic ? 2 : 1;
    for (long long i = 0; i < n_path; i += stride) {
        fill_draws(rng, block);
        bool floored = false;
        Triplet tr = sample_triplet(block, p, t, tail, &floored);
        floors += floored;
        CondLaw cl = cond_law(tr, p, t);
        fwd[i] = cl.fwd;
        sig[i] = cl.sig_total;
        if (antithetic) {
            negate_draws(block);
            tr = sample_triplet(block, p, t, tail, &floored);
            floors += floored;
            cl = cond_law(tr, p, t);
            fwd[i + 1] = cl.fwd;
            sig[i + 1] = cl.sig_total;
        }
    }

    SetResult out;
    out.floor_events = floors;
    out.gen_seconds = seconds_since(t_gen);

    const auto t_price = Clock::now();
    const auto n = static_cast<double>(n_path);
    NeumaierSum fwd_sum;
    for (long long i = 0; i < n_path; ++i) fwd_sum.add(fwd[i]);
    const double mean_fwd = fwd_sum.value() / n;
    const double mu = p.s0 * std::exp(p.r * t) / mean_fwd;

    NeumaierSum call_plain, call_cv, put_cv, cv_spot;
    for (long long i = 0; i < n_path; ++i) {
        call_plain.add(bs_call(strike, fwd[i], sig[i]));
        const double fc = mu * fwd[i];
        call_cv.add(bs_call(strike, fc, sig[i]));
        put_cv.add(bs_put(strike, fc, sig[i]));
        cv_spot.add(fc);
    }
    const double disc = std::exp(-p.r * t);
    out.spot = disc * mean_fwd;
    out.call_plain = disc * call_plain.value() / n;
    out.call_cv = disc * call_cv.value() / n;
    out.put_cv = disc * put_cv.value() / n;
    out.cv_spot = disc * cv_spot.value() / n;
    out.price_seconds = seconds_since(t_price);
    return out;
}

SetResult run_euler_set(const ModelParams& p, double t, double strike, int n_steps,
                        long long n_path, std::uint64_t seed, std::uint64_t set_index,
                        bool antithetic) {
    const auto t_gen = Clock::now();
    NormalRng rng(seed, set_index);
    std::vector<double> draws(2 * static_cast<std::size_t>(n_steps));
    const EulerConfig cfg{n_steps};
    const double disc = std::exp(-p.r * t);

    // Discounted spot x and payoffs y; the control variate is the regression
    // on x, whose mean is s0 exactly.
    NeumaierSum sx, sxx, sy, sxy, syp, sxyp;
    const auto accumulate = [&](double s_t) {
        const double x = disc * s_t;
        const double y = disc * std::max(s_t - strike, 0.0);
        const double yp = disc * std::max(strike - s_t, 0.0);
        sx.add(x);
        sxx.add(x * x);
        sy.add(y);
        sxy.add(x * y);
        syp.add(yp);
        sxyp.add(x * yp);
    };

    const long long stride = antithetic ? 2 : 1;
    for (long long i = 0; i < n_path; i += stride) {
        rng.fill(draws);
        accumulate(simulate_euler(p, t, cfg, draws).s_t);
        if (antithetic) {
            for (double& d : draws) d = -d;
            accumulate(simulate_euler(p, t, cfg, draws).s_t);
        }
    }
    SetResult out;
    out.gen_seconds = seconds_since(t_gen);

    const auto n = static_cast<double>(n_path);
    const double mean_x = sx.value() / n;
    const double mean_y = sy.value() / n;
    const double mean_yp = syp.value() / n;
    const double var_x = sxx.value() / n - mean_x * mean_x;
    const double beta = var_x > 0.0 ? (sxy.value() / n - mean_x * mean_y) / var_x : 0.0;
    const double beta_p = var_x > 0.0 ? (sxyp.value() / n - mean_x * mean_yp) / var_x : 0.0;

    out.spot = mean_x;
    out.call_plain = mean_y;
    out.call_cv = mean_y - beta * (mean_x - p.s0);
    out.put_cv = mean_yp - beta_p * (mean_x - p.s0);
    out.cv_spot = mean_x;
    out.price_seconds = 0.0;  // estimators fall out of the accumulation pass
    return out;
}

double median_of(std::vector<double> xs) {
    if (xs.empty()) return 0.0;
    std::sort(xs.begin(), xs.end());
    const std::size_t mid = xs.size() / 2;
    return xs.size() % 2 == 1 ? xs[mid] : 0.5 * (xs[mid - 1] + xs[mid]);
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void csv_field(std::ostream& os, double x) {
    if (std::isnan(x)) return;  // absent value -> empty field
    os << format_double(x);
}

}  // namespace

int resolve_thread_count(int requested, long long n_tasks) {
    int threads = requested;
    if (threads <= 0) {
        if (const char* env = std::getenv("OUSV_THREADS")) {
            threads = std::atoi(env);
        }
    }
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 0) threads = 1;
    return static_cast<int>(std::min<long long>(threads, std::max<long long>(n_tasks, 1)));
}

std::vector<SetResult> run_sets(const RunConfig& cfg, double maturity, double strike, int l_terms,
                                long long n_path, long long n_set) {
    cfg.params.validate();
    if (!(maturity > 0.0)) throw std::invalid_argument("run: maturity must be > 0");
    if (!(strike > 0.0)) throw std::invalid_argument("run: strike must be > 0");
    if (n_path < 1 || n_set < 1) throw std::invalid_argument("run: n_path and n_set must be >= 1");
    if (cfg.antithetic && n_path % 2 != 0) {
        throw std::invalid_argument("run: antithetic sampling needs an even n_path");
    }

    std::vector<SetResult> results(n_set);
    const int threads = resolve_thread_count(cfg.n_threads, n_set);

    if (cfg.scheme == Scheme::kl_exact) {
        const series::SeriesTail tail = series::make_tail(cfg.params.kappa * maturity, l_terms);
        parallel_for(n_set, threads, [&](long long i) {
            results[i] = run_kl_set(cfg.params, maturity, strike, tail, n_path, cfg.seed,
                                    static_cast<std::uint64_t>(i), cfg.antithetic);
        });
    } else {
        parallel_for(n_set, threads, [&](long long i) {
            results[i] = run_euler_set(cfg.params, maturity, strike, cfg.euler_steps, n_path,
                                       cfg.seed, static_cast<std::uint64_t>(i), cfg.antithetic);
        });
    }

    long long floors = 0;
    for (const SetResult& r : results) floors += r.floor_events;
    const double floor_rate = static_cast<double>(floors) / (static_cast<double>(n_set) * n_path);
    if (floor_rate > 1e-3) {
        throw std::runtime_error("run: V < U^2 floor fired on " + std::to_string(floor_rate * 100) +
                                 "% of paths; increase L");
    }
    return results;
}

std::optional<double> default_reference_price(double maturity) {
    // Fourier-inversion benchmark prices for the standard parameter set.
    constexpr double kT[] = {1.0, 5.0, 10.0};
    constexpr double kPrice[] = {13.21492, 40.79769, 62.76312};
    for (int i = 0; i < 3; ++i) {
        if (std::abs(maturity - kT[i]) < 1e-12) return kPrice[i];
    }
    return std::nullopt;
}

PriceStats summarize(std::span<const double> per_set, std::optional<double> reference) {
    PriceStats st;
    const auto n = static_cast<double>(per_set.size());
    st.mean = compensated_mean(per_set);

    if (per_set.size() > 1) {
        NeumaierSum sq;
        for (double x : per_set) sq.add((x - st.mean) * (x - st.mean));
        st.std_error = std::sqrt(sq.value() / (n - 1.0)) / std::sqrt(n);
    }
    if (reference) {
        st.bias = st.mean - *reference;
        NeumaierSum dev;
        for (double x : per_set) dev.add((x - *reference) * (x - *reference));
        st.rmse = std::sqrt(dev.value() / n);
    } else {
        st.bias = std::numeric_limits<double>::quiet_NaN();
        st.rmse = std::numeric_limits<double>::quiet_NaN();
    }
    return st;
}

std::vector<ReportRow> run_table(const RunConfig& cfg) {
    cfg.params.validate();
    if (cfg.maturities.empty() || cfg.n_path_values.empty()) {
        throw std::invalid_argument("run: empty maturity or n_path list");
    }
    if (cfg.strikes.empty()) throw std::invalid_argument("run: empty strike list");
    if (cfg.strikes.size() != 1 && cfg.strikes.size() != cfg.maturities.size()) {
        throw std::invalid_argument("run: strikes must be a single value or match maturities");
    }

    // Euler rows are labelled by step count; L has no meaning there.
    const std::vector<int> l_list =
        cfg.scheme == Scheme::kl_exact ? cfg.l_values : std::vector<int>{cfg.euler_steps};
    if (l_list.empty()) throw std::invalid_argument("run: empty L list");

    std::vector<ReportRow> rows;
    for (std::size_t mi = 0; mi < cfg.maturities.size(); ++mi) {
        const double t = cfg.maturities[mi];
        const double strike = cfg.strikes.size() == 1 ? cfg.strikes[0] : cfg.strikes[mi];
        const std::optional<double> ref =
            cfg.reference_price ? cfg.reference_price : default_reference_price(t);

        for (int l : l_list) {
            for (long long n_path : cfg.n_path_values) {
                if (cfg.n_total % n_path != 0) {
                    throw std::invalid_argument("run: n_total must be divisible by n_path " +
                                                std::to_string(n_path));
                }
                const long long n_set = cfg.n_total / n_path;
                const auto sets = run_sets(cfg, t, strike, l, n_path, n_set);

                std::vector<double> spot(n_set), call(n_set), cv(n_set);
                double seconds = 0.0;
                long long floors = 0;
                for (long long i = 0; i < n_set; ++i) {
                    spot[i] = sets[i].spot;
                    call[i] = sets[i].call_plain;
                    cv[i] = sets[i].call_cv;
                    seconds += sets[i].gen_seconds + sets[i].price_seconds;
                    floors += sets[i].floor_events;
                }

                ReportRow row;
                row.maturity = t;
                row.l = l;
                row.n_path = n_path;
                row.n_set = n_set;
                const PriceStats sp = summarize(spot, cfg.params.s0);
                const PriceStats op = summarize(call, ref);
                const PriceStats cp = summarize(cv, ref);
                row.spot_mean = sp.mean;
                row.spot_stderr = sp.std_error;
                row.spot_bias = sp.bias;
                row.spot_rmse = sp.rmse;
                row.opt_mean = op.mean;
                row.opt_stderr = op.std_error;
                row.opt_bias = op.bias;
                row.opt_rmse = op.rmse;
                row.cv_mean = cp.mean;
                row.cv_stderr = cp.std_error;
                row.cv_bias = cp.bias;
                row.cv_rmse = cp.rmse;
                row.seconds_per_set = seconds / static_cast<double>(n_set);
                row.n_floor_events = floors;
                row.has_reference = ref.has_value();
                rows.push_back(row);
            }
        }
    }
    return rows;
}

TimingStats timing_probe(const RunConfig& cfg) {
    if (cfg.maturities.empty() || cfg.l_values.empty() || cfg.n_path_values.empty()) {
        throw std::invalid_argument("timing: need a maturity, L and n_path");
    }
    RunConfig serial = cfg;
    serial.n_threads = 1;
    const double t = cfg.maturities.front();
    const double strike = cfg.strikes.empty() ? 100.0 : cfg.strikes.front();
    const long long n_path = cfg.n_path_values.front();
    const long long n_set = std::max<long long>(cfg.n_total / n_path, 2);

    const auto sets = run_sets(serial, t, strike, cfg.l_values.front(), n_path, n_set);

    TimingStats out;
    std::vector<double> gen, price;
    for (std::size_t i = 1; i < sets.size(); ++i) {  // first set is warm-up
        gen.push_back(sets[i].gen_seconds);
        price.push_back(sets[i].price_seconds);
    }
    out.n_sets_measured = static_cast<int>(gen.size());
    if (!gen.empty()) {
        out.gen_mean = compensated_mean(gen);
        out.price_mean = compensated_mean(price);
        out.gen_median = median_of(gen);
        out.price_median = median_of(price);
    }
    return out;
}

void write_csv(std::span<const ReportRow> rows, std::ostream& os, bool include_timing) {
    os << "maturity,l,n_path,n_set,"
          "spot_mean,spot_stderr,spot_bias,spot_rmse,"
          "opt_mean,opt_stderr,opt_bias,opt_rmse,"
          "cv_mean,cv_stderr,cv_bias,cv_rmse,n_floor_events";
    if (include_timing) os << ",seconds_per_set";
    os << '\n';
    for (const ReportRow& r : rows) {
        os << format_double(r.maturity) << ',' << r.l << ',' << r.n_path << ',' << r.n_set << ',';
        csv_field(os, r.spot_mean); os << ',';
        csv_field(os, r.spot_stderr); os << ',';
        csv_field(os, r.spot_bias); os << ',';
        csv_field(os, r.spot_rmse); os << ',';
        csv_field(os, r.opt_mean); os << ',';
        csv_field(os, r.opt_stderr); os << ',';
        csv_field(os, r.opt_bias); os << ',';
        csv_field(os, r.opt_rmse); os << ',';
        csv_field(os, r.cv_mean); os << ',';
        csv_field(os, r.cv_stderr); os << ',';
        csv_field(os, r.cv_bias); os << ',';
        csv_field(os, r.cv_rmse); os << ',';
        os << r.n_floor_events;
        if (include_timing) {
            os << ',';
            csv_field(os, r.seconds_per_set);
        }
        os << '\n';
    }
}

void write_text(std::span<const ReportRow> rows, std::ostream& os) {
    double current_t = std::numeric_limits<double>::quiet_NaN();
    char line[256];
    for (const ReportRow& r : rows) {
        if (r.maturity != current_t) {
            current_t = r.maturity;
            os << "maturity T = " << current_t
               << "   (bias in 1e-4, RMSE in 1e-2, time in seconds per set)\n";
            std::snprintf(line, sizeof(line), "%4s %9s | %8s %8s | %8s %8s | %8s %8s | %9s\n", "L",
                          "n_path", "sp.bias", "sp.rmse", "op.bias", "op.rmse", "cv.bias",
                          "cv.rmse", "time");
            os << line;
        }
        std::snprintf(line, sizeof(line),
                      "%4d %9lld | %8.1f %8.2f | %8.1f %8.2f | %8.1f %8.2f | %9.3f\n", r.l,
                      r.n_path, r.spot_bias * 1e4, r.spot_rmse * 1e2, r.opt_bias * 1e4,
                      r.opt_rmse * 1e2, r.cv_bias * 1e4, r.cv_rmse * 1e2, r.seconds_per_set);
        os << line;
    }
}

}  // namespace ousv
