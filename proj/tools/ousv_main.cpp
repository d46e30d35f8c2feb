// ousv: exact OUSV Monte Carlo engine.
//
// Subcommands:
//   price         single European option price (conditional simulation)
//   table         bias/RMSE report across MC sets, CSV or text
//   paths         KL-reconstructed volatility path data as CSV
//   check-series  analytic series sums vs direct compensated summation

#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ousv/experiment.hpp"
#include "ousv/kl_engine.hpp"
#include "ousv/path_synth.hpp"
#include "ousv/series_tails.hpp"
#include "ousv/summation.hpp"

namespace {

struct Options {
    ousv::ModelParams params;
    std::vector<double> maturities{1.0};
    std::vector<double> strikes{100.0};
    std::vector<int> l_terms{6};
    std::vector<long long> n_path{160'000};
    long long n_total = 2'560'000;
    std::uint64_t seed = 12345;
    bool cv = true;
    bool antithetic = true;
    std::string scheme = "kl-exact";
    int euler_steps = 256;
    double ref_price = std::numeric_limits<double>::quiet_NaN();
    std::string out_path;
    std::string format = "text";
    std::string config_path;
    bool check = false;
    bool timing = true;
    bool probe = false;

    // paths subcommand
    std::vector<int> n_terms{2, 8, 16, 64};
    int n_paths = 2;
    int n_grid = 513;

    // check-series subcommand
    std::vector<double> lambdas{0.0, 1e-4, 0.1, 1.0, 4.0, 8.0, 20.0, 40.0};
    std::vector<int> check_l{2, 4, 6, 8, 10, 16};
    long long terms = 10'000'000;
    double tol = 1e-9;
};

// Plain key=value config files ('#' comments); values apply only where the
// command line did not already set the option.
class ConfigBinder {
  public:
    explicit ConfigBinder(CLI::App* sub) : sub_(sub) {}

    template <typename T>
    void bind(const std::string& key, T& target) {
        setters_[key] = [&target](const std::string& v) { target = parse<T>(v); };
    }

    void apply_file(const std::string& path) const {
        std::ifstream in(path);
        if (!in) throw CLI::ValidationError("config", "cannot open config file: " + path);
        std::string line;
        int line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const std::string trimmed = trim(line);
            if (trimmed.empty()) continue;
            const auto eq = trimmed.find('=');
            if (eq == std::string::npos) {
                throw CLI::ValidationError(
                    "config", "expected key=value at line " + std::to_string(line_no));
            }
            const std::string key = trim(trimmed.substr(0, eq));
            const std::string value = trim(trimmed.substr(eq + 1));
            const auto it = setters_.find(key);
            if (it == setters_.end()) {
                throw CLI::ValidationError("config", "unknown key '" + key + "'");
            }
            if (sub_->count("--" + key) > 0) continue;  // flag wins over file
            it->second(value);
        }
    }

  private:
    static std::string trim(const std::string& s) {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return "";
        const auto e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    }

    template <typename T>
    static T parse(const std::string& v);

    CLI::App* sub_;
    std::map<std::string, std::function<void(const std::string&)>> setters_;
};

template <>
double ConfigBinder::parse<double>(const std::string& v) {
    return std::stod(v);
}
template <>
int ConfigBinder::parse<int>(const std::string& v) {
    return std::stoi(v);
}
template <>
long long ConfigBinder::parse<long long>(const std::string& v) {
    return std::stoll(v);
}
template <>
std::uint64_t ConfigBinder::parse<std::uint64_t>(const std::string& v) {
    return std::stoull(v);
}
template <>
std::string ConfigBinder::parse<std::string>(const std::string& v) {
    return v;
}
template <>
bool ConfigBinder::parse<bool>(const std::string& v) {
    if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "off" || v == "no") return false;
    throw CLI::ValidationError("config", "expected boolean, got '" + v + "'");
}
template <typename T>
T ConfigBinder::parse(const std::string& v) {
    T out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(parse<typename T::value_type>(item));
    }
    return out;
}

void add_model_options(CLI::App* sub, Options& o, ConfigBinder& cfg) {
    sub->add_option("--s0", o.params.s0, "spot price");
    sub->add_option("--sigma0", o.params.sigma0, "initial volatility");
    sub->add_option("--theta", o.params.theta, "long-term volatility");
    sub->add_option("--kappa", o.params.kappa, "mean reversion speed");
    sub->add_option("--xi", o.params.xi, "volatility of volatility");
    sub->add_option("--rho", o.params.rho, "price/volatility correlation");
    sub->add_option("--r", o.params.r, "risk-free rate");
    cfg.bind("s0", o.params.s0);
    cfg.bind("sigma0", o.params.sigma0);
    cfg.bind("theta", o.params.theta);
    cfg.bind("kappa", o.params.kappa);
    cfg.bind("xi", o.params.xi);
    cfg.bind("rho", o.params.rho);
    cfg.bind("r", o.params.r);
}

void add_run_options(CLI::App* sub, Options& o, ConfigBinder& cfg) {
    sub->add_option("--maturity", o.maturities, "maturity in years (comma list for table)")
        ->delimiter(',');
    sub->add_option("--strike", o.strikes, "strike (comma list pairs with maturities)")
        ->delimiter(',');
    sub->add_option("--l-terms", o.l_terms, "retained KL modes, even (comma list for table)")
        ->delimiter(',');
    sub->add_option("--n-path", o.n_path, "paths per MC set (comma list for table)")
        ->delimiter(',');
    sub->add_option("--n-total", o.n_total, "total pool size across sets");
    sub->add_option("--seed", o.seed, "RNG seed");
    sub->add_flag("--cv,!--no-cv", o.cv, "martingale-preserving control variate");
    sub->add_flag("--antithetic,!--no-antithetic", o.antithetic, "antithetic pairing");
    sub->add_option("--scheme", o.scheme, "simulation scheme")
        ->check(CLI::IsMember({"kl-exact", "euler"}));
    sub->add_option("--euler-steps", o.euler_steps, "time steps for the euler scheme");
    sub->add_option("--ref-price", o.ref_price, "reference price for bias/RMSE");
    cfg.bind("maturity", o.maturities);
    cfg.bind("strike", o.strikes);
    cfg.bind("l-terms", o.l_terms);
    cfg.bind("n-path", o.n_path);
    cfg.bind("n-total", o.n_total);
    cfg.bind("seed", o.seed);
    cfg.bind("cv", o.cv);
    cfg.bind("antithetic", o.antithetic);
    cfg.bind("scheme", o.scheme);
    cfg.bind("euler-steps", o.euler_steps);
    cfg.bind("ref-price", o.ref_price);
}

void add_output_options(CLI::App* sub, Options& o, ConfigBinder& cfg) {
    sub->add_option("--out", o.out_path, "output file (default stdout)");
    sub->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"csv", "text"}));
    cfg.bind("out", o.out_path);
    cfg.bind("format", o.format);
}

std::ostream& open_output(const std::string& path, std::ofstream& file) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw std::runtime_error("cannot open output file: " + path);
    return file;
}

ousv::RunConfig to_run_config(const Options& o) {
    ousv::RunConfig cfg;
    cfg.params = o.params;
    cfg.maturities = o.maturities;
    cfg.strikes = o.strikes;
    cfg.l_values = o.l_terms;
    cfg.n_path_values = o.n_path;
    cfg.n_total = o.n_total;
    cfg.seed = o.seed;
    cfg.antithetic = o.antithetic;
    cfg.scheme = o.scheme == "euler" ? ousv::Scheme::euler : ousv::Scheme::kl_exact;
    cfg.euler_steps = o.euler_steps;
    if (!std::isnan(o.ref_price)) cfg.reference_price = o.ref_price;
    return cfg;
}

int run_price(const Options& o) {
    ousv::RunConfig cfg = to_run_config(o);
    const double t = o.maturities.front();
    const double strike = o.strikes.front();
    const long long n_path = o.n_path.front();
    if (cfg.n_total % n_path != 0) {
        throw std::invalid_argument("price: n-total must be divisible by n-path");
    }
    const long long n_set = cfg.n_total / n_path;
    const auto sets = ousv::run_sets(cfg, t, strike, o.l_terms.front(), n_path, n_set);

    std::vector<double> price(sets.size()), spot(sets.size());
    for (std::size_t i = 0; i < sets.size(); ++i) {
        price[i] = o.cv ? sets[i].call_cv : sets[i].call_plain;
        spot[i] = sets[i].spot;
    }
    const ousv::PriceStats ps = ousv::summarize(price, std::nullopt);
    const double spot_check = ousv::compensated_mean(spot);

    std::ofstream file;
    std::ostream& os = open_output(o.out_path, file);
    if (o.format == "csv") {
        os << "price,stderr,spot_check\n"
           << ps.mean << ',' << ps.std_error << ',' << spot_check << '\n';
    } else {
        os << "price      = " << ps.mean << '\n'
           << "stderr     = " << ps.std_error << "   (" << n_set << " sets of " << n_path
           << " paths)\n"
           << "spot_check = " << spot_check << '\n';
    }
    return 0;
}

int run_table_cmd(const Options& o) {
    const ousv::RunConfig cfg = to_run_config(o);
    const auto rows = ousv::run_table(cfg);

    std::ofstream file;
    std::ostream& os = open_output(o.out_path, file);
    if (o.format == "csv") {
        ousv::write_csv(rows, os, o.timing);
    } else {
        ousv::write_text(rows, os);
    }

    if (o.probe) {
        const auto ts = ousv::timing_probe(cfg);
        std::cerr << "timing probe (" << ts.n_sets_measured << " sets, first discarded): "
                  << "gen mean " << ts.gen_mean << " s, median " << ts.gen_median
                  << " s; price mean " << ts.price_mean << " s, median " << ts.price_median
                  << " s\n";
    }

    if (!o.check) return 0;
    int failures = 0;
    for (const auto& row : rows) {
        const auto fail = [&](const std::string& what) {
            std::cerr << "check failed (T=" << row.maturity << " L=" << row.l
                      << " n_path=" << row.n_path << "): " << what << '\n';
            ++failures;
        };
        if (!row.has_reference) {
            fail("no reference price for bias/RMSE");
            continue;
        }
        if (row.spot_rmse * row.spot_rmse < row.spot_bias * row.spot_bias - 1e-18) {
            fail("spot RMSE below |bias|");
        }
        if (row.cv_rmse * row.cv_rmse < row.cv_bias * row.cv_bias - 1e-18) {
            fail("cv RMSE below |bias|");
        }
        if (std::abs(row.cv_bias) > 3.0 * std::max(row.cv_stderr, 1e-12) &&
            row.n_set > 1) {
            fail("cv bias beyond 3 standard errors");
        }
    }
    if (failures == 0) std::cerr << "check passed (" << rows.size() << " rows)\n";
    return failures == 0 ? 0 : 1;
}

int run_paths(const Options& o) {
    o.params.validate();
    const double t = o.maturities.front();
    int max_terms = 0;
    for (int n : o.n_terms) max_terms = std::max(max_terms, n);

    std::ofstream file;
    std::ostream& os = open_output(o.out_path, file);
    os << "n_terms,path,t,sigma\n";

    ousv::NormalRng rng(o.seed, 0);
    std::vector<double> z(max_terms);
    for (int path = 0; path < o.n_paths; ++path) {
        // One draw sequence per path, shared by every resolution so the
        // refinement is nested.
        const double z0 = rng.next();
        rng.fill(z);
        for (int n : o.n_terms) {
            const auto grid = ousv::build_path(
                z0, std::span<const double>(z.data(), static_cast<std::size_t>(n)), o.params, t,
                o.n_grid);
            for (std::size_t i = 0; i < grid.t_grid.size(); ++i) {
                os << n << ',' << path << ',' << grid.t_grid[i] << ',' << grid.sigma_vals[i]
                   << '\n';
            }
        }
    }
    return 0;
}

int run_check_series(const Options& o) {
    std::vector<int> ls = o.check_l;
    ls.insert(ls.begin(), 0);  // include the full sums

    double worst = 0.0;
    std::ofstream file;
    std::ostream& os = open_output(o.out_path, file);
    for (double lambda : o.lambdas) {
        const auto ref = ousv::series::reference_tail_sums(lambda, ls, o.terms);
        double lam_worst = 0.0;
        for (std::size_t i = 0; i < ls.size(); ++i) {
            const auto ana = ousv::series::tail_family(lambda, ls[i]);
            const auto rel = [&](double a, double b) {
                return std::abs(a - b) / std::abs(b);
            };
            const double errs[] = {
                rel(ana.b, ref[i].b),         rel(ana.c, ref[i].c),
                rel(ana.d, ref[i].d),         rel(ana.f, ref[i].f),
                rel(ana.g, ref[i].g),         rel(ana.c_odd, ref[i].c_odd),
                rel(ana.c_even, ref[i].c_even), rel(ana.f_odd, ref[i].f_odd),
                rel(ana.f_even, ref[i].f_even), rel(ana.g_odd, ref[i].g_odd),
                rel(ana.g_even, ref[i].g_even)};
            for (double e : errs) lam_worst = std::max(lam_worst, e);
        }
        os << "lambda = " << lambda << ": max relative error " << lam_worst << '\n';
        worst = std::max(worst, lam_worst);
    }
    os << "overall max relative error = " << worst << " (tolerance " << o.tol << ")\n";
    return worst <= o.tol ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact Monte Carlo simulation of the OU-driven stochastic volatility model"};
    app.require_subcommand(1);

    Options o;

    auto* price = app.add_subcommand("price", "price a European option");
    auto* table = app.add_subcommand("table", "bias/RMSE report across MC sets");
    auto* paths = app.add_subcommand("paths", "emit KL volatility path data");
    auto* check = app.add_subcommand("check-series", "series sums vs direct summation");

    ConfigBinder price_cfg(price), table_cfg(table), paths_cfg(paths), check_cfg(check);
    for (auto [sub, cfg] : {std::pair{price, &price_cfg}, {table, &table_cfg}}) {
        add_model_options(sub, o, *cfg);
        add_run_options(sub, o, *cfg);
        add_output_options(sub, o, *cfg);
        sub->add_option("--config", o.config_path, "key=value config file; flags override");
    }
    table->add_flag("--check", o.check, "verify report consistency, exit nonzero on failure");
    table->add_flag("--timing,!--no-timing", o.timing, "include the per-set time column in CSV");
    table->add_flag("--probe", o.probe, "print a per-set timing probe to stderr");

    add_model_options(paths, o, paths_cfg);
    paths->add_option("--maturity", o.maturities, "horizon in years")->delimiter(',');
    paths->add_option("--n-terms", o.n_terms, "sine-term counts, comma list")->delimiter(',');
    paths->add_option("--n-paths", o.n_paths, "number of sample paths");
    paths->add_option("--n-grid", o.n_grid, "grid points per path");
    paths->add_option("--seed", o.seed, "RNG seed");
    paths->add_option("--out", o.out_path, "output file (default stdout)");
    paths->add_option("--config", o.config_path, "key=value config file; flags override");
    paths_cfg.bind("maturity", o.maturities);
    paths_cfg.bind("n-terms", o.n_terms);
    paths_cfg.bind("n-paths", o.n_paths);
    paths_cfg.bind("n-grid", o.n_grid);
    paths_cfg.bind("seed", o.seed);
    paths_cfg.bind("out", o.out_path);

    check->add_option("--lambda", o.lambdas, "lambda = kappa*T values, comma list")
        ->delimiter(',');
    check->add_option("--l", o.check_l, "truncation points, comma list")->delimiter(',');
    check->add_option("--terms", o.terms, "summation cap for the reference route");
    check->add_option("--tol", o.tol, "maximum accepted relative error");
    check->add_option("--out", o.out_path, "output file (default stdout)");
    check->add_option("--config", o.config_path, "key=value config file; flags override");
    check_cfg.bind("lambda", o.lambdas);
    check_cfg.bind("l", o.check_l);
    check_cfg.bind("terms", o.terms);
    check_cfg.bind("tol", o.tol);
    check_cfg.bind("out", o.out_path);

    CLI11_PARSE(app, argc, argv);

    try {
        CLI::App* sub = app.get_subcommands().front();
        if (!o.config_path.empty()) {
            if (sub == price) price_cfg.apply_file(o.config_path);
            if (sub == table) table_cfg.apply_file(o.config_path);
            if (sub == paths) paths_cfg.apply_file(o.config_path);
            if (sub == check) check_cfg.apply_file(o.config_path);
        }
        if (sub == price) return run_price(o);
        if (sub == table) return run_table_cmd(o);
        if (sub == paths) return run_paths(o);
        if (sub == check) return run_check_series(o);
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
