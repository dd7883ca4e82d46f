// Acceptance suite: one self-contained check per criterion, each printing a
// single [PASS]/[FAIL] line. Exit status is zero only if every criterion
// holds. Heavy experiments run once at 8 worker threads; the determinism
// criterion reruns them at 1 thread and byte-compares the CSV artifacts.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "specreg/csvio.hpp"
#include "specreg/diagnostics.hpp"
#include "specreg/estimator.hpp"
#include "specreg/harness.hpp"
#include "specreg/report_io.hpp"

using namespace specreg;
using clock_type = std::chrono::steady_clock;

namespace {

constexpr int kRunThreads = 8;
constexpr std::uint64_t kSeedConcentration = 1404;
constexpr std::uint64_t kSeedRates = 1505;
constexpr std::uint64_t kSeedOrdering = 1606;
constexpr std::uint64_t kSeedSweep = 1707;

struct Criterion {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
};

// CSV artifacts of the first (8-thread) runs, keyed per criterion; the
// determinism criterion compares 1-thread reruns against these bytes.
std::map<std::string, std::string> g_artifacts;

std::string fmt(double v) { return io::format_double(v); }

Eigen::MatrixXd random_matrix(long n, long d, unsigned seed, double scale) {
    std::mt19937 gen(seed);
    std::normal_distribution<double> nd;
    Eigen::MatrixXd x(n, d);
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < d; ++j) x(i, j) = scale * nd(gen) / std::sqrt(double(d));
    return x;
}

Dataset random_dataset(long n, long d, unsigned seed, double scale = 1.0) {
    std::mt19937 gen(seed + 1000000u);
    std::normal_distribution<double> nd;
    Eigen::VectorXd y(n);
    for (long i = 0; i < n; ++i) y(i) = nd(gen);
    return Dataset(random_matrix(n, d, seed, scale), y);
}

// ---------------------------------------------------------------- criterion 1
Criterion criterion_filter_axioms() {
    Criterion c;
    const double kappa_sq = 1.0;
    {
        const auto rep = verify_filter_axioms(FilterSpec::spectral_cutoff(2.0), kappa_sq);
        c.require(rep.pass && rep.eq7_bound == 1.0 && rep.eq8_bound == 1.0,
                  "cutoff axioms (E=F=1)");
    }
    for (double tau : {1.0, 2.0}) {
        const auto rep = verify_filter_axioms(FilterSpec::gradient(1.0, tau), kappa_sq);
        const double f_tau = std::pow(tau / std::exp(1.0), tau);
        c.require(rep.pass, "gradient tau=" + fmt(tau) + " axioms");
        c.require(std::abs(rep.eq8_bound - f_tau) < 1e-15,
                  "gradient tau=" + fmt(tau) + " declared constant (tau/e)^tau");
        c.require(rep.eq7_bound == 1.0, "gradient E=1");
        c.require(rep.eq8_max_at_tau <= f_tau * (1.0 + 1e-9),
                  "gradient residual max at tau within (tau/e)^tau");
    }
    for (int l : {1, 2, 3}) {
        const auto rep = verify_filter_axioms(FilterSpec::iterated_ridge(l), kappa_sq);
        c.require(rep.pass && rep.eq7_bound == double(l) && rep.eq8_bound == 1.0,
                  "ridge l=" + std::to_string(l) + " axioms (E=l, F=1)");
    }
    return c;
}

// ---------------------------------------------------------------- criterion 2
Criterion criterion_estimator_equivalences() {
    Criterion c;
    // ridge filter vs direct linear solve
    for (unsigned seed = 0; seed < 20; ++seed) {
        std::mt19937 shape(seed * 7 + 1);
        const long n = 10 + long(shape() % 51);
        const long d = 2 + long(shape() % 19);
        const Dataset data = random_dataset(n, d, seed + 300);
        const double lam = 0.1 + 0.3 * double(shape() % 4);
        const auto est = fit_primal(data, FilterSpec::iterated_ridge(1), lam);
        const Eigen::MatrixXd tx = data.inputs.transpose() * data.inputs / double(n);
        const Eigen::VectorXd sxy = data.inputs.transpose() * data.outputs / double(n);
        const Eigen::VectorXd direct =
            (tx + lam * Eigen::MatrixXd::Identity(d, d)).ldlt().solve(sxy);
        const double diff = (est.primal_coefficients() - direct).norm();
        c.require(diff <= 1e-8, "ridge vs direct solve seed " + std::to_string(seed) +
                                    " diff=" + fmt(diff));
    }
    // gradient filter vs explicit Landweber iteration
    for (unsigned seed = 0; seed < 10; ++seed) {
        Dataset raw = random_dataset(64, 6, seed + 900);
        Eigen::MatrixXd x = raw.inputs * std::sqrt(0.8 / raw.kappa_sq);
        const Dataset data(std::move(x), raw.outputs);
        const double eta = 1.0 / data.kappa_sq;
        for (long t : {1L, 2L, 7L, 33L}) {
            const double lam = 1.0 / (eta * double(t));
            const auto iterated = gradient_descent_reference(data, eta, t);
            const auto filtered = fit_primal(data, FilterSpec::gradient(eta, 2.0), lam);
            const double diff =
                (iterated.primal_coefficients() - filtered.primal_coefficients()).norm();
            c.require(filtered.gradient_steps() == t,
                      "landweber t=" + std::to_string(t) + " realized steps");
            c.require(diff <= 1e-8,
                      "landweber t=" + std::to_string(t) + " diff=" + fmt(diff));
        }
    }
    // primal vs dual across 100 seeds
    for (unsigned seed = 0; seed < 100; ++seed) {
        std::mt19937 shape(seed + 1);
        const long n = 2 + long(shape() % 19);
        const long d = 1 + long(shape() % 20);
        const Dataset data = random_dataset(n, d, seed + 2000);
        std::uniform_real_distribution<double> ul(std::max(1.0 / double(n), 0.05), 1.0);
        const double lam = ul(shape);
        const FilterSpec filter = seed % 3 == 0   ? FilterSpec::spectral_cutoff(2.0)
                                  : seed % 3 == 1 ? FilterSpec::iterated_ridge(2)
                                                  : FilterSpec::gradient(1.0 / data.kappa_sq, 2.0);
        const auto primal = fit_primal(data, filter, lam);
        const auto dual = fit_dual(data, Kernel::linear(), filter, lam);
        const Eigen::MatrixXd queries = random_matrix(10, d, seed + 5000, 1.0);
        const double diff =
            (primal.predict_batch(queries) - dual.predict_batch(queries)).cwiseAbs().maxCoeff();
        c.require(diff <= 1e-8, "primal/dual seed " + std::to_string(seed) + " diff=" + fmt(diff));
    }
    return c;
}

// ---------------------------------------------------------------- criterion 3
Criterion criterion_bias_bounds() {
    Criterion c;
    const auto grid = log_spaced_grid(1e-3, 1.0, 30);
    std::vector<BoundCheckReport> reports;
    for (double zeta : {0.25, 0.5, 1.0}) {
        const auto model = make_model(0.5, zeta, 1.0, 500, 0.0);
        const double tau = std::max(1.0, zeta) + 1.0;
        const std::vector<double> a_list = {0.0, std::min(0.5, zeta)};
        const FilterSpec filters[] = {FilterSpec::spectral_cutoff(tau),
                                      FilterSpec::iterated_ridge(2),
                                      FilterSpec::gradient(1.0 / model.kappa_sq(), tau)};
        for (const auto& f : filters) {
            const auto rep = check_bias_bounds(model, f, grid, a_list);
            c.require(rep.pass, rep.bound_name + " max_ratio=" + fmt(rep.max_ratio));
            c.require(!rep.saturated, rep.bound_name + " unexpectedly saturated");
            reports.push_back(rep);
        }
    }
    // saturation: zeta=2 with plain ridge (tau=1) must fail at small lambda
    {
        const auto model = make_model(0.5, 2.0, 1.0, 500, 0.0);
        const auto rep =
            check_bias_bounds(model, FilterSpec::iterated_ridge(1), grid, {0.0, 0.5});
        c.require(rep.saturated, "saturation case not flagged");
        c.require(!rep.pass && rep.max_ratio > 1.0,
                  "saturation case unexpectedly passed (max_ratio=" + fmt(rep.max_ratio) + ")");
        reports.push_back(rep);
    }
    g_artifacts["bias_bounds.csv"] = io::bound_cells_csv(reports);
    return c;
}

// Criterion 3 has no sampling; its artifact is still rerun for determinism.
std::string bias_bounds_artifact() {
    const auto grid = log_spaced_grid(1e-3, 1.0, 30);
    std::vector<BoundCheckReport> reports;
    for (double zeta : {0.25, 0.5, 1.0}) {
        const auto model = make_model(0.5, zeta, 1.0, 500, 0.0);
        const double tau = std::max(1.0, zeta) + 1.0;
        const std::vector<double> a_list = {0.0, std::min(0.5, zeta)};
        reports.push_back(check_bias_bounds(model, FilterSpec::spectral_cutoff(tau), grid, a_list));
        reports.push_back(check_bias_bounds(model, FilterSpec::iterated_ridge(2), grid, a_list));
        reports.push_back(check_bias_bounds(
            model, FilterSpec::gradient(1.0 / model.kappa_sq(), tau), grid, a_list));
    }
    const auto model = make_model(0.5, 2.0, 1.0, 500, 0.0);
    reports.push_back(check_bias_bounds(model, FilterSpec::iterated_ridge(1), grid, {0.0, 0.5}));
    return io::bound_cells_csv(reports);
}

// ---------------------------------------------------------------- criterion 4
std::map<std::string, std::string> concentration_artifacts(int threads) {
    const auto model = make_model(0.5, 1.0, 1.0, 200, 0.0);
    std::map<std::string, std::string> art;
    std::string csv_all;
    for (long n : {100L, 400L, 1600L}) {
        const auto errors = concentration_errors(model, n, 500, kSeedConcentration + n, threads);
        const std::string csv = io::concentration_csv(n, errors);
        csv_all += csv_all.empty() ? csv : csv.substr(csv.find('\n') + 1);
    }
    art["concentration.csv"] = csv_all;
    return art;
}

Criterion criterion_concentration() {
    Criterion c;
    const auto model = make_model(0.5, 1.0, 1.0, 200, 0.0);
    for (long n : {100L, 400L, 1600L}) {
        const auto errors =
            concentration_errors(model, n, 500, kSeedConcentration + n, kRunThreads);
        for (double delta : {0.05, 0.1}) {
            const auto rep =
                evaluate_concentration(errors, model.kappa_sq(), n, delta, kSeedConcentration + n);
            c.require(rep.pass, "n=" + std::to_string(n) + " delta=" + fmt(delta) +
                                    " fraction=" + fmt(rep.fraction_within));
        }
    }
    for (auto& [name, bytes] : concentration_artifacts(kRunThreads)) g_artifacts[name] = bytes;
    return c;
}

// ---------------------------------------------------------------- criterion 5
ExperimentConfig rates_config(double gamma, int trials, std::uint64_t seed, int threads) {
    ExperimentConfig cfg;
    cfg.model = make_model(gamma, 1.0, 1.0, 2000, 0.3);
    cfg.filter = FilterSpec::iterated_ridge(2);
    cfg.n_grid = {64, 128, 256, 512, 1024, 2048, 4096};
    cfg.trials = trials;
    cfg.rule = LambdaRule::corollary();
    cfg.master_seed = seed;
    cfg.threads = threads;
    return cfg;
}

std::map<std::string, std::string> rates_artifacts(int threads) {
    const auto reports =
        run_rate_experiment_multi(rates_config(0.5, 50, kSeedRates, threads), {0.0, 0.5});
    return {{"rates_a0.csv", io::rate_report_csv(reports[0])},
            {"rates_a05.csv", io::rate_report_csv(reports[1])}};
}

Criterion criterion_rate_reproduction() {
    Criterion c;
    const auto cfg = rates_config(0.5, 50, kSeedRates, kRunThreads);
    const auto reports = run_rate_experiment_multi(cfg, {0.0, 0.5});
    c.require(reports[0].theoretical == 0.4, "theoretical exponent (a=0)");
    c.require(reports[0].slope.has_value(), "slope missing (a=0)");
    if (reports[0].slope) {
        const double s = reports[0].slope->slope;
        c.require(std::abs(s - 0.4) <= 0.1, "a=0 slope " + fmt(s) + " not within 0.4 +- 0.1");
        c.detail += "slope(a=0)=" + fmt(s) + " ";
    }
    c.require(reports[1].theoretical == 0.2, "theoretical exponent (a=1/2)");
    if (reports[1].slope) {
        const double s = reports[1].slope->slope;
        c.require(std::abs(s - 0.2) <= 0.1, "a=1/2 slope " + fmt(s) + " not within 0.2 +- 0.1");
        c.detail += "slope(a=1/2)=" + fmt(s);
    } else {
        c.require(false, "slope missing (a=1/2)");
    }
    g_artifacts["rates_a0.csv"] = io::rate_report_csv(reports[0]);
    g_artifacts["rates_a05.csv"] = io::rate_report_csv(reports[1]);
    return c;
}

// ---------------------------------------------------------------- criterion 6
std::map<std::string, std::string> ordering_artifacts(int threads, std::vector<double>* slopes) {
    std::map<std::string, std::string> art;
    if (slopes) slopes->clear();
    int idx = 0;
    for (double gamma : {0.25, 0.5, 1.0}) {
        const auto rep =
            run_rate_experiment(rates_config(gamma, 30, kSeedOrdering + idx, threads));
        if (slopes) slopes->push_back(rep.slope ? rep.slope->slope : -1.0);
        art["rates_gamma" + std::to_string(idx) + ".csv"] = io::rate_report_csv(rep);
        ++idx;
    }
    return art;
}

Criterion criterion_exponent_ordering() {
    Criterion c;
    std::vector<double> slopes;
    auto art = ordering_artifacts(kRunThreads, &slopes);
    for (auto& [name, bytes] : art) g_artifacts[name] = bytes;
    c.detail = "slopes gamma={0.25,0.5,1.0}: " + fmt(slopes[0]) + ", " + fmt(slopes[1]) + ", " +
               fmt(slopes[2]);
    c.require(slopes[0] > 0 && slopes[1] > 0 && slopes[2] > 0, "missing slope");
    c.require(slopes[0] >= slopes[1], "slope(0.25) < slope(0.5)");
    c.require(slopes[1] >= slopes[2], "slope(0.5) < slope(1.0)");
    return c;
}

// ---------------------------------------------------------------- criterion 7
std::map<std::string, std::string> sweep_artifacts(int threads, SweepReport* noisy_out,
                                                   SweepReport* quiet_out) {
    const auto model = make_model(0.5, 1.0, 1.0, 2000, 0.3);
    const auto grid = log_spaced_grid(1.0 / 1024.0, 1.0, 20);
    const auto noisy = run_lambda_sweep(model, FilterSpec::iterated_ridge(2), 1024, grid, 0.0,
                                        15, kSeedSweep, threads);
    const auto quiet = run_lambda_sweep(model.with_noise(0.0), FilterSpec::iterated_ridge(2),
                                        1024, grid, 0.0, 15, kSeedSweep, threads);
    if (noisy_out) *noisy_out = noisy;
    if (quiet_out) *quiet_out = quiet;
    return {{"sweep_noisy.csv", io::sweep_report_csv(noisy)},
            {"sweep_noiseless.csv", io::sweep_report_csv(quiet)}};
}

Criterion criterion_sweep_ushape() {
    Criterion c;
    SweepReport noisy, quiet;
    auto art = sweep_artifacts(kRunThreads, &noisy, &quiet);
    for (auto& [name, bytes] : art) g_artifacts[name] = bytes;
    c.require(noisy.interior_argmin, "argmin not strictly inside the grid (index " +
                                         std::to_string(noisy.argmin_index) + ")");
    c.require(noisy.ushape, "no U-shape witness");
    c.require(quiet.nondecreasing_after_first,
              "noiseless sweep not non-decreasing beyond the smallest lambda");
    c.detail = "argmin lambda=" +
               fmt(noisy.points[std::size_t(noisy.argmin_index)].lambda);
    return c;
}

// ---------------------------------------------------------------- criterion 8
Criterion criterion_determinism() {
    Criterion c;
    std::map<std::string, std::string> rerun;
    rerun["bias_bounds.csv"] = bias_bounds_artifact();
    for (auto& [name, bytes] : concentration_artifacts(1)) rerun[name] = bytes;
    for (auto& [name, bytes] : rates_artifacts(1)) rerun[name] = bytes;
    for (auto& [name, bytes] : ordering_artifacts(1, nullptr)) rerun[name] = bytes;
    for (auto& [name, bytes] : sweep_artifacts(1, nullptr, nullptr)) rerun[name] = bytes;
    for (const auto& [name, bytes] : rerun) {
        auto it = g_artifacts.find(name);
        c.require(it != g_artifacts.end(), name + " missing from first run");
        if (it != g_artifacts.end())
            c.require(it->second == bytes, name + " differs between thread counts 1 and 8");
    }
    c.detail = std::to_string(rerun.size()) + " artifacts compared";
    return c;
}

struct Entry {
    int id;
    const char* name;
    double budget_seconds;
    Criterion (*fn)();
};

} // namespace

int main() {
    const Entry entries[] = {
        {1, "filter axioms with family constants", 10.0, criterion_filter_axioms},
        {2, "estimator equivalences (ridge solve, Landweber, primal/dual)", 30.0,
         criterion_estimator_equivalences},
        {3, "true-bias bound with saturation counterexample", 60.0, criterion_bias_bounds},
        {4, "operator concentration frequency", 120.0, criterion_concentration},
        {5, "rate reproduction (slopes 0.4 and 0.2)", 600.0, criterion_rate_reproduction},
        {6, "exponent ordering across gamma", 900.0, criterion_exponent_ordering},
        {7, "lambda-sweep U-shape and noiseless monotonicity", 120.0, criterion_sweep_ushape},
        {8, "byte-identical CSV artifacts at thread counts 1 and 8", 0.0,
         criterion_determinism},
    };

    bool all_pass = true;
    for (const auto& e : entries) {
        const auto t0 = clock_type::now();
        Criterion c;
        try {
            c = e.fn();
        } catch (const std::exception& ex) {
            c.pass = false;
            c.detail = std::string("exception: ") + ex.what();
        }
        const double secs = std::chrono::duration<double>(clock_type::now() - t0).count();
        if (e.budget_seconds > 0.0 && secs >= e.budget_seconds) {
            c.pass = false;
            c.detail += (c.detail.empty() ? "" : "; ") + std::string("runtime ") + fmt(secs) +
                        " s over budget " + fmt(e.budget_seconds) + " s";
        }
        std::printf("[%s] criterion %d: %s (%.1f s)%s%s\n", c.pass ? "PASS" : "FAIL", e.id,
                    e.name, secs, c.detail.empty() ? "" : " -- ", c.detail.c_str());
        std::fflush(stdout);
        all_pass = all_pass && c.pass;
    }

    // keep the first-run artifacts around for inspection
    try {
        std::filesystem::create_directories("acceptance_out");
        for (const auto& [name, bytes] : g_artifacts)
            io::write_file((std::filesystem::path("acceptance_out") / name).string(), bytes);
    } catch (const std::exception& ex) {
        std::fprintf(stderr, "artifact write failed: %s\n", ex.what());
    }
    return all_pass ? 0 : 1;
}
