#include "specreg/harness.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "specreg/parallel.hpp"
#include "specreg/rng.hpp"

namespace specreg {

namespace {

struct Quartiles {
    double q1, median, q3;
};

// Linear-interpolation quantile on a sorted copy.
Quartiles quartiles_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    auto q = [&](double p) {
        const double idx = p * static_cast<double>(v.size() - 1);
        const std::size_t lo = static_cast<std::size_t>(idx);
        const std::size_t hi = std::min(lo + 1, v.size() - 1);
        const double frac = idx - static_cast<double>(lo);
        return v[lo] * (1.0 - frac) + v[hi] * frac;
    };
    return {q(0.25), q(0.5), q(0.75)};
}

} // namespace

LambdaRule LambdaRule::corollary() { return LambdaRule{Kind::Corollary, 0.0}; }

LambdaRule LambdaRule::theta(double theta) {
    if (!(theta >= 0.0 && theta <= 1.0))
        throw std::invalid_argument("LambdaRule::theta: theta=" + std::to_string(theta) +
                                    " outside [0, 1]");
    return LambdaRule{Kind::Theta, theta};
}

LambdaRule LambdaRule::fixed(double lambda) {
    if (!(lambda > 0.0 && lambda <= 1.0))
        throw std::invalid_argument("LambdaRule::fixed: lambda must lie in (0, 1]");
    return LambdaRule{Kind::Fixed, lambda};
}

double LambdaRule::lambda_for(long n, double zeta, double gamma) const {
    if (n < 1) throw std::invalid_argument("LambdaRule: n must be >= 1");
    switch (kind) {
        case Kind::Corollary: {
            const double denom = std::max(1.0, 2.0 * zeta + gamma);
            return std::pow(static_cast<double>(n), -1.0 / denom);
        }
        case Kind::Theta:
            return std::pow(static_cast<double>(n), value - 1.0);
        case Kind::Fixed:
            return value;
    }
    throw std::logic_error("LambdaRule: unknown kind");
}

std::string LambdaRule::describe() const {
    switch (kind) {
        case Kind::Corollary: return "corollary";
        case Kind::Theta: return "theta(" + std::to_string(value) + ")";
        case Kind::Fixed: return "fixed(" + std::to_string(value) + ")";
    }
    return "?";
}

void ExperimentConfig::validate() const {
    if (n_grid.size() < 3)
        throw std::invalid_argument("ExperimentConfig: slope fitting needs at least 3 n values, got " +
                                    std::to_string(n_grid.size()));
    for (std::size_t i = 0; i + 1 < n_grid.size(); ++i)
        if (n_grid[i + 1] <= n_grid[i])
            throw std::invalid_argument("ExperimentConfig: n_grid must be strictly increasing");
    if (n_grid.front() < 1) throw std::invalid_argument("ExperimentConfig: n must be >= 1");
    if (trials < 10) throw std::invalid_argument("ExperimentConfig: trials must be >= 10");
    if (threads < 1) throw std::invalid_argument("ExperimentConfig: threads must be >= 1");
    std::string offending;
    for (long n : n_grid) {
        const double lam = rule.lambda_for(n, model.zeta(), model.gamma());
        if (!(lam >= 1.0 / static_cast<double>(n) && lam <= 1.0)) {
            if (!offending.empty()) offending += ", ";
            offending += std::to_string(n);
        }
    }
    if (!offending.empty())
        throw std::invalid_argument("ExperimentConfig: lambda rule " + rule.describe() +
                                    " leaves [1/n, 1] for n in {" + offending + "}");
}

SlopeFit fit_loglog_slope(const std::vector<std::pair<double, double>>& pairs) {
    if (pairs.size() < 3)
        throw std::invalid_argument("fit_loglog_slope: need at least 3 (n, error) pairs");
    for (const auto& [n, err] : pairs)
        if (!(err > 0.0))
            throw std::invalid_argument(
                "fit_loglog_slope: error " + std::to_string(err) +
                " is not positive; this looks like the exact-recovery regime, use the "
                "noiseless branch");
    const std::size_t m = pairs.size();
    double sx = 0.0, sy = 0.0;
    std::vector<double> xs(m), ys(m);
    for (std::size_t i = 0; i < m; ++i) {
        xs[i] = std::log(pairs[i].first);
        ys[i] = std::log(pairs[i].second);
        sx += xs[i];
        sy += ys[i];
    }
    const double mx = sx / static_cast<double>(m), my = sy / static_cast<double>(m);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_loglog_slope: degenerate n values");
    const double beta = sxy / sxx;
    double rss = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double r = ys[i] - my - beta * (xs[i] - mx);
        rss += r * r;
    }
    SlopeFit fit;
    fit.slope = -beta;
    fit.intercept = my - beta * mx;
    fit.points_used = static_cast<int>(m);
    fit.stderr_slope =
        m > 2 ? std::sqrt(rss / static_cast<double>(m - 2) / sxx) : 0.0;
    return fit;
}

double theoretical_exponent(double zeta, double gamma, double a, bool* log_factor_regime) {
    const double s = 2.0 * zeta + gamma;
    if (log_factor_regime) *log_factor_regime = s <= 1.0;
    if (s > 1.0) return (zeta - a) / s;
    return zeta - a;
}

namespace {

// One fitted coefficient vector per (n, trial), evaluated under every
// requested norm exponent. Slot layout keeps aggregation order-free.
struct TrialTask {
    std::size_t n_index;
    int trial;
};

std::vector<RateReport> run_rate_impl(const ExperimentConfig& config,
                                      const std::vector<double>& a_values) {
    config.validate();
    if (a_values.empty()) throw std::invalid_argument("run_rate_experiment: no norm exponents");
    for (double a : a_values)
        if (a > config.model.zeta() + 1e-15 || a < 0.0 || a > 0.5)
            throw std::invalid_argument("run_rate_experiment: a=" + std::to_string(a) +
                                        " must lie in [0, min(1/2, zeta)]");

    const std::size_t num_n = config.n_grid.size();
    const std::size_t num_a = a_values.size();
    const std::size_t trials = static_cast<std::size_t>(config.trials);
    std::vector<double> errors(num_n * trials * num_a);

    std::vector<TrialTask> tasks;
    tasks.reserve(num_n * trials);
    // Large-n tasks first: keeps the tail of a parallel run short.
    for (std::size_t ni = num_n; ni-- > 0;)
        for (int t = 0; t < config.trials; ++t) tasks.push_back({ni, t});

    parallel_for(tasks.size(), config.threads, [&](std::size_t k) {
        const TrialTask task = tasks[k];
        const long n = config.n_grid[task.n_index];
        const double lam = config.rule.lambda_for(n, config.model.zeta(), config.model.gamma());
        const std::uint64_t task_index =
            static_cast<std::uint64_t>(task.n_index) * trials + static_cast<std::uint64_t>(task.trial);
        const std::uint64_t seed = rng::derive_seed(config.master_seed, task_index);
        Dataset data = to_dataset(sample(config.model, n, seed));
        const SpectralEstimator est = fit(data, config.filter, lam);
        const Eigen::VectorXd omega = est.primal_coefficients();
        for (std::size_t ai = 0; ai < num_a; ++ai)
            errors[(task.n_index * trials + static_cast<std::size_t>(task.trial)) * num_a + ai] =
                weighted_rho_norm(config.model, omega, a_values[ai]);
    });

    std::vector<RateReport> reports(num_a);
    for (std::size_t ai = 0; ai < num_a; ++ai) {
        RateReport& rep = reports[ai];
        rep.a = a_values[ai];
        rep.theoretical = theoretical_exponent(config.model.zeta(), config.model.gamma(),
                                               a_values[ai], &rep.log_factor_regime);
        rep.model_dim = config.model.dim();
        rep.truncated_source = config.model.zeta() < 0.5;
        rep.filter = config.filter.name();
        rep.master_seed = config.master_seed;
        for (std::size_t ni = 0; ni < num_n; ++ni) {
            RatePoint pt;
            pt.n = config.n_grid[ni];
            pt.lambda =
                config.rule.lambda_for(pt.n, config.model.zeta(), config.model.gamma());
            const auto realized = config.filter.realize(pt.lambda);
            pt.lambda_realized = realized.lambda;
            pt.gradient_steps = realized.steps;
            pt.errors.resize(trials);
            for (std::size_t t = 0; t < trials; ++t)
                pt.errors[t] = errors[(ni * trials + t) * num_a + ai];
            const auto q = quartiles_of(pt.errors);
            pt.q1 = q.q1;
            pt.median = q.median;
            pt.q3 = q.q3;
            rep.points.push_back(std::move(pt));
        }
        rep.exact_recovery = false;
        for (const auto& pt : rep.points)
            if (pt.median < 1e-12) rep.exact_recovery = true;
        if (!rep.exact_recovery) {
            // Slope on the largest ceil(2/3) of the n grid (>= 3 points):
            // the small-n prefix is pre-asymptotic.
            std::size_t k = (2 * num_n + 2) / 3;
            k = std::max<std::size_t>(k, 3);
            k = std::min(k, num_n);
            std::vector<std::pair<double, double>> pts;
            for (std::size_t ni = num_n - k; ni < num_n; ++ni)
                pts.emplace_back(static_cast<double>(rep.points[ni].n), rep.points[ni].median);
            rep.slope = fit_loglog_slope(pts);
        }
    }
    return reports;
}

} // namespace

RateReport run_rate_experiment(const ExperimentConfig& config) {
    return run_rate_impl(config, {config.a}).front();
}

std::vector<RateReport> run_rate_experiment_multi(const ExperimentConfig& config,
                                                  const std::vector<double>& a_values) {
    return run_rate_impl(config, a_values);
}

SweepReport run_lambda_sweep(const DiagonalModel& model, const FilterSpec& filter, long n,
                             const std::vector<double>& lambda_grid, double a, int trials,
                             std::uint64_t seed, int threads) {
    if (lambda_grid.size() < 2) throw std::invalid_argument("run_lambda_sweep: need >= 2 lambdas");
    for (double lam : lambda_grid)
        if (!(lam >= 1.0 / static_cast<double>(n) && lam <= 1.0))
            throw std::invalid_argument("run_lambda_sweep: lambda=" + std::to_string(lam) +
                                        " outside [1/n, 1]");
    if (trials < 1) throw std::invalid_argument("run_lambda_sweep: trials must be >= 1");

    const std::size_t num_l = lambda_grid.size();
    std::vector<double> errors(static_cast<std::size_t>(trials) * num_l);
    parallel_for(static_cast<std::size_t>(trials), threads, [&](std::size_t t) {
        Dataset data = to_dataset(sample(model, n, rng::derive_seed(seed, t)));
        // One eigendecomposition per trial, reused across the lambda grid.
        if (data.dim() <= data.n()) {
            const PrimalSystem sys = build_primal_system(data);
            for (std::size_t li = 0; li < num_l; ++li) {
                const Eigen::VectorXd omega = solve_primal(sys, filter, lambda_grid[li]);
                errors[t * num_l + li] = weighted_rho_norm(model, omega, a);
            }
        } else {
            const DualSystem sys = build_dual_system(data, Kernel::linear());
            for (std::size_t li = 0; li < num_l; ++li) {
                const Eigen::VectorXd alpha = solve_dual_alpha(sys, filter, lambda_grid[li]);
                const Eigen::VectorXd omega = data.inputs.transpose() * alpha;
                errors[t * num_l + li] = weighted_rho_norm(model, omega, a);
            }
        }
    });

    SweepReport rep;
    rep.n = n;
    rep.a = a;
    rep.seed = seed;
    for (std::size_t li = 0; li < num_l; ++li) {
        SweepPoint pt;
        pt.lambda = lambda_grid[li];
        pt.lambda_realized = filter.realize(pt.lambda).lambda;
        pt.errors.resize(static_cast<std::size_t>(trials));
        for (int t = 0; t < trials; ++t)
            pt.errors[static_cast<std::size_t>(t)] = errors[static_cast<std::size_t>(t) * num_l + li];
        const auto q = quartiles_of(pt.errors);
        pt.q1 = q.q1;
        pt.median = q.median;
        pt.q3 = q.q3;
        rep.points.push_back(std::move(pt));
    }
    rep.argmin_index = 0;
    for (std::size_t li = 1; li < num_l; ++li)
        if (rep.points[li].median < rep.points[static_cast<std::size_t>(rep.argmin_index)].median)
            rep.argmin_index = static_cast<int>(li);
    const double at_min = rep.points[static_cast<std::size_t>(rep.argmin_index)].median;
    rep.ushape = at_min <= rep.points.front().median && at_min <= rep.points.back().median;
    rep.interior_argmin =
        rep.argmin_index > 0 && rep.argmin_index + 1 < static_cast<int>(num_l);
    rep.nondecreasing_after_first = true;
    for (std::size_t li = 2; li < num_l; ++li)
        if (rep.points[li].median < rep.points[li - 1].median) rep.nondecreasing_after_first = false;
    return rep;
}

std::vector<double> log_spaced_grid(double lo, double hi, int count) {
    if (count < 2 || !(lo > 0.0) || !(hi > lo))
        throw std::invalid_argument("log_spaced_grid: need 0 < lo < hi and count >= 2");
    std::vector<double> g(static_cast<std::size_t>(count));
    const double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < count; ++i)
        g[static_cast<std::size_t>(i)] =
            std::exp(llo + (lhi - llo) * static_cast<double>(i) / (count - 1));
    g.front() = lo;
    g.back() = hi;
    return g;
}

} // namespace specreg
