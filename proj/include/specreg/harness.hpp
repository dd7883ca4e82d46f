#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "specreg/synthetic.hpp"

namespace specreg {

// Regularization schedule lambda(n).
struct LambdaRule {
    enum class Kind { Corollary, Theta, Fixed };
    Kind kind = Kind::Corollary;
    double value = 0.0; // theta for Theta, lambda for Fixed

    // lambda = n^(-1 / (1 v (2 zeta + gamma)))
    static LambdaRule corollary();
    // lambda = n^(theta - 1), theta in [0, 1]
    static LambdaRule theta(double theta);
    static LambdaRule fixed(double lambda);

    double lambda_for(long n, double zeta, double gamma) const;
    std::string describe() const;
};

struct ExperimentConfig {
    DiagonalModel model = DiagonalModel::make(0.5, 1.0, 1.0, 1, 0.0);
    FilterSpec filter = FilterSpec::iterated_ridge(2);
    double a = 0.0;
    std::vector<long> n_grid;
    int trials = 10;
    LambdaRule rule = LambdaRule::corollary();
    std::uint64_t master_seed = 0;
    int threads = 1;

    // n_grid strictly increasing with >= 3 entries, trials >= 10, and the
    // schedule must produce lambda in [1/n, 1] for every n (offending n are
    // listed in the error).
    void validate() const;
};

struct SlopeFit {
    double slope = 0.0;  // positive decay exponent (negated OLS coefficient)
    double stderr_slope = 0.0;
    double intercept = 0.0;
    int points_used = 0;
};

// OLS of log(error) on log(n); needs >= 3 pairs and strictly positive
// errors (zero error means the exact-recovery regime; use the noiseless
// branch instead of a slope).
SlopeFit fit_loglog_slope(const std::vector<std::pair<double, double>>& pairs);

// (zeta - a)/(2 zeta + gamma) when 2 zeta + gamma > 1, else zeta - a with
// the logarithmic-factor flag set.
double theoretical_exponent(double zeta, double gamma, double a, bool* log_factor_regime = nullptr);

struct RatePoint {
    long n = 0;
    double lambda = 0.0;
    double lambda_realized = 0.0;
    long gradient_steps = 0;
    double median = 0.0;
    double q1 = 0.0; // 25th percentile
    double q3 = 0.0; // 75th percentile
    std::vector<double> errors; // indexed by trial
};

struct RateReport {
    double a = 0.0;
    double theoretical = 0.0;
    bool log_factor_regime = false;
    bool exact_recovery = false; // some median vanished; slope not fitted
    std::optional<SlopeFit> slope; // fitted on the largest ceil(2/3) of n_grid
    std::vector<RatePoint> points;
    int model_dim = 0;
    bool truncated_source = false; // zeta < 1/2: finite-d approximation note
    std::string filter;
    std::uint64_t master_seed = 0;
};

// Rate experiment: for each n and trial, sample, fit through the estimator,
// and evaluate the exact weighted population norm of the error against the
// target. Deterministic for a fixed master seed at any thread count.
RateReport run_rate_experiment(const ExperimentConfig& config);

// Same sampling and fits, errors evaluated for several norm exponents at
// once (the fitted coefficients do not depend on a).
std::vector<RateReport> run_rate_experiment_multi(const ExperimentConfig& config,
                                                  const std::vector<double>& a_values);

struct SweepPoint {
    double lambda = 0.0;
    double lambda_realized = 0.0;
    double median = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
    std::vector<double> errors;
};

struct SweepReport {
    long n = 0;
    double a = 0.0;
    std::vector<SweepPoint> points;      // in lambda_grid order
    int argmin_index = 0;
    bool ushape = false;                 // median at argmin <= both endpoints
    bool interior_argmin = false;
    bool nondecreasing_after_first = false; // medians non-decreasing from the 2nd point on
    std::uint64_t seed = 0;
};

// Median error against lambda for fixed n. Each trial reuses one
// eigendecomposition across the whole grid.
SweepReport run_lambda_sweep(const DiagonalModel& model, const FilterSpec& filter, long n,
                             const std::vector<double>& lambda_grid, double a, int trials,
                             std::uint64_t seed, int threads = 1);

std::vector<double> log_spaced_grid(double lo, double hi, int count);

} // namespace specreg
