#include "specreg/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "specreg/linalg.hpp"
#include "specreg/parallel.hpp"
#include "specreg/rng.hpp"

namespace specreg {

namespace {
constexpr double kRelTol = 1e-9;

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size();
    if (m == 0) return 0.0;
    return m % 2 == 1 ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]);
}
} // namespace

BoundCheckReport check_bias_bounds(const DiagonalModel& model, const FilterSpec& filter,
                                   const std::vector<double>& lambda_grid,
                                   const std::vector<double>& a_list) {
    if (lambda_grid.empty() || a_list.empty())
        throw std::invalid_argument("check_bias_bounds: empty grid");
    for (double a : a_list)
        if (a > model.zeta() + 1e-15)
            throw std::invalid_argument("check_bias_bounds: a=" + std::to_string(a) +
                                        " exceeds zeta=" + std::to_string(model.zeta()));

    BoundCheckReport rep;
    rep.bound_name = "true_bias[" + filter.name() + ",zeta=" + std::to_string(model.zeta()) + "]";
    rep.grid = std::to_string(lambda_grid.size()) + " lambda x " + std::to_string(a_list.size()) +
               " a";
    rep.saturated = model.zeta() > filter.qualification();
    if (rep.saturated) {
        rep.cover_c = 1.0;
    } else {
        const auto cover = verify_qualification_covers(
            filter, IndexFunction::holder(model.zeta()), model.kappa_sq(), lambda_grid);
        rep.cover_c = cover.certified_c;
    }
    rep.c_g = filter.c_g(rep.cover_c);

    for (double lam : lambda_grid) {
        const Eigen::VectorXd omega = population_estimator(model, filter, lam);
        const double lam_real = filter.realize(lam).lambda;
        for (double a : a_list) {
            BoundCell cell;
            cell.lambda = lam;
            cell.lambda_realized = lam_real;
            cell.a = a;
            cell.observed = weighted_rho_norm(model, omega, a);
            cell.bound = rep.c_g * model.radius() * std::pow(lam_real, model.zeta() - a);
            cell.ratio = cell.observed / cell.bound;
            rep.max_ratio = std::max(rep.max_ratio, cell.ratio);
            rep.cells.push_back(cell);
        }
    }
    rep.pass = rep.max_ratio <= 1.0 + kRelTol;
    return rep;
}

BoundCheckReport check_population_norm_bound(const DiagonalModel& model, const FilterSpec& filter,
                                             const std::vector<double>& lambda_grid) {
    if (lambda_grid.empty())
        throw std::invalid_argument("check_population_norm_bound: empty grid");
    BoundCheckReport rep;
    rep.bound_name = "population_norm[" + filter.name() + "]";
    rep.grid = std::to_string(lambda_grid.size()) + " lambda";
    rep.c_g = 0.0;
    const double zeta = model.zeta();
    const double kappa = std::sqrt(model.kappa_sq());
    const double phi_k2 = std::pow(model.kappa_sq(), zeta);
    const double kpow = std::pow(kappa, -std::min(2.0 * zeta, 1.0));
    const double lam_exp = std::max(0.5 - zeta, 0.0);
    for (double lam : lambda_grid) {
        const Eigen::VectorXd omega = population_estimator(model, filter, lam);
        const double lam_real = filter.realize(lam).lambda;
        BoundCell cell;
        cell.lambda = lam;
        cell.lambda_realized = lam_real;
        cell.observed = omega.norm();
        cell.bound =
            model.radius() * filter.E() * phi_k2 * kpow * std::pow(lam_real, -lam_exp);
        cell.ratio = cell.observed / cell.bound;
        rep.max_ratio = std::max(rep.max_ratio, cell.ratio);
        rep.cells.push_back(cell);
    }
    rep.pass = rep.max_ratio <= 1.0 + kRelTol;
    return rep;
}

double concentration_bound(double kappa_sq, long n, double delta) {
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("concentration_bound: delta must lie in (0, 1)");
    if (n < 1) throw std::invalid_argument("concentration_bound: n must be >= 1");
    return 6.0 * kappa_sq / std::sqrt(static_cast<double>(n)) * std::log(2.0 / delta);
}

std::vector<double> concentration_errors(const DiagonalModel& model, long n, int trials,
                                         std::uint64_t seed, int threads) {
    if (model.dim() > 500)
        throw std::invalid_argument(
            "concentration_errors: model dimension capped at 500 for dense HS norms");
    if (trials < 100) throw std::invalid_argument("concentration_errors: need trials >= 100");
    std::vector<double> errors(static_cast<std::size_t>(trials));
    parallel_for(static_cast<std::size_t>(trials), threads, [&](std::size_t t) {
        const SampleBatch batch = sample(model, n, rng::derive_seed(seed, t));
        Eigen::MatrixXd tx =
            scaled_gram_of_columns(batch.inputs, static_cast<double>(n));
        tx.diagonal() -= model.sigma();
        errors[t] = tx.norm(); // Frobenius = Hilbert-Schmidt
    });
    return errors;
}

ConcentrationReport evaluate_concentration(const std::vector<double>& errors, double kappa_sq,
                                           long n, double delta, std::uint64_t seed) {
    ConcentrationReport rep;
    rep.n = n;
    rep.delta = delta;
    rep.trials = static_cast<int>(errors.size());
    rep.bound = concentration_bound(kappa_sq, n, delta);
    rep.seed = seed;
    long within = 0;
    for (double e : errors)
        if (e <= rep.bound) ++within;
    rep.fraction_within = static_cast<double>(within) / static_cast<double>(errors.size());
    rep.median_error = median_of(errors);
    rep.pass = rep.fraction_within >= 1.0 - delta;
    return rep;
}

ConcentrationReport check_concentration(const DiagonalModel& model, long n, int trials,
                                        double delta, std::uint64_t seed, int threads) {
    const auto errors = concentration_errors(model, n, trials, seed, threads);
    return evaluate_concentration(errors, model.kappa_sq(), n, delta, seed);
}

double empirical_effective_dim(const Eigen::VectorXd& eigenvalues, double lambda,
                               double n_scale) {
    if (!(lambda > 0.0)) throw std::invalid_argument("empirical_effective_dim: lambda must be > 0");
    if (!(n_scale > 0.0))
        throw std::invalid_argument("empirical_effective_dim: n_scale must be > 0");
    const double smax = eigenvalues.size() ? eigenvalues.maxCoeff() : 0.0;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
        double s = eigenvalues(i) / n_scale;
        if (s < 0.0) {
            if (s < -1e-10 * std::max(smax / n_scale, 1e-300))
                throw std::invalid_argument("empirical_effective_dim: negative eigenvalue " +
                                            std::to_string(eigenvalues(i)));
            s = 0.0;
        }
        acc += s / (s + lambda);
    }
    return acc;
}

} // namespace specreg
