#include "specreg/synthetic.hpp"

#include <cmath>
#include <stdexcept>

#include "specreg/rng.hpp"

namespace specreg {

SourceProfile source_profile_from_string(const std::string& s) {
    if (s == "flat_normalized") return SourceProfile::FlatNormalized;
    if (s == "geometric") return SourceProfile::Geometric;
    throw std::invalid_argument("unknown source profile '" + s +
                                "' (expected flat_normalized or geometric)");
}

std::string to_string(SourceProfile p) {
    return p == SourceProfile::FlatNormalized ? "flat_normalized" : "geometric";
}

DiagonalModel DiagonalModel::make(double gamma, double zeta, double R, int d, double noise_sd,
                                  SourceProfile profile, double geometric_ratio) {
    if (!(gamma > 0.0 && gamma <= 1.0))
        throw std::invalid_argument("DiagonalModel: gamma must lie in (0, 1]");
    if (!(zeta >= 0.0)) throw std::invalid_argument("DiagonalModel: zeta must be >= 0");
    if (!(R > 0.0)) throw std::invalid_argument("DiagonalModel: R must be > 0");
    if (d < 1) throw std::invalid_argument("DiagonalModel: d must be >= 1");
    if (!(noise_sd >= 0.0)) throw std::invalid_argument("DiagonalModel: noise_sd must be >= 0");
    if (profile == SourceProfile::Geometric && !(geometric_ratio > 0.0 && geometric_ratio < 1.0))
        throw std::invalid_argument("DiagonalModel: geometric ratio must lie in (0, 1)");

    DiagonalModel m;
    m.gamma_ = gamma;
    m.zeta_ = zeta;
    m.R_ = R;
    m.noise_sd_ = noise_sd;
    m.profile_ = profile;
    m.sqrt_sigma_.resize(d);
    m.sigma_.resize(d);
    // sigma_j is stored as the square of the coordinate scale so that
    // |x_i|^2 = sum_j sigma_j holds bit-exactly for every sampled row.
    // kappa_sq accumulates in plain index order; sampled rows sum their
    // squared coordinates in the same order, making |x|^2 == kappa_sq exact.
    m.kappa_sq_ = 0.0;
    for (int j = 0; j < d; ++j) {
        const double root = std::pow(static_cast<double>(j + 1), -0.5 / gamma);
        m.sqrt_sigma_(j) = root;
        m.sigma_(j) = root * root;
        m.kappa_sq_ += m.sigma_(j);
    }

    m.g0_.resize(d);
    if (profile == SourceProfile::FlatNormalized) {
        m.g0_.setConstant(R / std::sqrt(static_cast<double>(d)));
    } else {
        for (int j = 0; j < d; ++j)
            m.g0_(j) = std::pow(geometric_ratio, static_cast<double>(j + 1));
        m.g0_ *= R / m.g0_.norm();
    }

    m.c_.resize(d);
    for (int j = 0; j < d; ++j) m.c_(j) = std::pow(m.sigma_(j), zeta) * m.g0_(j);
    return m;
}

DiagonalModel make_model(double gamma, double zeta, double R, int d, double noise_sd,
                         SourceProfile profile, double geometric_ratio) {
    return DiagonalModel::make(gamma, zeta, R, d, noise_sd, profile, geometric_ratio);
}

Eigen::VectorXd DiagonalModel::omega_star() const {
    return c_.cwiseQuotient(sqrt_sigma_);
}

DiagonalModel DiagonalModel::with_noise(double noise_sd) const {
    DiagonalModel m = *this;
    if (!(noise_sd >= 0.0)) throw std::invalid_argument("with_noise: noise_sd must be >= 0");
    m.noise_sd_ = noise_sd;
    return m;
}

SampleBatch sample(const DiagonalModel& model, long n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample: n must be >= 1");
    const int d = model.dim();
    SampleBatch batch;
    batch.seed = seed;
    batch.moment_m = model.moment_m();
    batch.moment_q_sq = model.moment_q_sq();
    batch.inputs.resize(n, d);
    batch.outputs.resize(n);
    const Eigen::VectorXd& scale = model.coordinate_scale();
    const Eigen::VectorXd& c = model.target_coefficients();
    const double noise_sd = model.noise_sd();
    for (long i = 0; i < n; ++i) {
        rng::SignStream signs(rng::derive_seed(seed, static_cast<std::uint64_t>(i)));
        double signal = 0.0;
        for (int j = 0; j < d; ++j) {
            const double s = signs.next_sign();
            batch.inputs(i, j) = s * scale(j);
            signal += c(j) * s;
        }
        const double eps = noise_sd > 0.0 ? noise_sd * rng::gaussian(signs.engine()) : 0.0;
        batch.outputs(i) = signal + eps;
    }
    return batch;
}

Dataset to_dataset(SampleBatch batch) {
    return Dataset(std::move(batch.inputs), std::move(batch.outputs));
}

Eigen::VectorXd population_estimator(const DiagonalModel& model, const FilterSpec& filter,
                                     double lambda) {
    if (!(lambda > 0.0 && lambda <= 1.0))
        throw std::invalid_argument("population_estimator: lambda must lie in (0, 1]");
    const int d = model.dim();
    Eigen::VectorXd omega(d);
    for (int j = 0; j < d; ++j)
        omega(j) = eval_g(filter, model.sigma()(j), lambda) * model.target_coefficients()(j) *
                   model.coordinate_scale()(j);
    return omega;
}

double weighted_rho_norm(const DiagonalModel& model, const Eigen::VectorXd& omega, double a) {
    if (!(a >= 0.0 && a <= 0.5))
        throw std::invalid_argument("weighted_rho_norm: a must lie in [0, 1/2]");
    if (a > model.zeta() + 1e-15)
        throw std::invalid_argument("weighted_rho_norm: a=" + std::to_string(a) +
                                    " exceeds the source exponent zeta=" +
                                    std::to_string(model.zeta()));
    if (omega.size() != model.dim())
        throw std::invalid_argument("weighted_rho_norm: coefficient dimension mismatch");
    double s = 0.0;
    for (int j = 0; j < model.dim(); ++j) {
        const double resid = model.coordinate_scale()(j) * omega(j) -
                             model.target_coefficients()(j);
        const double w = a == 0.0 ? 1.0 : std::pow(model.sigma()(j), -2.0 * a);
        s += w * resid * resid;
    }
    return std::sqrt(s);
}

double effective_dimension(const DiagonalModel& model, double lambda) {
    return effective_dimension(model.sigma(), lambda);
}

double effective_dimension(const Eigen::VectorXd& eigenvalues, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("effective_dimension: lambda must be > 0");
    double s = 0.0;
    for (Eigen::Index j = 0; j < eigenvalues.size(); ++j) {
        const double v = eigenvalues(j);
        if (v < 0.0) throw std::invalid_argument("effective_dimension: negative eigenvalue");
        s += v / (v + lambda);
    }
    return s;
}

double fit_capacity_constant(const DiagonalModel& model, const std::vector<double>& lambda_grid) {
    if (lambda_grid.empty()) throw std::invalid_argument("fit_capacity_constant: empty grid");
    double c = 0.0;
    for (double lam : lambda_grid)
        c = std::max(c, effective_dimension(model, lam) * std::pow(lam, model.gamma()));
    return c;
}

} // namespace specreg
