#pragma once

#include <cstdint>
#include <string>

#include "specreg/estimator.hpp"
#include "specreg/filters.hpp"

namespace specreg {

// Diagonal sequence-space model with every population quantity in closed
// form. Construction:
//
//   spectrum        sigma_j = j^(-1/gamma), j = 1..d   (decay gamma in (0,1])
//   source          g0 with |g0| <= R; target coefficients c_j = sigma_j^zeta g0_j
//   inputs          x_ij = s_ij sqrt(sigma_j), s_ij independent uniform signs
//   outputs         y_i = sum_j c_j s_ij + eps_i,  eps_i ~ N(0, noise_sd^2)
//
// The sign construction gives E[x x^T] = diag(sigma) exactly and
// |x_i|^2 = sum_j sigma_j surely, so the norm bound holds with
// kappa^2 = sum_j sigma_j (recorded as the sum of the squared stored
// coordinate scales, making the identity bit-exact). The functions
// e_j = x_j / sqrt(sigma_j) are orthonormal in L2(rho), which turns every
// weighted population norm into a finite weighted Euclidean sum.
enum class SourceProfile { FlatNormalized, Geometric };

SourceProfile source_profile_from_string(const std::string& s);
std::string to_string(SourceProfile p);

class DiagonalModel {
public:
    // gamma in (0,1], zeta >= 0, R > 0, d >= 1, noise_sd >= 0.
    // Geometric profile: g0_j proportional to ratio^j, normalized to |g0| = R.
    static DiagonalModel make(double gamma, double zeta, double R, int d, double noise_sd,
                              SourceProfile profile = SourceProfile::FlatNormalized,
                              double geometric_ratio = 0.5);

    int dim() const { return static_cast<int>(sigma_.size()); }
    double gamma() const { return gamma_; }
    double zeta() const { return zeta_; }
    double radius() const { return R_; }
    double noise_sd() const { return noise_sd_; }
    double kappa_sq() const { return kappa_sq_; }
    SourceProfile profile() const { return profile_; }

    const Eigen::VectorXd& sigma() const { return sigma_; }
    const Eigen::VectorXd& coordinate_scale() const { return sqrt_sigma_; } // sqrt(sigma_j)
    const Eigen::VectorXd& g0() const { return g0_; }
    // Expansion coefficients of the target, c_j = sigma_j^zeta g0_j.
    const Eigen::VectorXd& target_coefficients() const { return c_; }
    // Attainable representation omega*_j = c_j / sqrt(sigma_j).
    Eigen::VectorXd omega_star() const;

    // Moment-condition constants recorded with every batch: Gaussian noise
    // plus the surely bounded signal part.
    double moment_m() const { return noise_sd_; }
    double moment_q_sq() const { return 2.0 * (noise_sd_ * noise_sd_ + c_.squaredNorm()); }

    // Same model with a different noise level (noiseless reruns).
    DiagonalModel with_noise(double noise_sd) const;

private:
    DiagonalModel() = default;
    double gamma_ = 0.0, zeta_ = 0.0, R_ = 0.0, noise_sd_ = 0.0, kappa_sq_ = 0.0;
    SourceProfile profile_ = SourceProfile::FlatNormalized;
    Eigen::VectorXd sigma_, sqrt_sigma_, g0_, c_;
};

DiagonalModel make_model(double gamma, double zeta, double R, int d, double noise_sd,
                         SourceProfile profile = SourceProfile::FlatNormalized,
                         double geometric_ratio = 0.5);

struct SampleBatch {
    Eigen::MatrixXd inputs;  // n x d
    Eigen::VectorXd outputs; // n
    std::uint64_t seed = 0;
    double moment_m = 0.0;
    double moment_q_sq = 0.0;
};

// Draws n samples. Row i is generated from its own derived stream
// hash(seed, i), so batches are identical across runs and thread counts,
// and any row-blocked consumer reproduces them exactly.
SampleBatch sample(const DiagonalModel& model, long n, std::uint64_t seed);

Dataset to_dataset(SampleBatch batch);

// Population-level filtered coefficients omega_{lambda,j} = g_lambda(sigma_j) c_j sqrt(sigma_j).
Eigen::VectorXd population_estimator(const DiagonalModel& model, const FilterSpec& filter,
                                     double lambda);

// Weighted population norm of the error of a primal coefficient vector:
// sqrt( sum_j sigma_j^(-2a) (sqrt(sigma_j) omega_j - c_j)^2 ),
// i.e. the L^(-a)-weighted distance between I omega and the target.
// Requires a in [0, 1/2] and a <= zeta.
double weighted_rho_norm(const DiagonalModel& model, const Eigen::VectorXd& omega, double a);

// Effective dimension sum_j sigma_j / (sigma_j + lambda).
double effective_dimension(const DiagonalModel& model, double lambda);
double effective_dimension(const Eigen::VectorXd& eigenvalues, double lambda);

// Largest observed N(lambda) lambda^gamma over the grid; a fitted capacity
// constant, stored in reports rather than asserted.
double fit_capacity_constant(const DiagonalModel& model, const std::vector<double>& lambda_grid);

} // namespace specreg
