#pragma once

#include <optional>
#include <string>

#include "specreg/filters.hpp"
#include "specreg/linalg.hpp"

namespace specreg {

// Training sample: inputs as rows of an (n x d) matrix, one real output per
// row. The squared-norm bound kappa^2 = max_i |x_i|^2 is recorded at
// construction; it feeds the gradient-filter stability check.
struct Dataset {
    Eigen::MatrixXd inputs;
    Eigen::VectorXd outputs;
    double kappa_sq = 0.0;

    Dataset(Eigen::MatrixXd x, Eigen::VectorXd y);
    long n() const { return inputs.rows(); }
    long dim() const { return inputs.cols(); }
};

// CSV interchange: one row per sample, feature columns then the label
// column; a header row is detected and skipped on load.
Dataset load_dataset_csv(const std::string& path);
std::string dataset_to_csv(const Dataset& data);

struct Kernel {
    enum class Type { Linear, Gaussian, Custom };
    Type type = Type::Linear;
    double width = 0.0;
    KernelFn fn;

    static Kernel linear();
    static Kernel gaussian(double width);
    static Kernel custom(KernelFn f);
    double operator()(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;
};

// Fitted spectral estimator. Primal mode stores the coefficient vector
// omega (dimension d); dual mode stores alpha (dimension n) together with
// the training inputs and kernel needed for prediction.
class SpectralEstimator {
public:
    enum class Mode { Primal, Dual };

    Mode mode() const { return mode_; }
    const FilterSpec& filter() const { return filter_; }
    double lambda() const { return lambda_realized_; }           // realized value
    double lambda_requested() const { return lambda_requested_; }
    long gradient_steps() const { return steps_; }               // 0 unless gradient filter

    // Primal coefficient vector. Available in primal mode, and in dual mode
    // when the kernel is linear (omega = X^T alpha).
    Eigen::VectorXd primal_coefficients() const;
    const Eigen::VectorXd& dual_coefficients() const;
    const Eigen::MatrixXd& training_inputs() const;

    double predict(const Eigen::VectorXd& x) const;
    Eigen::VectorXd predict_batch(const Eigen::MatrixXd& xs) const;

    static SpectralEstimator primal(FilterSpec f, double lam_req, double lam_real, long steps,
                                    Eigen::VectorXd omega);
    static SpectralEstimator dual(FilterSpec f, double lam_req, double lam_real, long steps,
                                  Eigen::VectorXd alpha, Eigen::MatrixXd inputs, Kernel kernel);

private:
    SpectralEstimator(Mode m, FilterSpec f) : mode_(m), filter_(std::move(f)) {}
    Mode mode_;
    FilterSpec filter_;
    double lambda_requested_ = 0.0;
    double lambda_realized_ = 0.0;
    long steps_ = 0;
    Eigen::VectorXd omega_;
    Eigen::VectorXd alpha_;
    Eigen::MatrixXd inputs_;
    std::optional<Kernel> kernel_;
};

// Precomputed spectral systems. Fitting across a lambda grid reuses one
// eigendecomposition; this is what the sweep harness leans on.
struct PrimalSystem {
    EigenSystem eig;      // of T_x = (1/n) X^T X
    Eigen::VectorXd sxy;  // (1/n) X^T y
    long n = 0;
    double kappa_sq = 0.0;
};
PrimalSystem build_primal_system(const Dataset& data);
Eigen::VectorXd solve_primal(const PrimalSystem& sys, const FilterSpec& filter, double lambda);

struct DualSystem {
    EigenSystem eig;      // of K/n
    Eigen::VectorXd outputs;
    long n = 0;
    double kappa_sq = 0.0;
};
DualSystem build_dual_system(const Dataset& data, const Kernel& kernel);
Eigen::VectorXd solve_dual_alpha(const DualSystem& sys, const FilterSpec& filter, double lambda);

// omega = g_lambda(T_x) S_x^* y via eigendecomposition of the (d x d)
// empirical covariance. lambda must lie in [1/n, 1].
SpectralEstimator fit_primal(const Dataset& data, const FilterSpec& filter, double lambda);

// alpha = (1/n) g_lambda(K/n) y via eigendecomposition of the (n x n)
// scaled Gram matrix; predicts f(x) = sum_i alpha_i K(x_i, x).
SpectralEstimator fit_dual(const Dataset& data, const Kernel& kernel, const FilterSpec& filter,
                           double lambda);

// Same estimator, cheaper factorization: primal when d <= n, dual with the
// linear kernel otherwise. The choice depends only on the data shape.
SpectralEstimator fit(const Dataset& data, const FilterSpec& filter, double lambda);

// Explicit Landweber iteration omega_{k+1} = omega_k - eta (T_x omega_k - S_x^* y)
// from omega_0 = 0. Exists as an independent oracle for the gradient filter;
// requires eta in (0, 1/kappa^2].
SpectralEstimator gradient_descent_reference(const Dataset& data, double eta, long t);

} // namespace specreg
