#pragma once

#include <Eigen/Dense>
#include <functional>

namespace specreg {

// Dense symmetric matrix with validated entries. Carries empirical
// covariance operators and kernel Gram matrices; symmetry is checked to
// 1e-12 relative tolerance at construction.
class SymMatrix {
public:
    explicit SymMatrix(Eigen::MatrixXd entries);
    const Eigen::MatrixXd& entries() const { return entries_; }
    Eigen::Index dim() const { return entries_.rows(); }

private:
    Eigen::MatrixXd entries_;
};

// Full eigendecomposition of a symmetric matrix: eigenvalues sorted
// non-increasing, eigenvectors as orthonormal columns aligned with them.
struct EigenSystem {
    Eigen::VectorXd eigenvalues;  // descending
    Eigen::MatrixXd eigenvectors; // columns
    Eigen::Index dim() const { return eigenvalues.size(); }
};

// Deterministic dense symmetric eigendecomposition (LAPACK dsyevd when
// available, Eigen otherwise; no randomized pivoting in either path).
// Throws std::runtime_error carrying the dimension if the solver fails.
EigenSystem sym_eigendecompose(const SymMatrix& a);

// Internal entry point used where the matrix is symmetric by construction
// (covariances accumulated by rank updates). Same algorithm and checks on
// finiteness, but skips the symmetry scan.
EigenSystem sym_eigendecompose_lower(const Eigen::MatrixXd& lower_filled);

// Spectral calculus: returns sum_i f(max(s_i, 0)) <v, psi_i> psi_i.
// Eigenvalues are clamped at zero before f is applied, since the filter
// families are only defined on [0, kappa^2] and roundoff can produce
// slightly negative eigenvalues on PSD input.
Eigen::VectorXd apply_spectral(const EigenSystem& eig,
                               const std::function<double(double)>& f,
                               const Eigen::VectorXd& v);

// Kernel evaluated on all unordered pairs of rows of `points`; each entry
// computed once, so the result is symmetric by construction. Rejects
// non-finite kernel values.
using KernelFn = std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)>;
SymMatrix gram_matrix(const KernelFn& kernel, const Eigen::MatrixXd& points);

// Common kernels.
KernelFn linear_kernel();
KernelFn gaussian_kernel(double width);

// C = (1/scale) * X^T X, lower triangle filled and mirrored. Uses BLAS
// dsyrk when available. X is (n x d), result (d x d).
Eigen::MatrixXd scaled_gram_of_columns(const Eigen::MatrixXd& x, double scale);
// C = (1/scale) * X X^T, result (n x n).
Eigen::MatrixXd scaled_gram_of_rows(const Eigen::MatrixXd& x, double scale);

} // namespace specreg
