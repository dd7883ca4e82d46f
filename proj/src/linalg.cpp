#include "specreg/linalg.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#ifdef SPECREG_USE_OPENBLAS
extern "C" {
void dsyevd_(const char* jobz, const char* uplo, const int* n, double* a, const int* lda,
             double* w, double* work, const int* lwork, int* iwork, const int* liwork,
             int* info);
void cblas_dsyrk(int order, int uplo, int trans, int n, int k, double alpha, const double* a,
                 int lda, double beta, double* c, int ldc);
void openblas_set_num_threads(int) __attribute__((weak));
}

namespace {
// The library must stay single-threaded internally: trial-level parallelism
// owns the cores, and results have to be identical at any thread count.
struct BlasPin {
    BlasPin() {
        if (openblas_set_num_threads) openblas_set_num_threads(1);
    }
};
const BlasPin blas_pin{};

constexpr int kCblasColMajor = 102;
constexpr int kCblasLower = 122;
constexpr int kCblasNoTrans = 111;
constexpr int kCblasTrans = 112;
} // namespace
#endif

namespace specreg {

namespace {

void require_finite(const Eigen::MatrixXd& m, const char* who) {
    if (!m.allFinite()) throw std::invalid_argument(std::string(who) + ": non-finite entry");
}

EigenSystem eig_descending_from_lower(Eigen::MatrixXd a) {
    const Eigen::Index n = a.rows();
#ifdef SPECREG_USE_OPENBLAS
    const int ni = static_cast<int>(n);
    Eigen::VectorXd w(n);
    int info = 0;
    int lwork = -1, liwork = -1;
    double wkopt = 0.0;
    int iwkopt = 0;
    dsyevd_("V", "L", &ni, a.data(), &ni, w.data(), &wkopt, &lwork, &iwkopt, &liwork, &info);
    if (info != 0)
        throw std::runtime_error("sym_eigendecompose: workspace query failed (dim=" +
                                 std::to_string(n) + ", info=" + std::to_string(info) + ")");
    lwork = static_cast<int>(wkopt);
    liwork = iwkopt;
    std::vector<double> work(static_cast<std::size_t>(lwork));
    std::vector<int> iwork(static_cast<std::size_t>(liwork));
    dsyevd_("V", "L", &ni, a.data(), &ni, w.data(), work.data(), &lwork, iwork.data(), &liwork,
            &info);
    if (info != 0)
        throw std::runtime_error("sym_eigendecompose: eigensolver failed to converge (dim=" +
                                 std::to_string(n) + ", info=" + std::to_string(info) + ")");
    EigenSystem out;
    out.eigenvalues = w.reverse();
    out.eigenvectors = a.rowwise().reverse();
    return out;
#else
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.compute(a.selfadjointView<Eigen::Lower>());
    if (es.info() != Eigen::Success)
        throw std::runtime_error("sym_eigendecompose: eigensolver failed to converge (dim=" +
                                 std::to_string(n) + ")");
    EigenSystem out;
    out.eigenvalues = es.eigenvalues().reverse();
    out.eigenvectors = es.eigenvectors().rowwise().reverse();
    return out;
#endif
}

} // namespace

SymMatrix::SymMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols())
        throw std::invalid_argument("SymMatrix: matrix is not square");
    if (entries_.rows() < 1) throw std::invalid_argument("SymMatrix: empty matrix");
    require_finite(entries_, "SymMatrix");
    for (Eigen::Index i = 0; i < entries_.rows(); ++i) {
        for (Eigen::Index j = i + 1; j < entries_.cols(); ++j) {
            const double a = entries_(i, j), b = entries_(j, i);
            const double scale = std::max({1.0, std::abs(a), std::abs(b)});
            if (std::abs(a - b) > 1e-12 * scale)
                throw std::invalid_argument("SymMatrix: entries (" + std::to_string(i) + "," +
                                            std::to_string(j) + ") break symmetry");
        }
    }
}

EigenSystem sym_eigendecompose(const SymMatrix& a) {
    return eig_descending_from_lower(a.entries());
}

EigenSystem sym_eigendecompose_lower(const Eigen::MatrixXd& lower_filled) {
    if (lower_filled.rows() != lower_filled.cols())
        throw std::invalid_argument("sym_eigendecompose_lower: matrix is not square");
    require_finite(lower_filled, "sym_eigendecompose_lower");
    return eig_descending_from_lower(lower_filled);
}

Eigen::VectorXd apply_spectral(const EigenSystem& eig,
                               const std::function<double(double)>& f,
                               const Eigen::VectorXd& v) {
    if (v.size() != eig.dim())
        throw std::invalid_argument("apply_spectral: vector length " + std::to_string(v.size()) +
                                    " does not match eigensystem dimension " +
                                    std::to_string(eig.dim()));
    Eigen::VectorXd w = eig.eigenvectors.transpose() * v;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        const double s = std::max(eig.eigenvalues[i], 0.0);
        const double fs = f(s);
        if (!std::isfinite(fs))
            throw std::invalid_argument("apply_spectral: f is not finite at eigenvalue " +
                                        std::to_string(s));
        w[i] *= fs;
    }
    return eig.eigenvectors * w;
}

SymMatrix gram_matrix(const KernelFn& kernel, const Eigen::MatrixXd& points) {
    require_finite(points, "gram_matrix");
    const Eigen::Index n = points.rows();
    Eigen::MatrixXd k(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            const double v = kernel(points.row(i), points.row(j));
            if (!std::isfinite(v))
                throw std::invalid_argument("gram_matrix: non-finite kernel value at pair (" +
                                            std::to_string(i) + "," + std::to_string(j) + ")");
            k(i, j) = v;
            k(j, i) = v;
        }
    }
    return SymMatrix(std::move(k));
}

KernelFn linear_kernel() {
    return [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return a.dot(b); };
}

KernelFn gaussian_kernel(double width) {
    if (!(width > 0.0)) throw std::invalid_argument("gaussian_kernel: width must be positive");
    const double inv = 1.0 / (2.0 * width * width);
    return [inv](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
        return std::exp(-(a - b).squaredNorm() * inv);
    };
}

Eigen::MatrixXd scaled_gram_of_columns(const Eigen::MatrixXd& x, double scale) {
    const Eigen::Index d = x.cols();
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(d, d);
#ifdef SPECREG_USE_OPENBLAS
    cblas_dsyrk(kCblasColMajor, kCblasLower, kCblasTrans, static_cast<int>(d),
                static_cast<int>(x.rows()), 1.0 / scale, x.data(), static_cast<int>(x.rows()),
                0.0, c.data(), static_cast<int>(d));
#else
    c.selfadjointView<Eigen::Lower>().rankUpdate(x.transpose(), 1.0 / scale);
#endif
    c.triangularView<Eigen::StrictlyUpper>() = c.transpose();
    return c;
}

Eigen::MatrixXd scaled_gram_of_rows(const Eigen::MatrixXd& x, double scale) {
    const Eigen::Index n = x.rows();
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
#ifdef SPECREG_USE_OPENBLAS
    cblas_dsyrk(kCblasColMajor, kCblasLower, kCblasNoTrans, static_cast<int>(n),
                static_cast<int>(x.cols()), 1.0 / scale, x.data(), static_cast<int>(n), 0.0,
                c.data(), static_cast<int>(n));
#else
    c.selfadjointView<Eigen::Lower>().rankUpdate(x, 1.0 / scale);
#endif
    c.triangularView<Eigen::StrictlyUpper>() = c.transpose();
    return c;
}

} // namespace specreg
