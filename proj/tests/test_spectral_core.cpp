#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "specreg/linalg.hpp"

using namespace specreg;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

MatrixXd random_psd(int d, unsigned seed) {
    std::mt19937 gen(seed);
    std::normal_distribution<double> nd;
    MatrixXd b(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) b(i, j) = nd(gen);
    return b * b.transpose() / d;
}

// Hand oracle for the 2x2 symmetric eigenproblem via the characteristic
// polynomial: s = ((a+c) +- sqrt((a-c)^2 + 4 b^2)) / 2.
std::pair<double, double> eig2x2(double a, double b, double c) {
    const double disc = std::sqrt((a - c) * (a - c) + 4.0 * b * b);
    return {(a + c + disc) / 2.0, (a + c - disc) / 2.0};
}

} // namespace

TEST_CASE("identity matrix eigendecomposition") {
    SymMatrix a(MatrixXd::Identity(3, 3));
    const EigenSystem eig = sym_eigendecompose(a);
    for (int i = 0; i < 3; ++i) CHECK(eig.eigenvalues(i) == doctest::Approx(1.0).epsilon(1e-12));
    const MatrixXd vtv = eig.eigenvectors.transpose() * eig.eigenvectors;
    CHECK((vtv - MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("diagonal matrix eigendecomposition") {
    MatrixXd a = MatrixXd::Zero(2, 2);
    a(0, 0) = 4.0;
    a(1, 1) = 1.0;
    const EigenSystem eig = sym_eigendecompose(SymMatrix(a));
    CHECK(eig.eigenvalues(0) == doctest::Approx(4.0));
    CHECK(eig.eigenvalues(1) == doctest::Approx(1.0));
    // standard basis vectors up to sign
    CHECK(std::abs(eig.eigenvectors(0, 0)) == doctest::Approx(1.0));
    CHECK(std::abs(eig.eigenvectors(1, 1)) == doctest::Approx(1.0));
}

TEST_CASE("2x2 dense case against the characteristic polynomial") {
    MatrixXd a(2, 2);
    a << 2.0, 1.0, 1.0, 2.0;
    const auto [hi, lo] = eig2x2(2.0, 1.0, 2.0);
    CHECK(hi == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(lo == doctest::Approx(1.0).epsilon(1e-14));
    const EigenSystem eig = sym_eigendecompose(SymMatrix(a));
    CHECK(eig.eigenvalues(0) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(eig.eigenvalues(1) == doctest::Approx(1.0).epsilon(1e-12));
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int k = 0; k < 2; ++k) {
        CHECK(std::abs(eig.eigenvectors(k, 0)) == doctest::Approx(inv_sqrt2).epsilon(1e-10));
        CHECK(std::abs(eig.eigenvectors(k, 1)) == doctest::Approx(inv_sqrt2).epsilon(1e-10));
    }
    // second vector has opposite-sign components
    CHECK(eig.eigenvectors(0, 1) * eig.eigenvectors(1, 1) < 0.0);
}

TEST_CASE("eigensystem invariants on random PSD matrices") {
    for (unsigned seed : {1u, 2u, 3u}) {
        const MatrixXd a = random_psd(10, seed);
        const EigenSystem eig = sym_eigendecompose(SymMatrix(a));
        for (int i = 0; i + 1 < 10; ++i) CHECK(eig.eigenvalues(i) >= eig.eigenvalues(i + 1));
        const MatrixXd vtv = eig.eigenvectors.transpose() * eig.eigenvectors;
        CHECK((vtv - MatrixXd::Identity(10, 10)).cwiseAbs().maxCoeff() < 1e-8);
        const MatrixXd rec = eig.eigenvectors * eig.eigenvalues.asDiagonal() *
                             eig.eigenvectors.transpose();
        CHECK((rec - a).cwiseAbs().maxCoeff() < 1e-8 * a.norm());
    }
}

TEST_CASE("eigendecomposition rejects bad input") {
    CHECK_THROWS_AS(SymMatrix{MatrixXd::Constant(2, 3, 1.0)}, std::invalid_argument);
    MatrixXd asym(2, 2);
    asym << 1.0, 2.0, 0.5, 1.0;
    CHECK_THROWS_AS(SymMatrix{asym}, std::invalid_argument);
    MatrixXd nan2 = MatrixXd::Identity(2, 2);
    nan2(0, 1) = nan2(1, 0) = std::nan("");
    CHECK_THROWS_AS(SymMatrix{nan2}, std::invalid_argument);
}

TEST_CASE("apply_spectral identity map reproduces the matrix action") {
    for (unsigned seed : {11u, 12u}) {
        const MatrixXd a = random_psd(10, seed);
        const EigenSystem eig = sym_eigendecompose(SymMatrix(a));
        std::mt19937 gen(seed + 100);
        std::normal_distribution<double> nd;
        VectorXd v(10);
        for (int i = 0; i < 10; ++i) v(i) = nd(gen);
        const VectorXd via_spec = apply_spectral(eig, [](double u) { return u; }, v);
        CHECK((via_spec - a * v).norm() < 1e-8 * (a * v).norm() + 1e-12);
        const VectorXd id = apply_spectral(eig, [](double) { return 1.0; }, v);
        CHECK((id - v).norm() < 1e-10);
    }
}

TEST_CASE("apply_spectral on diag(4,1) with f(u)=1/(u+1)") {
    MatrixXd a = MatrixXd::Zero(2, 2);
    a(0, 0) = 4.0;
    a(1, 1) = 1.0;
    const EigenSystem eig = sym_eigendecompose(SymMatrix(a));
    VectorXd v(2);
    v << 1.0, 1.0;
    const VectorXd r = apply_spectral(eig, [](double u) { return 1.0 / (u + 1.0); }, v);
    // per-coordinate oracle: 1/(4+1), 1/(1+1)
    CHECK(r(0) == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(r(1) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("apply_spectral rejects dimension mismatch") {
    const EigenSystem eig = sym_eigendecompose(SymMatrix(MatrixXd::Identity(3, 3)));
    CHECK_THROWS_AS(apply_spectral(eig, [](double u) { return u; }, VectorXd::Ones(4)),
                    std::invalid_argument);
}

TEST_CASE("composition of commuting scalar functions") {
    auto f = [](double u) { return u / (u + 0.5); };
    auto g = [](double u) { return std::exp(-u); };
    auto fg = [&](double u) { return f(u) * g(u); };
    for (unsigned seed : {21u, 22u}) {
        const MatrixXd a = random_psd(10, seed);
        const EigenSystem eig = sym_eigendecompose(SymMatrix(a));
        std::mt19937 gen(seed);
        std::normal_distribution<double> nd;
        VectorXd v(10);
        for (int i = 0; i < 10; ++i) v(i) = nd(gen);
        const VectorXd fg_once = apply_spectral(eig, fg, v);
        const VectorXd f_then_g = apply_spectral(eig, g, apply_spectral(eig, f, v));
        const VectorXd g_then_f = apply_spectral(eig, f, apply_spectral(eig, g, v));
        CHECK((fg_once - f_then_g).norm() < 1e-10);
        CHECK((fg_once - g_then_f).norm() < 1e-10);
    }
}

TEST_CASE("gram matrix of orthonormal points under the linear kernel") {
    MatrixXd pts = MatrixXd::Identity(2, 2);
    const SymMatrix k = gram_matrix(linear_kernel(), pts);
    CHECK((k.entries() - MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("gaussian kernel gram has unit diagonal and PSD spectrum") {
    std::mt19937 gen(5);
    std::normal_distribution<double> nd;
    MatrixXd pts(6, 3);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 3; ++j) pts(i, j) = nd(gen);
    const SymMatrix k = gram_matrix(gaussian_kernel(1.5), pts);
    for (int i = 0; i < 6; ++i) CHECK(k.entries()(i, i) == doctest::Approx(1.0).epsilon(1e-14));
    const EigenSystem eig = sym_eigendecompose(k);
    CHECK(eig.eigenvalues.minCoeff() >= -1e-10 * eig.eigenvalues.maxCoeff());
}

TEST_CASE("linear kernel gram by hand") {
    MatrixXd pts(2, 2);
    pts << 1.0, 0.0, 1.0, 1.0;
    const SymMatrix k = gram_matrix(linear_kernel(), pts);
    // inner products: <(1,0),(1,0)>=1, <(1,0),(1,1)>=1, <(1,1),(1,1)>=2
    CHECK(k.entries()(0, 0) == doctest::Approx(1.0));
    CHECK(k.entries()(0, 1) == doctest::Approx(1.0));
    CHECK(k.entries()(1, 0) == doctest::Approx(1.0));
    CHECK(k.entries()(1, 1) == doctest::Approx(2.0));
}

TEST_CASE("gram matrix rejects non-finite kernel values") {
    auto bad = [](const VectorXd&, const VectorXd&) { return std::nan(""); };
    CHECK_THROWS_AS(gram_matrix(bad, MatrixXd::Identity(2, 2)), std::invalid_argument);
}

TEST_CASE("scaled gram helpers match dense products") {
    std::mt19937 gen(33);
    std::normal_distribution<double> nd;
    MatrixXd x(7, 4);
    for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 4; ++j) x(i, j) = nd(gen);
    const MatrixXd cols = scaled_gram_of_columns(x, 7.0);
    CHECK((cols - x.transpose() * x / 7.0).cwiseAbs().maxCoeff() < 1e-12);
    const MatrixXd rows = scaled_gram_of_rows(x, 7.0);
    CHECK((rows - x * x.transpose() / 7.0).cwiseAbs().maxCoeff() < 1e-12);
}
