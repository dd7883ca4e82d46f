#include "specreg/estimator.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "specreg/csvio.hpp"

namespace specreg {

namespace {

void check_lambda_range(double lambda, long n, const char* who) {
    const double lo = 1.0 / static_cast<double>(n);
    if (!(lambda >= lo && lambda <= 1.0))
        throw std::invalid_argument(std::string(who) + ": lambda=" + std::to_string(lambda) +
                                    " outside the admissible interval [1/n, 1] = [" +
                                    std::to_string(lo) + ", 1]");
}

void check_gradient_step(const FilterSpec& filter, double kappa_sq, const char* who) {
    if (filter.kind() != FilterKind::Gradient) return;
    if (filter.eta() * kappa_sq > 1.0 + 1e-12)
        throw std::invalid_argument(std::string(who) + ": gradient step eta=" +
                                    std::to_string(filter.eta()) +
                                    " exceeds 1/kappa^2=" + std::to_string(1.0 / kappa_sq));
}

} // namespace

Dataset::Dataset(Eigen::MatrixXd x, Eigen::VectorXd y)
    : inputs(std::move(x)), outputs(std::move(y)) {
    if (inputs.rows() < 1) throw std::invalid_argument("Dataset: need at least one sample");
    if (inputs.rows() != outputs.size())
        throw std::invalid_argument("Dataset: " + std::to_string(inputs.rows()) +
                                    " input rows vs " + std::to_string(outputs.size()) +
                                    " outputs");
    if (!inputs.allFinite() || !outputs.allFinite())
        throw std::invalid_argument("Dataset: non-finite entry");
    // plain sequential accumulation; keeps the recorded bound identical to
    // generators that define kappa^2 as an index-ordered sum
    kappa_sq = 0.0;
    for (long i = 0; i < inputs.rows(); ++i) {
        double s = 0.0;
        for (long j = 0; j < inputs.cols(); ++j) s += inputs(i, j) * inputs(i, j);
        kappa_sq = std::max(kappa_sq, s);
    }
}

Dataset load_dataset_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_dataset_csv: cannot open " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> vals;
        std::size_t pos = 0;
        bool numeric = true;
        while (pos <= line.size()) {
            std::size_t comma = line.find(',', pos);
            if (comma == std::string::npos) comma = line.size();
            double v = 0.0;
            const char* b = line.data() + pos;
            const char* e = line.data() + comma;
            while (b < e && (*b == ' ' || *b == '\t')) ++b;
            auto res = std::from_chars(b, e, v);
            if (res.ec != std::errc()) {
                numeric = false;
                break;
            }
            vals.push_back(v);
            pos = comma + 1;
            if (comma == line.size()) break;
        }
        if (!numeric) {
            if (first) {
                first = false;
                continue; // header row
            }
            throw std::runtime_error("load_dataset_csv: non-numeric field in " + path);
        }
        first = false;
        if (vals.size() < 2)
            throw std::runtime_error("load_dataset_csv: need at least one feature and a label");
        if (!rows.empty() && rows.back().size() != vals.size())
            throw std::runtime_error("load_dataset_csv: ragged rows in " + path);
        rows.push_back(std::move(vals));
    }
    if (rows.empty()) throw std::runtime_error("load_dataset_csv: no data rows in " + path);
    const long n = static_cast<long>(rows.size());
    const long d = static_cast<long>(rows.front().size()) - 1;
    Eigen::MatrixXd x(n, d);
    Eigen::VectorXd y(n);
    for (long i = 0; i < n; ++i) {
        for (long j = 0; j < d; ++j) x(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        y(i) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(d)];
    }
    return Dataset(std::move(x), std::move(y));
}

std::string dataset_to_csv(const Dataset& data) {
    std::vector<std::string> header;
    for (long j = 0; j < data.dim(); ++j) header.push_back("x" + std::to_string(j + 1));
    header.push_back("y");
    io::CsvBuilder csv(header);
    for (long i = 0; i < data.n(); ++i) {
        csv.begin_row();
        for (long j = 0; j < data.dim(); ++j) csv.add(data.inputs(i, j));
        csv.add(data.outputs(i));
        csv.end_row();
    }
    return csv.str();
}

Kernel Kernel::linear() { return Kernel{Type::Linear, 0.0, linear_kernel()}; }

Kernel Kernel::gaussian(double width) { return Kernel{Type::Gaussian, width, gaussian_kernel(width)}; }

Kernel Kernel::custom(KernelFn f) {
    if (!f) throw std::invalid_argument("Kernel::custom: null kernel");
    return Kernel{Type::Custom, 0.0, std::move(f)};
}

double Kernel::operator()(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
    return fn(a, b);
}

Eigen::VectorXd SpectralEstimator::primal_coefficients() const {
    if (mode_ == Mode::Primal) return omega_;
    if (kernel_ && kernel_->type == Kernel::Type::Linear) return inputs_.transpose() * alpha_;
    throw std::logic_error(
        "SpectralEstimator: primal coefficients are undefined for a non-linear kernel");
}

const Eigen::VectorXd& SpectralEstimator::dual_coefficients() const {
    if (mode_ != Mode::Dual)
        throw std::logic_error("SpectralEstimator: no dual coefficients in primal mode");
    return alpha_;
}

const Eigen::MatrixXd& SpectralEstimator::training_inputs() const {
    if (mode_ != Mode::Dual)
        throw std::logic_error("SpectralEstimator: training inputs stored only in dual mode");
    return inputs_;
}

double SpectralEstimator::predict(const Eigen::VectorXd& x) const {
    if (mode_ == Mode::Primal) {
        if (x.size() != omega_.size())
            throw std::invalid_argument("predict: input dimension " + std::to_string(x.size()) +
                                        " does not match model dimension " +
                                        std::to_string(omega_.size()));
        return omega_.dot(x);
    }
    if (x.size() != inputs_.cols())
        throw std::invalid_argument("predict: input dimension " + std::to_string(x.size()) +
                                    " does not match training dimension " +
                                    std::to_string(inputs_.cols()));
    double s = 0.0;
    for (long i = 0; i < inputs_.rows(); ++i) s += alpha_(i) * (*kernel_)(inputs_.row(i), x);
    return s;
}

Eigen::VectorXd SpectralEstimator::predict_batch(const Eigen::MatrixXd& xs) const {
    Eigen::VectorXd out(xs.rows());
    for (long i = 0; i < xs.rows(); ++i) out(i) = predict(xs.row(i));
    return out;
}

SpectralEstimator SpectralEstimator::primal(FilterSpec f, double lam_req, double lam_real,
                                            long steps, Eigen::VectorXd omega) {
    SpectralEstimator est(Mode::Primal, std::move(f));
    est.lambda_requested_ = lam_req;
    est.lambda_realized_ = lam_real;
    est.steps_ = steps;
    est.omega_ = std::move(omega);
    return est;
}

SpectralEstimator SpectralEstimator::dual(FilterSpec f, double lam_req, double lam_real,
                                          long steps, Eigen::VectorXd alpha,
                                          Eigen::MatrixXd inputs, Kernel kernel) {
    SpectralEstimator est(Mode::Dual, std::move(f));
    est.lambda_requested_ = lam_req;
    est.lambda_realized_ = lam_real;
    est.steps_ = steps;
    est.alpha_ = std::move(alpha);
    est.inputs_ = std::move(inputs);
    est.kernel_ = std::move(kernel);
    return est;
}

PrimalSystem build_primal_system(const Dataset& data) {
    PrimalSystem sys;
    sys.n = data.n();
    sys.kappa_sq = data.kappa_sq;
    const Eigen::MatrixXd tx =
        scaled_gram_of_columns(data.inputs, static_cast<double>(data.n()));
    sys.eig = sym_eigendecompose_lower(tx);
    sys.sxy = (data.inputs.transpose() * data.outputs) / static_cast<double>(data.n());
    return sys;
}

Eigen::VectorXd solve_primal(const PrimalSystem& sys, const FilterSpec& filter, double lambda) {
    check_lambda_range(lambda, sys.n, "solve_primal");
    check_gradient_step(filter, sys.kappa_sq, "solve_primal");
    return apply_spectral(
        sys.eig, [&](double u) { return eval_g(filter, u, lambda); }, sys.sxy);
}

DualSystem build_dual_system(const Dataset& data, const Kernel& kernel) {
    DualSystem sys;
    sys.n = data.n();
    sys.kappa_sq = data.kappa_sq;
    if (kernel.type == Kernel::Type::Linear) {
        sys.eig = sym_eigendecompose_lower(
            scaled_gram_of_rows(data.inputs, static_cast<double>(data.n())));
    } else {
        // For a non-linear kernel the relevant norm bound is the Gram
        // diagonal, not the Euclidean norms of the raw inputs.
        SymMatrix k = gram_matrix(kernel.fn, data.inputs);
        sys.kappa_sq = k.entries().diagonal().maxCoeff();
        sys.eig = sym_eigendecompose_lower(k.entries() / static_cast<double>(data.n()));
    }
    sys.outputs = data.outputs;
    return sys;
}

Eigen::VectorXd solve_dual_alpha(const DualSystem& sys, const FilterSpec& filter, double lambda) {
    check_lambda_range(lambda, sys.n, "solve_dual_alpha");
    check_gradient_step(filter, sys.kappa_sq, "solve_dual_alpha");
    return apply_spectral(
               sys.eig, [&](double u) { return eval_g(filter, u, lambda); }, sys.outputs) /
           static_cast<double>(sys.n);
}

SpectralEstimator fit_primal(const Dataset& data, const FilterSpec& filter, double lambda) {
    const PrimalSystem sys = build_primal_system(data);
    Eigen::VectorXd omega = solve_primal(sys, filter, lambda);
    const auto r = filter.realize(lambda);
    return SpectralEstimator::primal(filter, lambda, r.lambda, r.steps, std::move(omega));
}

SpectralEstimator fit_dual(const Dataset& data, const Kernel& kernel, const FilterSpec& filter,
                           double lambda) {
    const DualSystem sys = build_dual_system(data, kernel);
    Eigen::VectorXd alpha = solve_dual_alpha(sys, filter, lambda);
    const auto r = filter.realize(lambda);
    return SpectralEstimator::dual(filter, lambda, r.lambda, r.steps, std::move(alpha),
                                   data.inputs, kernel);
}

SpectralEstimator fit(const Dataset& data, const FilterSpec& filter, double lambda) {
    if (data.dim() <= data.n()) return fit_primal(data, filter, lambda);
    return fit_dual(data, Kernel::linear(), filter, lambda);
}

SpectralEstimator gradient_descent_reference(const Dataset& data, double eta, long t) {
    if (t < 1) throw std::invalid_argument("gradient_descent_reference: t must be >= 1");
    if (!(eta > 0.0) || eta * data.kappa_sq > 1.0 + 1e-12)
        throw std::invalid_argument(
            "gradient_descent_reference: eta must lie in (0, 1/kappa^2]");
    const double n = static_cast<double>(data.n());
    const Eigen::MatrixXd tx = scaled_gram_of_columns(data.inputs, n);
    const Eigen::VectorXd sxy = (data.inputs.transpose() * data.outputs) / n;
    Eigen::VectorXd omega = Eigen::VectorXd::Zero(data.dim());
    const Eigen::MatrixXd txs = tx.selfadjointView<Eigen::Lower>();
    for (long k = 0; k < t; ++k) omega -= eta * (txs * omega - sxy);
    const double lambda = 1.0 / (eta * static_cast<double>(t));
    FilterSpec f = FilterSpec::gradient(eta);
    return SpectralEstimator::primal(f, lambda, lambda, t, std::move(omega));
}

} // namespace specreg
