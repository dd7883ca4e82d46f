#include "specreg/filters.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace specreg {

namespace {

constexpr double kRelTol = 1e-9;

double pow_alpha(double base, double alpha) {
    if (alpha == 0.0) return 1.0;
    return std::pow(base, alpha);
}

// (alpha/e)^alpha, continuous at alpha = 0 where it equals 1.
double gradient_envelope(double alpha) {
    if (alpha <= 0.0) return 1.0;
    return std::exp(alpha * (std::log(alpha) - 1.0));
}

std::vector<double> log_spaced(double lo, double hi, int count) {
    std::vector<double> g(static_cast<std::size_t>(count));
    const double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < count; ++i)
        g[static_cast<std::size_t>(i)] =
            std::exp(llo + (lhi - llo) * static_cast<double>(i) / (count - 1));
    g.front() = lo;
    g.back() = hi;
    return g;
}

} // namespace

FilterSpec FilterSpec::spectral_cutoff(double tau) {
    if (!(tau > 0.0)) throw std::invalid_argument("spectral_cutoff: tau must be positive");
    return FilterSpec(FilterKind::SpectralCutoff, tau, 0.0, 0);
}

FilterSpec FilterSpec::gradient(double eta, double tau) {
    if (!(eta > 0.0)) throw std::invalid_argument("gradient: step size eta must be positive");
    if (!(tau > 0.0)) throw std::invalid_argument("gradient: tau must be positive");
    return FilterSpec(FilterKind::Gradient, tau, eta, 0);
}

FilterSpec FilterSpec::iterated_ridge(int depth) {
    if (depth < 1) throw std::invalid_argument("iterated_ridge: depth must be >= 1");
    return FilterSpec(FilterKind::IteratedRidge, static_cast<double>(depth), 0.0, depth);
}

double FilterSpec::E() const {
    switch (kind_) {
        case FilterKind::SpectralCutoff: return 1.0;
        case FilterKind::Gradient: return 1.0;
        case FilterKind::IteratedRidge: return static_cast<double>(depth_);
    }
    return 1.0;
}

double FilterSpec::f_tau() const {
    switch (kind_) {
        case FilterKind::SpectralCutoff: return 1.0;
        case FilterKind::Gradient: return gradient_envelope(tau_);
        case FilterKind::IteratedRidge: return 1.0;
    }
    return 1.0;
}

double FilterSpec::residual_order_const(double alpha) const {
    if (alpha < 0.0) throw std::invalid_argument("residual_order_const: alpha must be >= 0");
    switch (kind_) {
        case FilterKind::SpectralCutoff: return 1.0;
        case FilterKind::Gradient: return gradient_envelope(alpha);
        case FilterKind::IteratedRidge: return 1.0;
    }
    return 1.0;
}

double FilterSpec::uniform_residual_const() const {
    if (kind_ == FilterKind::Gradient) return std::max(1.0, gradient_envelope(tau_));
    return 1.0;
}

double FilterSpec::c_g(double cover_c) const {
    if (!(cover_c > 0.0)) throw std::invalid_argument("c_g: cover constant must be positive");
    return uniform_residual_const() / std::min(cover_c, 1.0);
}

double FilterSpec::eta() const {
    if (kind_ != FilterKind::Gradient)
        throw std::logic_error("FilterSpec: eta is only defined for gradient filters");
    return eta_;
}

int FilterSpec::depth() const {
    if (kind_ != FilterKind::IteratedRidge)
        throw std::logic_error("FilterSpec: depth is only defined for iterated ridge");
    return depth_;
}

FilterSpec::Realized FilterSpec::realize(double lambda) const {
    if (!(lambda > 0.0)) throw std::invalid_argument("realize: lambda must be positive");
    if (kind_ != FilterKind::Gradient) return {lambda, 0};
    const double exact = 1.0 / (eta_ * lambda);
    long t = static_cast<long>(std::ceil(exact - 1e-12));
    if (t < 1) t = 1;
    return {1.0 / (eta_ * static_cast<double>(t)), t};
}

std::string FilterSpec::name() const {
    switch (kind_) {
        case FilterKind::SpectralCutoff: return "spectral_cutoff";
        case FilterKind::Gradient: return "gradient";
        case FilterKind::IteratedRidge:
            return "iterated_ridge_l" + std::to_string(depth_);
    }
    return "unknown";
}

namespace {

void check_ul(double u, double lambda, const char* who) {
    if (u < 0.0) throw std::invalid_argument(std::string(who) + ": u must be >= 0");
    if (!(lambda > 0.0)) throw std::invalid_argument(std::string(who) + ": lambda must be > 0");
}

} // namespace

double eval_g(const FilterSpec& spec, double u, double lambda) {
    check_ul(u, lambda, "eval_g");
    switch (spec.kind()) {
        case FilterKind::SpectralCutoff:
            return u >= lambda ? 1.0 / u : 0.0; // boundary inclusive
        case FilterKind::Gradient: {
            const auto r = spec.realize(lambda);
            const double eta = spec.eta();
            if (u == 0.0) return eta * static_cast<double>(r.steps);
            if (eta * u >= 1.0) return 1.0 / u;
            // 1 - (1-eta u)^t without cancellation for small eta*u*t
            return -std::expm1(static_cast<double>(r.steps) * std::log1p(-eta * u)) / u;
        }
        case FilterKind::IteratedRidge: {
            const int l = spec.depth();
            if (u == 0.0) return static_cast<double>(l) / lambda;
            return -std::expm1(-static_cast<double>(l) * std::log1p(u / lambda)) / u;
        }
    }
    throw std::logic_error("eval_g: unknown filter kind");
}

double eval_residual(const FilterSpec& spec, double u, double lambda) {
    check_ul(u, lambda, "eval_residual");
    switch (spec.kind()) {
        case FilterKind::SpectralCutoff:
            return u < lambda ? 1.0 : 0.0;
        case FilterKind::Gradient: {
            const auto r = spec.realize(lambda);
            const double eta = spec.eta();
            if (eta * u >= 1.0) return 0.0;
            return std::exp(static_cast<double>(r.steps) * std::log1p(-eta * u));
        }
        case FilterKind::IteratedRidge: {
            const int l = spec.depth();
            return std::exp(-static_cast<double>(l) * std::log1p(u / lambda));
        }
    }
    throw std::logic_error("eval_residual: unknown filter kind");
}

IndexFunction IndexFunction::holder(double zeta) {
    if (zeta < 0.0) throw std::invalid_argument("IndexFunction: zeta must be >= 0");
    return IndexFunction(zeta, nullptr);
}

IndexFunction IndexFunction::custom(double zeta, std::function<double(double)> phi) {
    if (!phi) throw std::invalid_argument("IndexFunction: null hook");
    return IndexFunction(zeta, std::move(phi));
}

double IndexFunction::operator()(double u) const {
    if (u < 0.0) throw std::invalid_argument("IndexFunction: u must be >= 0");
    if (fn_) return fn_(u);
    return pow_alpha(u, zeta_);
}

std::string AxiomGrid::describe() const {
    return std::to_string(u.size()) + " u x " + std::to_string(lambda.size()) + " lambda x " +
           std::to_string(alpha_unit.size()) + " alpha";
}

AxiomGrid default_axiom_grid(double kappa_sq) {
    if (!(kappa_sq > 0.0)) throw std::invalid_argument("default_axiom_grid: kappa_sq must be > 0");
    AxiomGrid g;
    g.u = log_spaced(1e-8 * kappa_sq, kappa_sq, 2000);
    g.lambda = log_spaced(1e-4, 1.0, 20);
    g.alpha_unit.resize(11);
    for (int i = 0; i <= 10; ++i) g.alpha_unit[static_cast<std::size_t>(i)] = i / 10.0;
    return g;
}

AxiomReport verify_filter_axioms(const FilterSpec& spec, double kappa_sq,
                                 const AxiomGrid& grid) {
    if (grid.u.empty() || grid.lambda.empty() || grid.alpha_unit.empty())
        throw std::invalid_argument("verify_filter_axioms: empty grid");
    for (double u : grid.u)
        if (!(u > 0.0) || u > kappa_sq * (1.0 + 1e-12))
            throw std::invalid_argument("verify_filter_axioms: u grid leaves (0, kappa^2]");
    for (double l : grid.lambda)
        if (!(l > 0.0) || l > 1.0)
            throw std::invalid_argument("verify_filter_axioms: lambda grid leaves (0, 1]");
    for (double af : grid.alpha_unit)
        if (!(af >= 0.0 && af <= 1.0))
            throw std::invalid_argument("verify_filter_axioms: alpha fractions leave [0, 1]");

    const double tau = spec.qualification();
    AxiomReport rep;
    rep.filter = spec.name();
    rep.kappa_sq = kappa_sq;
    rep.tau = tau;
    rep.eq7_bound = spec.E();
    rep.eq8_bound = spec.f_tau();
    rep.grid = grid.describe();

    std::vector<double> g_vals(grid.u.size()), r_vals(grid.u.size());
    for (double lam : grid.lambda) {
        const double lam_real = spec.realize(lam).lambda;
        for (std::size_t i = 0; i < grid.u.size(); ++i) {
            g_vals[i] = eval_g(spec, grid.u[i], lam);
            r_vals[i] = std::abs(eval_residual(spec, grid.u[i], lam));
        }
        for (double af : grid.alpha_unit) {
            const double a7 = af; // Eq. 7 sweeps alpha in [0,1]
            const double lam_pow7 = pow_alpha(lam_real, 1.0 - a7);
            const double a8 = af * tau; // Eq. 8 sweeps alpha in [0, tau]
            const double env = spec.residual_order_const(a8);
            const double lam_pow8 = pow_alpha(lam_real, -a8);
            for (std::size_t i = 0; i < grid.u.size(); ++i) {
                const double ua7 = pow_alpha(grid.u[i], a7);
                rep.eq7_max = std::max(rep.eq7_max, ua7 * g_vals[i] * lam_pow7);
                const double obs8 = r_vals[i] * pow_alpha(grid.u[i], a8) * lam_pow8;
                rep.eq8_envelope_ratio = std::max(rep.eq8_envelope_ratio, obs8 / env);
            }
        }
        // residual maximum at the declared qualification order
        const double lam_tau = pow_alpha(lam_real, -tau);
        for (std::size_t i = 0; i < grid.u.size(); ++i)
            rep.eq8_max_at_tau =
                std::max(rep.eq8_max_at_tau, r_vals[i] * pow_alpha(grid.u[i], tau) * lam_tau);
    }

    rep.pass = rep.eq7_max <= rep.eq7_bound * (1.0 + kRelTol) &&
               rep.eq8_max_at_tau <= rep.eq8_bound * (1.0 + kRelTol) &&
               rep.eq8_envelope_ratio <= 1.0 + kRelTol;
    return rep;
}

AxiomReport verify_filter_axioms(const FilterSpec& spec, double kappa_sq) {
    return verify_filter_axioms(spec, kappa_sq, default_axiom_grid(kappa_sq));
}

CoverReport verify_qualification_covers(const FilterSpec& spec, const IndexFunction& phi,
                                        double kappa_sq,
                                        const std::vector<double>& lambda_grid) {
    if (!(kappa_sq > 0.0))
        throw std::invalid_argument("verify_qualification_covers: kappa_sq must be > 0");
    if (lambda_grid.empty())
        throw std::invalid_argument("verify_qualification_covers: empty lambda grid");
    const double tau = spec.qualification();
    if (phi.is_holder() && phi.zeta() > tau)
        throw std::invalid_argument(
            "verify_qualification_covers: source exponent zeta=" + std::to_string(phi.zeta()) +
            " exceeds qualification tau=" + std::to_string(tau) +
            "; the qualification cannot cover this index function");

    const auto u_grid = log_spaced(1e-8 * kappa_sq, kappa_sq, 2000);
    CoverReport rep;
    rep.tau = tau;
    rep.zeta = phi.zeta();
    rep.grid = std::to_string(u_grid.size()) + " u x " + std::to_string(lambda_grid.size()) +
               " lambda";
    double c = std::numeric_limits<double>::infinity();
    for (double lam : lambda_grid) {
        if (!(lam > 0.0) || lam > kappa_sq)
            throw std::invalid_argument("verify_qualification_covers: lambda outside (0, kappa^2]");
        double inf = std::pow(kappa_sq, tau) / phi(kappa_sq);
        for (double u : u_grid) {
            if (u < lam) continue;
            inf = std::min(inf, std::pow(u, tau) / phi(u));
        }
        // include the left endpoint u = lambda itself
        inf = std::min(inf, std::pow(lam, tau) / phi(lam));
        c = std::min(c, inf / (std::pow(lam, tau) / phi(lam)));
    }
    rep.certified_c = c;
    rep.pass = c > 0.0 && std::isfinite(c);
    return rep;
}

} // namespace specreg
