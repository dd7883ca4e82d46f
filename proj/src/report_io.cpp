#include "specreg/report_io.hpp"

#include "specreg/csvio.hpp"

namespace specreg::io {

ojson to_json(const AxiomReport& rep) {
    ojson j;
    j["filter"] = rep.filter;
    j["kappa_sq"] = rep.kappa_sq;
    j["tau"] = rep.tau;
    j["eq7_max"] = rep.eq7_max;
    j["eq7_bound"] = rep.eq7_bound;
    j["eq8_max_at_tau"] = rep.eq8_max_at_tau;
    j["eq8_bound"] = rep.eq8_bound;
    j["eq8_envelope_ratio"] = rep.eq8_envelope_ratio;
    j["pass"] = rep.pass;
    j["grid"] = rep.grid;
    return j;
}

ojson to_json(const CoverReport& rep) {
    ojson j;
    j["tau"] = rep.tau;
    j["zeta"] = rep.zeta;
    j["certified_c"] = rep.certified_c;
    j["pass"] = rep.pass;
    j["grid"] = rep.grid;
    return j;
}

ojson to_json(const BoundCheckReport& rep) {
    ojson j;
    j["name"] = rep.bound_name;
    j["grid"] = rep.grid;
    j["max_ratio"] = rep.max_ratio;
    j["pass"] = rep.pass;
    j["saturated"] = rep.saturated;
    j["c_g"] = rep.c_g;
    j["cover_c"] = rep.cover_c;
    return j;
}

ojson to_json(const ConcentrationReport& rep) {
    ojson j;
    j["n"] = rep.n;
    j["delta"] = rep.delta;
    j["trials"] = rep.trials;
    j["bound"] = rep.bound;
    j["fraction_within"] = rep.fraction_within;
    j["pass"] = rep.pass;
    j["median_error"] = rep.median_error;
    j["seed"] = rep.seed;
    return j;
}

ojson to_json(const SlopeFit& fit) {
    ojson j;
    j["slope"] = fit.slope;
    j["stderr"] = fit.stderr_slope;
    j["intercept"] = fit.intercept;
    j["points_used"] = fit.points_used;
    return j;
}

ojson to_json(const RateReport& rep) {
    ojson j;
    j["a"] = rep.a;
    j["filter"] = rep.filter;
    j["theoretical_exponent"] = rep.theoretical;
    j["log_factor_regime"] = rep.log_factor_regime;
    j["exact_recovery"] = rep.exact_recovery;
    j["fitted_slope"] = rep.slope ? to_json(*rep.slope) : ojson(nullptr);
    j["model_dim"] = rep.model_dim;
    j["truncated_source"] = rep.truncated_source;
    j["master_seed"] = rep.master_seed;
    ojson pts = ojson::array();
    for (const auto& p : rep.points) {
        ojson pj;
        pj["n"] = p.n;
        pj["lambda"] = p.lambda;
        pj["lambda_realized"] = p.lambda_realized;
        pj["gradient_steps"] = p.gradient_steps;
        pj["median"] = p.median;
        pj["q1"] = p.q1;
        pj["q3"] = p.q3;
        pts.push_back(std::move(pj));
    }
    j["points"] = std::move(pts);
    return j;
}

ojson to_json(const SweepReport& rep) {
    ojson j;
    j["n"] = rep.n;
    j["a"] = rep.a;
    j["argmin_index"] = rep.argmin_index;
    j["argmin_lambda"] =
        rep.points[static_cast<std::size_t>(rep.argmin_index)].lambda;
    j["ushape"] = rep.ushape;
    j["interior_argmin"] = rep.interior_argmin;
    j["nondecreasing_after_first"] = rep.nondecreasing_after_first;
    j["seed"] = rep.seed;
    ojson pts = ojson::array();
    for (const auto& p : rep.points) {
        ojson pj;
        pj["lambda"] = p.lambda;
        pj["lambda_realized"] = p.lambda_realized;
        pj["median"] = p.median;
        pj["q1"] = p.q1;
        pj["q3"] = p.q3;
        pts.push_back(std::move(pj));
    }
    j["points"] = std::move(pts);
    return j;
}

std::string rate_report_csv(const RateReport& rep) {
    CsvBuilder csv({"n", "trial", "error", "lambda_realized"});
    for (const auto& p : rep.points) {
        for (std::size_t t = 0; t < p.errors.size(); ++t) {
            csv.begin_row();
            csv.add(static_cast<long long>(p.n));
            csv.add(static_cast<long long>(t));
            csv.add(p.errors[t]);
            csv.add(p.lambda_realized);
            csv.end_row();
        }
    }
    return csv.str();
}

std::string sweep_report_csv(const SweepReport& rep) {
    CsvBuilder csv({"lambda", "lambda_realized", "median", "q1", "q3"});
    for (const auto& p : rep.points) {
        csv.begin_row();
        csv.add(p.lambda);
        csv.add(p.lambda_realized);
        csv.add(p.median);
        csv.add(p.q1);
        csv.add(p.q3);
        csv.end_row();
    }
    return csv.str();
}

std::string concentration_csv(long n, const std::vector<double>& errors) {
    CsvBuilder csv({"n", "trial", "hs_error"});
    for (std::size_t t = 0; t < errors.size(); ++t) {
        csv.begin_row();
        csv.add(static_cast<long long>(n));
        csv.add(static_cast<long long>(t));
        csv.add(errors[t]);
        csv.end_row();
    }
    return csv.str();
}

std::string bound_cells_csv(const std::vector<BoundCheckReport>& reports) {
    CsvBuilder csv({"name", "a", "lambda", "lambda_realized", "observed", "bound", "ratio"});
    for (const auto& rep : reports) {
        for (const auto& c : rep.cells) {
            csv.begin_row();
            csv.add(rep.bound_name);
            csv.add(c.a);
            csv.add(c.lambda);
            csv.add(c.lambda_realized);
            csv.add(c.observed);
            csv.add(c.bound);
            csv.add(c.ratio);
            csv.end_row();
        }
    }
    return csv.str();
}

} // namespace specreg::io
