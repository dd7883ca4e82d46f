#include "specreg/cli_config.hpp"

#include <algorithm>
#include <filesystem>
#include <set>
#include <stdexcept>

#include "specreg/csvio.hpp"
#include "specreg/diagnostics.hpp"
#include "specreg/estimator.hpp"
#include "specreg/harness.hpp"
#include "specreg/report_io.hpp"

namespace specreg::cli {

namespace {

namespace fs = std::filesystem;

// SAX pass that only watches object keys; nlohmann's DOM parser silently
// keeps the last duplicate, which strict mode must not allow.
class DupKeySax : public nlohmann::json::json_sax_t {
public:
    std::string duplicate;

    bool null() override { return true; }
    bool boolean(bool) override { return true; }
    bool number_integer(number_integer_t) override { return true; }
    bool number_unsigned(number_unsigned_t) override { return true; }
    bool number_float(number_float_t, const string_t&) override { return true; }
    bool string(string_t&) override { return true; }
    bool binary(binary_t&) override { return true; }
    bool start_object(std::size_t) override {
        stack_.emplace_back();
        return true;
    }
    bool key(string_t& val) override {
        if (!stack_.back().insert(val).second) {
            duplicate = val;
            return false;
        }
        return true;
    }
    bool end_object() override {
        stack_.pop_back();
        return true;
    }
    bool start_array(std::size_t) override { return true; }
    bool end_array() override { return true; }
    bool parse_error(std::size_t pos, const std::string&,
                     const nlohmann::json::exception& ex) override {
        error = std::string(ex.what()) + " at byte " + std::to_string(pos);
        return false;
    }

    std::string error;

private:
    std::vector<std::set<std::string>> stack_;
};

} // namespace

ojson parse_strict_json(const std::string& text) {
    DupKeySax sax;
    const bool ok = nlohmann::json::sax_parse(text, &sax);
    if (!sax.duplicate.empty())
        throw std::invalid_argument("config: duplicate key '" + sax.duplicate + "'");
    if (!ok)
        throw std::invalid_argument("config: " +
                                    (sax.error.empty() ? std::string("malformed JSON") : sax.error));
    return ojson::parse(text);
}

ConfigReader::ConfigReader(const ojson& obj, std::string context)
    : obj_(obj), context_(std::move(context)) {
    if (!obj_.is_object())
        throw std::invalid_argument(context_ + ": expected a JSON object");
}

bool ConfigReader::has(const std::string& key) const { return obj_.contains(key); }

ojson ConfigReader::consume(const std::string& key) {
    if (!obj_.contains(key))
        throw std::invalid_argument(context_ + ": missing required field '" + key + "'");
    consumed_.push_back(key);
    return obj_.at(key);
}

std::optional<ojson> ConfigReader::consume_optional(const std::string& key) {
    if (!obj_.contains(key)) return std::nullopt;
    consumed_.push_back(key);
    return obj_.at(key);
}

void ConfigReader::finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
        if (std::find(consumed_.begin(), consumed_.end(), it.key()) == consumed_.end())
            throw std::invalid_argument(context_ + ": unknown key '" + it.key() + "'");
    }
}

RunConfig parse_config_text(const std::string& text) {
    const ojson doc = parse_strict_json(text);
    ConfigReader top(doc, "config");
    RunConfig cfg;
    cfg.command = top.consume("command").get<std::string>();
    static const std::set<std::string> known = {"verify-filters", "fit",           "rates",
                                                "lambda-sweep",   "effective-dim", "concentration"};
    if (!known.count(cfg.command))
        throw std::invalid_argument("config: unknown command '" + cfg.command + "'");
    if (auto s = top.consume_optional("seed")) cfg.seed = s->get<std::uint64_t>();
    if (auto t = top.consume_optional("threads")) {
        cfg.threads = t->get<int>();
        if (cfg.threads < 1) throw std::invalid_argument("config: threads must be >= 1");
    }
    if (auto o = top.consume_optional("out")) cfg.out_dir = o->get<std::string>();
    cfg.params = ojson::object();
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        if (it.key() == "command" || it.key() == "seed" || it.key() == "threads" ||
            it.key() == "out")
            continue;
        cfg.params[it.key()] = it.value();
    }
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    return parse_config_text(io::read_file(path));
}

namespace {

struct FilterConfig {
    std::string kind;
    std::optional<double> tau;
    std::optional<double> eta;
    int depth = 1;
};

FilterConfig parse_filter(const ojson& j) {
    ConfigReader r(j, "filter");
    FilterConfig fc;
    fc.kind = r.consume("kind").get<std::string>();
    if (fc.kind == "spectral_cutoff") {
        if (auto t = r.consume_optional("tau")) fc.tau = t->get<double>();
    } else if (fc.kind == "gradient") {
        if (auto t = r.consume_optional("tau")) fc.tau = t->get<double>();
        if (auto e = r.consume_optional("eta")) fc.eta = e->get<double>();
    } else if (fc.kind == "iterated_ridge") {
        fc.depth = r.consume("depth").get<int>();
    } else {
        throw std::invalid_argument("filter: unknown kind '" + fc.kind + "'");
    }
    r.finish();
    return fc;
}

// tau convention for the infinite-qualification families: max(1, zeta) + 1.
double default_tau(double zeta) { return std::max(1.0, zeta) + 1.0; }

FilterSpec realize_filter(const FilterConfig& fc, double zeta, double kappa_sq) {
    if (fc.kind == "spectral_cutoff")
        return FilterSpec::spectral_cutoff(fc.tau.value_or(default_tau(zeta)));
    if (fc.kind == "gradient")
        return FilterSpec::gradient(fc.eta.value_or(1.0 / kappa_sq),
                                    fc.tau.value_or(default_tau(zeta)));
    return FilterSpec::iterated_ridge(fc.depth);
}

ojson filter_echo(const FilterSpec& f) {
    ojson j;
    j["kind"] = f.kind() == FilterKind::SpectralCutoff ? "spectral_cutoff"
                : f.kind() == FilterKind::Gradient     ? "gradient"
                                                       : "iterated_ridge";
    j["tau"] = f.qualification();
    if (f.kind() == FilterKind::Gradient) j["eta"] = f.eta();
    if (f.kind() == FilterKind::IteratedRidge) j["depth"] = f.depth();
    return j;
}

DiagonalModel parse_model(const ojson& j, ojson* echo) {
    ConfigReader r(j, "model");
    const double gamma = r.consume("gamma").get<double>();
    const double zeta = r.consume("zeta").get<double>();
    const double R = r.consume_optional("R").value_or(ojson(1.0)).get<double>();
    const int d = r.consume_optional("d").value_or(ojson(2000)).get<int>();
    const double noise = r.consume("noise_sd").get<double>();
    std::string profile = "flat_normalized";
    if (auto p = r.consume_optional("profile")) profile = p->get<std::string>();
    double ratio = 0.5;
    if (auto g = r.consume_optional("geometric_ratio")) ratio = g->get<double>();
    r.finish();
    auto model = DiagonalModel::make(gamma, zeta, R, d, noise,
                                     source_profile_from_string(profile), ratio);
    if (echo) {
        (*echo)["gamma"] = gamma;
        (*echo)["zeta"] = zeta;
        (*echo)["R"] = R;
        (*echo)["d"] = d;
        (*echo)["noise_sd"] = noise;
        (*echo)["profile"] = profile;
        if (profile == "geometric") (*echo)["geometric_ratio"] = ratio;
        (*echo)["kappa_sq"] = model.kappa_sq();
    }
    return model;
}

LambdaRule parse_lambda_rule(const ojson& j) {
    ConfigReader r(j, "lambda_rule");
    const std::string type = r.consume("type").get<std::string>();
    LambdaRule rule;
    if (type == "corollary") {
        rule = LambdaRule::corollary();
    } else if (type == "theta") {
        rule = LambdaRule::theta(r.consume("theta").get<double>());
    } else if (type == "fixed") {
        rule = LambdaRule::fixed(r.consume("lambda").get<double>());
    } else {
        throw std::invalid_argument("lambda_rule: unknown type '" + type + "'");
    }
    r.finish();
    return rule;
}

std::vector<double> parse_lambda_grid(const ojson& j, long n_for_range) {
    ConfigReader r(j, "lambda_grid");
    if (r.has("values")) {
        auto v = r.consume("values").get<std::vector<double>>();
        r.finish();
        return v;
    }
    const int count = r.consume("count").get<int>();
    double lo = 0.0, hi = 1.0;
    if (auto l = r.consume_optional("min")) lo = l->get<double>();
    else if (n_for_range > 0) lo = 1.0 / static_cast<double>(n_for_range);
    else throw std::invalid_argument("lambda_grid: missing 'min'");
    if (auto h = r.consume_optional("max")) hi = h->get<double>();
    r.finish();
    return log_spaced_grid(lo, hi, count);
}

// Collects artifacts and writes the manifest; every emitted file is listed
// with its content hash.
class ArtifactWriter {
public:
    ArtifactWriter(std::string out_dir, const RunConfig& cfg)
        : dir_(std::move(out_dir)), cfg_(cfg) {
        fs::create_directories(dir_);
    }

    void write(const std::string& name, const std::string& content) {
        io::write_file((fs::path(dir_) / name).string(), content);
        ojson entry;
        entry["file"] = name;
        entry["bytes"] = content.size();
        entry["fnv1a64"] = io::fnv1a64_hex(content);
        entries_.push_back(std::move(entry));
        names_.push_back(name);
    }

    void write_manifest(const ojson& echo) {
        ojson m;
        m["command"] = cfg_.command;
        m["seed"] = cfg_.seed;
        m["threads"] = cfg_.threads;
        m["config"] = echo;
        m["files"] = entries_;
        io::write_file((fs::path(dir_) / "manifest.json").string(), m.dump(2) + "\n");
        names_.push_back("manifest.json");
    }

    const std::vector<std::string>& names() const { return names_; }

private:
    std::string dir_;
    const RunConfig& cfg_;
    ojson entries_ = ojson::array();
    std::vector<std::string> names_;
};

ojson base_echo(const RunConfig& cfg) {
    ojson e;
    e["command"] = cfg.command;
    e["seed"] = cfg.seed;
    e["threads"] = cfg.threads;
    e["out"] = cfg.out_dir;
    return e;
}

RunOutcome run_verify_filters(const RunConfig& cfg) {
    ConfigReader r(cfg.params, "verify-filters");
    const double kappa_sq = r.consume_optional("kappa_sq").value_or(ojson(1.0)).get<double>();
    std::vector<double> gradient_taus = {1.0, 2.0};
    if (auto g = r.consume_optional("gradient_taus")) gradient_taus = g->get<std::vector<double>>();
    std::vector<int> ridge_depths = {1, 2, 3};
    if (auto d = r.consume_optional("ridge_depths")) ridge_depths = d->get<std::vector<int>>();
    const double cutoff_tau = r.consume_optional("cutoff_tau").value_or(ojson(2.0)).get<double>();
    const double eta = r.consume_optional("eta").value_or(ojson(1.0 / kappa_sq)).get<double>();
    r.finish();

    ojson echo = base_echo(cfg);
    echo["kappa_sq"] = kappa_sq;
    echo["gradient_taus"] = gradient_taus;
    echo["ridge_depths"] = ridge_depths;
    echo["cutoff_tau"] = cutoff_tau;
    echo["eta"] = eta;

    std::vector<AxiomReport> reports;
    reports.push_back(verify_filter_axioms(FilterSpec::spectral_cutoff(cutoff_tau), kappa_sq));
    for (double tau : gradient_taus)
        reports.push_back(verify_filter_axioms(FilterSpec::gradient(eta, tau), kappa_sq));
    for (int l : ridge_depths)
        reports.push_back(verify_filter_axioms(FilterSpec::iterated_ridge(l), kappa_sq));

    RunOutcome out;
    ojson arr = ojson::array();
    for (const auto& rep : reports) {
        arr.push_back(io::to_json(rep));
        out.all_pass = out.all_pass && rep.pass;
    }
    ArtifactWriter w(cfg.out_dir, cfg);
    w.write("filter_axioms.json", arr.dump(2) + "\n");
    w.write_manifest(echo);
    out.files = w.names();
    return out;
}

RunOutcome run_fit(const RunConfig& cfg) {
    ConfigReader r(cfg.params, "fit");
    const std::string data_csv = r.consume("data_csv").get<std::string>();
    const FilterConfig fc = parse_filter(r.consume("filter"));
    const double lambda = r.consume("lambda").get<double>();
    std::string mode = "auto";
    if (auto m = r.consume_optional("mode")) mode = m->get<std::string>();
    Kernel kernel = Kernel::linear();
    if (auto k = r.consume_optional("kernel")) {
        ConfigReader kr(*k, "kernel");
        const std::string type = kr.consume("type").get<std::string>();
        if (type == "linear") {
            kernel = Kernel::linear();
        } else if (type == "gaussian") {
            kernel = Kernel::gaussian(kr.consume("width").get<double>());
        } else {
            throw std::invalid_argument("kernel: unknown type '" + type + "'");
        }
        kr.finish();
    }
    r.finish();

    const Dataset data = load_dataset_csv(data_csv);
    const FilterSpec filter = realize_filter(fc, 1.0, data.kappa_sq);
    SpectralEstimator est = [&] {
        if (mode == "auto") return fit(data, filter, lambda);
        if (mode == "primal") return fit_primal(data, filter, lambda);
        if (mode == "dual") return fit_dual(data, kernel, filter, lambda);
        throw std::invalid_argument("fit: unknown mode '" + mode + "'");
    }();

    ojson echo = base_echo(cfg);
    echo["data_csv"] = data_csv;
    echo["filter"] = filter_echo(filter);
    echo["lambda"] = lambda;
    echo["mode"] = mode;

    ojson rep;
    rep["mode"] = est.mode() == SpectralEstimator::Mode::Primal ? "primal" : "dual";
    rep["n"] = data.n();
    rep["d"] = data.dim();
    rep["kappa_sq"] = data.kappa_sq;
    rep["lambda"] = est.lambda_requested();
    rep["lambda_realized"] = est.lambda();
    rep["gradient_steps"] = est.gradient_steps();
    const Eigen::VectorXd coeffs = est.mode() == SpectralEstimator::Mode::Primal
                                       ? est.primal_coefficients()
                                       : est.dual_coefficients();
    rep["coefficients"] = std::vector<double>(coeffs.data(), coeffs.data() + coeffs.size());

    io::CsvBuilder pred({"index", "y", "prediction"});
    const Eigen::VectorXd yhat = est.predict_batch(data.inputs);
    for (long i = 0; i < data.n(); ++i) {
        pred.begin_row();
        pred.add(static_cast<long long>(i));
        pred.add(data.outputs(i));
        pred.add(yhat(i));
        pred.end_row();
    }

    ArtifactWriter w(cfg.out_dir, cfg);
    w.write("fit_report.json", rep.dump(2) + "\n");
    w.write("predictions.csv", pred.str());
    w.write_manifest(echo);
    RunOutcome out;
    out.files = w.names();
    return out;
}

RunOutcome run_rates(const RunConfig& cfg) {
    ConfigReader r(cfg.params, "rates");
    ojson model_echo;
    const DiagonalModel model = parse_model(r.consume("model"), &model_echo);
    const FilterConfig fc = parse_filter(r.consume("filter"));
    std::vector<double> a_values = {0.0};
    if (auto av = r.consume_optional("a_list")) {
        a_values = av->get<std::vector<double>>();
        if (r.has("a")) throw std::invalid_argument("rates: give either 'a' or 'a_list'");
    } else if (auto a = r.consume_optional("a")) {
        a_values = {a->get<double>()};
    }
    ExperimentConfig ec;
    ec.model = model;
    ec.filter = realize_filter(fc, model.zeta(), model.kappa_sq());
    ec.n_grid = r.consume("n_grid").get<std::vector<long>>();
    ec.trials = r.consume("trials").get<int>();
    ec.rule = parse_lambda_rule(r.consume("lambda_rule"));
    ec.master_seed = cfg.seed;
    ec.threads = cfg.threads;
    std::optional<std::pair<double, double>> expect_slope;
    if (auto es = r.consume_optional("expect_slope")) {
        ConfigReader er(*es, "expect_slope");
        expect_slope = {er.consume("target").get<double>(), er.consume("tol").get<double>()};
        er.finish();
    }
    r.finish();
    ec.validate();

    const std::vector<RateReport> reports = run_rate_experiment_multi(ec, a_values);

    ojson echo = base_echo(cfg);
    echo["model"] = model_echo;
    echo["filter"] = filter_echo(ec.filter);
    echo["a_list"] = a_values;
    echo["n_grid"] = ec.n_grid;
    echo["trials"] = ec.trials;
    echo["lambda_rule"] = ec.rule.describe();

    RunOutcome out;
    ArtifactWriter w(cfg.out_dir, cfg);
    ojson arr = ojson::array();
    for (std::size_t i = 0; i < reports.size(); ++i) {
        ojson rj = io::to_json(reports[i]);
        if (expect_slope) {
            const bool ok = reports[i].slope &&
                            std::abs(reports[i].slope->slope - expect_slope->first) <=
                                expect_slope->second;
            rj["slope_within_tolerance"] = ok;
            out.all_pass = out.all_pass && ok;
        }
        arr.push_back(std::move(rj));
        w.write("rates_a" + std::to_string(i) + ".csv", io::rate_report_csv(reports[i]));
    }
    w.write("rate_report.json", arr.dump(2) + "\n");
    w.write_manifest(echo);
    out.files = w.names();
    return out;
}

RunOutcome run_lambda_sweep_cmd(const RunConfig& cfg) {
    ConfigReader r(cfg.params, "lambda-sweep");
    ojson model_echo;
    const DiagonalModel model = parse_model(r.consume("model"), &model_echo);
    const FilterConfig fc = parse_filter(r.consume("filter"));
    const long n = r.consume("n").get<long>();
    const double a = r.consume_optional("a").value_or(ojson(0.0)).get<double>();
    const int trials = r.consume("trials").get<int>();
    const auto grid = parse_lambda_grid(r.consume("lambda_grid"), n);
    const bool require_ushape =
        r.consume_optional("require_ushape").value_or(ojson(false)).get<bool>();
    r.finish();

    const FilterSpec filter = realize_filter(fc, model.zeta(), model.kappa_sq());
    const SweepReport rep =
        run_lambda_sweep(model, filter, n, grid, a, trials, cfg.seed, cfg.threads);

    ojson echo = base_echo(cfg);
    echo["model"] = model_echo;
    echo["filter"] = filter_echo(filter);
    echo["n"] = n;
    echo["a"] = a;
    echo["trials"] = trials;
    echo["lambda_grid_size"] = grid.size();
    echo["require_ushape"] = require_ushape;

    RunOutcome out;
    if (require_ushape) out.all_pass = rep.ushape && rep.interior_argmin;
    ArtifactWriter w(cfg.out_dir, cfg);
    w.write("sweep.json", io::to_json(rep).dump(2) + "\n");
    w.write("sweep.csv", io::sweep_report_csv(rep));
    w.write_manifest(echo);
    out.files = w.names();
    return out;
}

RunOutcome run_effective_dim(const RunConfig& cfg) {
    ConfigReader r(cfg.params, "effective-dim");
    ojson model_echo;
    const DiagonalModel model = parse_model(r.consume("model"), &model_echo);
    const auto grid = parse_lambda_grid(r.consume("lambda_grid"), 0);
    long empirical_n = 0;
    if (auto e = r.consume_optional("empirical_n")) empirical_n = e->get<long>();
    r.finish();

    std::optional<Eigen::VectorXd> emp_eigs;
    if (empirical_n > 0) {
        const SampleBatch batch = sample(model, empirical_n, cfg.seed);
        const Eigen::MatrixXd tx =
            scaled_gram_of_columns(batch.inputs, static_cast<double>(empirical_n));
        emp_eigs = sym_eigendecompose_lower(tx).eigenvalues;
    }

    std::vector<std::string> header = {"lambda", "model_effective_dim"};
    if (emp_eigs) header.push_back("empirical_effective_dim");
    io::CsvBuilder csv(header);
    for (double lam : grid) {
        csv.begin_row();
        csv.add(lam);
        csv.add(effective_dimension(model, lam));
        if (emp_eigs) csv.add(empirical_effective_dim(*emp_eigs, lam));
        csv.end_row();
    }

    ojson echo = base_echo(cfg);
    echo["model"] = model_echo;
    echo["lambda_grid_size"] = grid.size();
    echo["empirical_n"] = empirical_n;

    ojson rep;
    rep["c_gamma_fitted"] = fit_capacity_constant(model, grid);
    rep["gamma"] = model.gamma();
    rep["dim"] = model.dim();

    ArtifactWriter w(cfg.out_dir, cfg);
    w.write("effective_dim.csv", csv.str());
    w.write("effective_dim.json", rep.dump(2) + "\n");
    w.write_manifest(echo);
    RunOutcome out;
    out.files = w.names();
    return out;
}

RunOutcome run_concentration(const RunConfig& cfg) {
    ConfigReader r(cfg.params, "concentration");
    ojson model_echo;
    const DiagonalModel model = parse_model(r.consume("model"), &model_echo);
    const auto n_list = r.consume("n_list").get<std::vector<long>>();
    const auto deltas = r.consume("deltas").get<std::vector<double>>();
    const int trials = r.consume("trials").get<int>();
    r.finish();

    ojson echo = base_echo(cfg);
    echo["model"] = model_echo;
    echo["n_list"] = n_list;
    echo["deltas"] = deltas;
    echo["trials"] = trials;

    RunOutcome out;
    ArtifactWriter w(cfg.out_dir, cfg);
    ojson arr = ojson::array();
    std::string csv_all;
    for (std::size_t i = 0; i < n_list.size(); ++i) {
        const std::uint64_t seed_n = cfg.seed + i; // distinct stream per n
        const auto errors =
            concentration_errors(model, n_list[i], trials, seed_n, cfg.threads);
        for (double delta : deltas) {
            const auto rep =
                evaluate_concentration(errors, model.kappa_sq(), n_list[i], delta, seed_n);
            out.all_pass = out.all_pass && rep.pass;
            arr.push_back(io::to_json(rep));
        }
        const std::string csv = io::concentration_csv(n_list[i], errors);
        csv_all += i == 0 ? csv : csv.substr(csv.find('\n') + 1);
    }
    w.write("concentration.csv", csv_all);
    w.write("concentration.json", arr.dump(2) + "\n");
    w.write_manifest(echo);
    out.files = w.names();
    return out;
}

} // namespace

RunOutcome run(const RunConfig& cfg) {
    if (cfg.command == "verify-filters") return run_verify_filters(cfg);
    if (cfg.command == "fit") return run_fit(cfg);
    if (cfg.command == "rates") return run_rates(cfg);
    if (cfg.command == "lambda-sweep") return run_lambda_sweep_cmd(cfg);
    if (cfg.command == "effective-dim") return run_effective_dim(cfg);
    if (cfg.command == "concentration") return run_concentration(cfg);
    throw std::invalid_argument("run: unknown command '" + cfg.command + "'");
}

} // namespace specreg::cli
