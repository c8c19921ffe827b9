#include "spartsm/commands.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <sstream>

#include "spartsm/changepoint.hpp"
#include "spartsm/evaluate.hpp"
#include "spartsm/io.hpp"
#include "spartsm/rng.hpp"
#include "spartsm/simulate.hpp"

namespace spartsm::cli {

using nlohmann::json;

std::string current_timestamp() {
    auto now = std::chrono::system_clock::now();
    std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

namespace {

void check_keys(const json& j, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* key : allowed)
            if (it.key() == key) {
                known = true;
                break;
            }
        if (!known) throw ConfigError("unknown config key: " + it.key());
    }
}

template <typename T>
void read_key(const json& j, const char* key, T& out) {
    if (j.contains(key)) {
        try {
            out = j.at(key).get<T>();
        } catch (const json::exception&) {
            throw ConfigError(std::string("bad value for config key: ") + key);
        }
    }
}

void read_domain(const json& j, std::optional<std::pair<double, double>>& out) {
    if (!j.contains("domain")) return;
    const json& dom = j.at("domain");
    if (!dom.is_array() || dom.size() != 2 || !dom[0].is_number() || !dom[1].is_number())
        throw ConfigError("domain must be [lo, hi]");
    out = std::make_pair(dom[0].get<double>(), dom[1].get<double>());
}

json domain_json(const std::optional<std::pair<double, double>>& domain) {
    if (!domain) return nullptr;
    return json{domain->first, domain->second};
}

}  // namespace

json to_json(const SimulateConfig& c) {
    return json{{"command", "simulate"}, {"model", c.model},   {"d", c.d},
                {"n", c.n},              {"grouped", c.grouped}, {"m", c.m},
                {"block_n", c.block_n},  {"seed", c.seed},     {"p", c.p},
                {"effect", c.effect},    {"mu0", c.mu0},       {"mu1", c.mu1},
                {"sigma0", c.sigma0},    {"sigma1", c.sigma1}, {"out", c.out},
                {"truth_out", c.truth_out}};
}

SimulateConfig simulate_config_from_json(const json& j) {
    check_keys(j, {"command", "model", "d", "n", "grouped", "m", "block_n", "seed", "p", "effect",
                   "mu0", "mu1", "sigma0", "sigma1", "out", "truth_out"});
    SimulateConfig c;
    read_key(j, "model", c.model);
    read_key(j, "d", c.d);
    read_key(j, "n", c.n);
    read_key(j, "grouped", c.grouped);
    read_key(j, "m", c.m);
    read_key(j, "block_n", c.block_n);
    read_key(j, "seed", c.seed);
    read_key(j, "p", c.p);
    read_key(j, "effect", c.effect);
    read_key(j, "mu0", c.mu0);
    read_key(j, "mu1", c.mu1);
    read_key(j, "sigma0", c.sigma0);
    read_key(j, "sigma1", c.sigma1);
    read_key(j, "out", c.out);
    read_key(j, "truth_out", c.truth_out);
    return c;
}

json to_json(const FitConfig& c) {
    return json{{"command", "fit"},     {"data", c.data},       {"grouped", c.grouped},
                {"domain", domain_json(c.domain)}, {"family", c.family}, {"basis", c.basis},
                {"bandwidth", c.bandwidth}, {"bins", c.bins},   {"lambda", c.lambda},
                {"seed", c.seed},        {"out", c.out}};
}

FitConfig fit_config_from_json(const json& j) {
    check_keys(j, {"command", "data", "grouped", "domain", "family", "basis", "bandwidth", "bins",
                   "lambda", "seed", "out"});
    FitConfig c;
    read_key(j, "data", c.data);
    read_key(j, "grouped", c.grouped);
    if (j.contains("domain") && !j.at("domain").is_null()) read_domain(j, c.domain);
    read_key(j, "family", c.family);
    read_key(j, "basis", c.basis);
    read_key(j, "bandwidth", c.bandwidth);
    read_key(j, "bins", c.bins);
    read_key(j, "lambda", c.lambda);
    read_key(j, "seed", c.seed);
    read_key(j, "out", c.out);
    return c;
}

json to_json(const InferConfig& c) {
    return json{{"command", "infer"},   {"data", c.data},       {"grouped", c.grouped},
                {"domain", domain_json(c.domain)}, {"family", c.family},
                {"bandwidth", c.bandwidth}, {"lambda", c.lambda}, {"lambda_j", c.lambda_j},
                {"targets", c.targets},  {"level", c.level},    {"seed", c.seed},
                {"out", c.out}};
}

InferConfig infer_config_from_json(const json& j) {
    check_keys(j, {"command", "data", "grouped", "domain", "family", "bandwidth", "lambda", "lambda_j",
                   "targets", "level", "seed", "out"});
    InferConfig c;
    read_key(j, "data", c.data);
    read_key(j, "grouped", c.grouped);
    if (j.contains("domain") && !j.at("domain").is_null()) read_domain(j, c.domain);
    read_key(j, "family", c.family);
    read_key(j, "bandwidth", c.bandwidth);
    read_key(j, "lambda", c.lambda);
    read_key(j, "lambda_j", c.lambda_j);
    read_key(j, "targets", c.targets);
    read_key(j, "level", c.level);
    read_key(j, "seed", c.seed);
    read_key(j, "out", c.out);
    return c;
}

json to_json(const ChangepointConfig& c) {
    return json{{"command", "changepoint"}, {"data", c.data},    {"grouped", c.grouped},
                {"domain", domain_json(c.domain)}, {"family", c.family}, {"basis", c.basis},
                {"bins", c.bins},           {"lambda", c.lambda}, {"delta", c.delta},
                {"eps_sp", c.eps_sp},       {"eps_pp", c.eps_pp}, {"grid", c.grid},
                {"seed", c.seed},           {"out", c.out},      {"stat_csv", c.stat_csv}};
}

ChangepointConfig changepoint_config_from_json(const json& j) {
    check_keys(j, {"command", "data", "grouped", "domain", "family", "basis", "bins", "lambda", "delta",
                   "eps_sp", "eps_pp", "grid", "seed", "out", "stat_csv"});
    ChangepointConfig c;
    read_key(j, "data", c.data);
    read_key(j, "grouped", c.grouped);
    if (j.contains("domain") && !j.at("domain").is_null()) read_domain(j, c.domain);
    read_key(j, "family", c.family);
    read_key(j, "basis", c.basis);
    read_key(j, "bins", c.bins);
    read_key(j, "lambda", c.lambda);
    read_key(j, "delta", c.delta);
    read_key(j, "eps_sp", c.eps_sp);
    read_key(j, "eps_pp", c.eps_pp);
    read_key(j, "grid", c.grid);
    read_key(j, "seed", c.seed);
    read_key(j, "out", c.out);
    read_key(j, "stat_csv", c.stat_csv);
    return c;
}

json to_json(const EvalConfig& c) {
    return json{{"command", "eval"},  {"task", c.task},       {"design", c.design},
                {"d", c.d},           {"n", c.n},             {"replications", c.replications},
                {"seeds", c.seeds},   {"level", c.level},     {"effects", c.effects},
                {"seed", c.seed},     {"out_dir", c.out_dir}};
}

EvalConfig eval_config_from_json(const json& j) {
    check_keys(j, {"command", "task", "design", "d", "n", "replications", "seeds", "level", "effects",
                   "seed", "out_dir"});
    EvalConfig c;
    read_key(j, "task", c.task);
    read_key(j, "design", c.design);
    read_key(j, "d", c.d);
    read_key(j, "n", c.n);
    read_key(j, "replications", c.replications);
    read_key(j, "seeds", c.seeds);
    read_key(j, "level", c.level);
    read_key(j, "effects", c.effects);
    read_key(j, "seed", c.seed);
    read_key(j, "out_dir", c.out_dir);
    return c;
}

namespace {

FeatureMap family_for(const std::string& family, int d) {
    if (family == "gaussian") return FeatureMap::gaussian_pairwise(d);
    if (family == "ising") return FeatureMap::ising_pairwise(d);
    if (family == "gaussian1d") {
        if (d != 1) throw ConfigError("gaussian1d family needs 1 observation column");
        return FeatureMap::gaussian_univariate();
    }
    if (family == "auto") return d == 1 ? FeatureMap::gaussian_univariate() : FeatureMap::gaussian_pairwise(d);
    throw ConfigError("unknown family: " + family);
}

TimeBasis parse_basis(const std::string& text) {
    if (text == "linear") return TimeBasis::linear();
    if (text.rfind("fourier:", 0) == 0) {
        int b = 0;
        try {
            b = std::stoi(text.substr(8));
        } catch (const std::exception&) {
            throw ConfigError("bad basis spec: " + text);
        }
        if (b < 2 || b % 2 != 0) throw ConfigError("fourier basis dimension must be a positive even count");
        return TimeBasis::fourier(b);
    }
    throw ConfigError("unknown basis: " + text);
}

TimedDataset load_dataset(const std::string& path, bool grouped,
                          const std::optional<std::pair<double, double>>& domain) {
    if (path.empty()) throw ConfigError("no dataset file given");
    CsvData csv = read_dataset_csv(path);
    return dataset_from_csv(csv, grouped, domain);
}

json mask_json(const PrecisionPath& path) {
    json arr = json::array();
    for (const auto& [i, j] : path.change_mask()) arr.push_back(json{i, j});
    return arr;
}

void write_truth(const std::string& path, json truth, std::uint64_t seed) {
    truth["seed"] = seed;
    write_text_file(path, truth.dump(2) + "\n");
}

}  // namespace

void cmd_simulate(const SimulateConfig& cfg) {
    if (cfg.d < 1) throw ConfigError("simulate: d must be >= 1");
    if (cfg.n < 2) throw ConfigError("simulate: n must be >= 2");
    if (cfg.grouped && cfg.m < 2) throw ConfigError("simulate: grouped output needs m >= 2 blocks");

    auto write_ggm = [&](const PrecisionPath& path, const char* change_kind, json params) {
        TimedDataset data =
            cfg.grouped ? sample_ggm_grouped(path, cfg.m, cfg.block_n > 0 ? cfg.block_n : cfg.n / cfg.m,
                                             split_seed(cfg.seed, 11))
                        : sample_ggm_paired(path, cfg.n, split_seed(cfg.seed, 11));
        TimedDataset::Expanded rows = data.expand();
        write_dataset_csv(cfg.out, rows.times, rows.obs);
        write_truth(cfg.truth_out,
                    json{{"model", cfg.model}, {"mask", mask_json(path)}, {"change_kind", change_kind},
                         {"params", params}},
                    cfg.seed);
    };

    if (cfg.model == "ggm-sine") {
        double p = cfg.p >= 0.0 ? cfg.p : 0.02;
        PrecisionPath path = ggm_sine_path(cfg.d, cfg.seed, p);
        write_ggm(path, "sine", json{{"p", p}, {"amp", 0.5}, {"freq", 10.0}});
    } else if (cfg.model == "ggm-linear") {
        double p = cfg.p >= 0.0 ? cfg.p : 0.023;
        PrecisionPath path = ggm_linear_path(cfg.d, cfg.seed, p, 0.45, true);
        write_ggm(path, "linear", json{{"p", p}, {"slope", 0.45}});
    } else if (cfg.model == "ggm-inference-det") {
        Eigen::MatrixXd theta0 = build_theta0(cfg.d, Theta0Style::Inference, split_seed(cfg.seed, 0));
        PrecisionPath path = inference_deterministic_path(theta0, cfg.effect);
        write_ggm(path, "linear", json{{"effect", cfg.effect}});
    } else if (cfg.model == "ggm-inference-random") {
        double p = cfg.p >= 0.0 ? cfg.p : 0.2;
        Eigen::MatrixXd theta0 = build_theta0(cfg.d, Theta0Style::Inference, split_seed(cfg.seed, 0));
        PrecisionPath path = inference_random_path(theta0, split_seed(cfg.seed, 1), cfg.effect, p);
        write_ggm(path, "linear", json{{"effect", cfg.effect}, {"p", p}});
    } else if (cfg.model == "trunc-ggm") {
        double p = cfg.p >= 0.0 ? cfg.p : 0.023;
        PrecisionPath path = ggm_linear_path(cfg.d, cfg.seed, p, 0.45, true);
        TimedDataset data = sample_truncated_ggm(path, cfg.n, split_seed(cfg.seed, 11));
        write_dataset_csv(cfg.out, data.times(), data.observations());
        write_truth(cfg.truth_out,
                    json{{"model", cfg.model}, {"mask", mask_json(path)}, {"change_kind", "linear"},
                         {"params", json{{"p", p}, {"slope", 0.45}}}},
                    cfg.seed);
    } else if (cfg.model == "ising") {
        double p = cfg.p >= 0.0 ? cfg.p : 0.05;
        double slope = cfg.effect != 0.0 ? cfg.effect : 2.0;
        auto rng = make_rng(split_seed(cfg.seed, 1));
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        std::vector<std::pair<int, int>> mask;
        for (int i = 0; i < cfg.d; ++i)
            for (int j = i + 1; j < cfg.d; ++j)
                if (unif(rng) < p) mask.emplace_back(i, j);
        auto coupling = [&, mask, slope](double t) {
            Eigen::MatrixXd J = Eigen::MatrixXd::Zero(cfg.d, cfg.d);
            for (const auto& [i, j] : mask) {
                J(i, j) = slope * t;
                J(j, i) = slope * t;
            }
            return J;
        };
        TimedDataset data = sample_ising_path(coupling, cfg.d, cfg.n, split_seed(cfg.seed, 11));
        write_dataset_csv(cfg.out, data.times(), data.observations());
        json mask_arr = json::array();
        for (const auto& [i, j] : mask) mask_arr.push_back(json{i, j});
        write_truth(cfg.truth_out,
                    json{{"model", cfg.model}, {"mask", mask_arr}, {"change_kind", "linear"},
                         {"params", json{{"p", p}, {"slope", slope}}}},
                    cfg.seed);
    } else if (cfg.model == "gaussian1d") {
        GaussianOracle fam = gaussian_oracle_family(GaussianOracle::Kind::TimeMeanTimeVar, cfg.mu0,
                                                    cfg.mu1, cfg.sigma0, cfg.sigma1);
        TimedDataset data = fam.sample(cfg.n, split_seed(cfg.seed, 11));
        write_dataset_csv(cfg.out, data.times(), data.observations());
        write_truth(cfg.truth_out,
                    json{{"model", cfg.model}, {"mask", json::array()}, {"change_kind", "gaussian1d"},
                         {"params", json{{"mu0", cfg.mu0}, {"mu1", cfg.mu1}, {"sigma0", cfg.sigma0},
                                         {"sigma1", cfg.sigma1}}}},
                    cfg.seed);
    } else {
        throw ConfigError("unknown simulate model: " + cfg.model);
    }
}

void cmd_fit(const FitConfig& cfg) {
    TimedDataset data = load_dataset(cfg.data, cfg.grouped, cfg.domain);
    if (cfg.bins > 0 && data.layout() == TimedDataset::Layout::Paired) data = bin_paired(data, cfg.bins);
    FeatureMap fmap = family_for(cfg.family, data.dim());
    TimeBasis basis = parse_basis(cfg.basis);
    WeightFunction w;

    double lambda = cfg.lambda;
    if (lambda < 0.0) lambda = default_lambdas(data.n_rows(), fmap.output_dim()).first;

    CondExpConfig condexp;
    condexp.bandwidth = cfg.bandwidth;
    DiffParamFit fit = fit_diff_param(data, fmap, basis, w, condexp, lambda);
    write_text_file(cfg.out, fit_json(fit, fmap, current_timestamp()));
}

void cmd_infer(const InferConfig& cfg) {
    TimedDataset data = load_dataset(cfg.data, cfg.grouped, cfg.domain);
    FeatureMap fmap = family_for(cfg.family, data.dim());
    if (!(cfg.level > 0.0 && cfg.level < 1.0)) throw ConfigError("infer: level must be in (0,1)");

    InferenceOptions opts;
    opts.condexp.bandwidth = cfg.bandwidth;
    opts.lambda_lasso = cfg.lambda;
    opts.lambda_j = cfg.lambda_j;
    opts.delta = 1.0 - cfg.level;
    for (const std::string& spec : cfg.targets) {
        auto dash = spec.find('-');
        try {
            if (dash == std::string::npos) {
                opts.targets.push_back(std::stoi(spec));
            } else {
                int i = std::stoi(spec.substr(0, dash)) - 1;
                int j = std::stoi(spec.substr(dash + 1)) - 1;
                if (fmap.kind() == FeatureMap::Kind::IsingPairwise)
                    opts.targets.push_back(FeatureMap::ising_feature_index(data.dim(), i, j));
                else
                    opts.targets.push_back(FeatureMap::gaussian_feature_index(data.dim(), i, j));
            }
        } catch (const std::exception&) {
            throw ConfigError("bad target spec: " + spec);
        }
    }

    WeightFunction w;
    InferenceReport report = run_pipeline(data, fmap, w, opts);
    write_text_file(cfg.out, inference_report_json(report, fmap, current_timestamp()));
}

void cmd_changepoint(const ChangepointConfig& cfg) {
    TimedDataset data = load_dataset(cfg.data, cfg.grouped, cfg.domain);
    if (data.layout() == TimedDataset::Layout::Paired) {
        if (cfg.bins < 2) throw ConfigError("changepoint: bins must be >= 2 for paired data");
        data = bin_paired(data, cfg.bins);
    }
    FeatureMap fmap = family_for(cfg.family, data.dim());
    TimeBasis basis = parse_basis(cfg.basis);
    WeightFunction w;
    if (cfg.grid < 2) throw ConfigError("changepoint: grid must be >= 2");
    if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) throw ConfigError("changepoint: delta must be in (0,1)");

    CondExpConfig condexp;
    DiffParamFit fit = fit_diff_param(data, fmap, basis, w, condexp, cfg.lambda);
    NullCovariance nullcov = null_covariance(data, fmap, basis, w);
    ChangeReport report =
        detect_changes(fit, nullcov, default_grid(cfg.grid), cfg.delta, cfg.eps_sp, cfg.eps_pp);
    write_text_file(cfg.out, change_report_json(report, current_timestamp()));
    write_text_file(cfg.stat_csv, change_stat_csv(report));
}

void cmd_eval(const EvalConfig& cfg) {
    if (cfg.replications < 1 || cfg.seeds < 1) throw ConfigError("eval: counts must be >= 1");
    if (!(cfg.level > 0.0 && cfg.level < 1.0)) throw ConfigError("eval: level must be in (0,1)");
    std::string dir = cfg.out_dir.empty() ? "." : cfg.out_dir;
    std::string stamp = current_timestamp();

    if (cfg.task == "roc") {
        bool truncated = cfg.design == "truncated";
        if (!truncated && cfg.design != "linear") throw ConfigError("eval roc: design must be linear|truncated");
        json aucs = json::array();
        double mean = 0.0;
        RocCurve first_curve;
        for (int s = 0; s < cfg.seeds; ++s) {
            RocCurve* curve = s == 0 ? &first_curve : nullptr;
            double auc = truncated
                             ? auc_truncated_ggm_experiment(cfg.d, cfg.n, split_seed(cfg.seed, s), curve)
                             : auc_linear_ggm_experiment(cfg.d, cfg.n, split_seed(cfg.seed, s), curve);
            aucs.push_back(auc);
            mean += auc;
        }
        mean /= cfg.seeds;
        std::ostringstream roc_csv;
        roc_csv << "threshold,fpr,tpr\n";
        for (Eigen::Index i = 0; i < first_curve.fpr.size(); ++i)
            roc_csv << first_curve.thresholds[i] << "," << first_curve.fpr[i] << ","
                    << first_curve.tpr[i] << "\n";
        write_text_file(dir + "/roc_points.csv", roc_csv.str());
        write_text_file(dir + "/roc_summary.json",
                        json{{"task", "roc"}, {"design", cfg.design}, {"d", cfg.d}, {"n", cfg.n},
                             {"aucs", aucs},  {"mean_auc", mean},     {"timestamp", stamp}}
                                .dump(2) +
                            "\n");
    } else if (cfg.task == "coverage") {
        InferenceDesign design =
            cfg.design == "random" ? InferenceDesign::Random : InferenceDesign::Deterministic;
        if (cfg.design != "random" && cfg.design != "deterministic")
            throw ConfigError("eval coverage: design must be deterministic|random");
        CoverageResult res =
            ggm_coverage_experiment(design, cfg.d, cfg.n, cfg.replications, cfg.level, cfg.seed);
        write_text_file(dir + "/coverage_summary.json",
                        json{{"task", "coverage"}, {"design", cfg.design}, {"d", cfg.d}, {"n", cfg.n},
                             {"replications", res.replications}, {"level", cfg.level},
                             {"misses", res.misses}, {"miss_rate", res.miss_rate}, {"timestamp", stamp}}
                                .dump(2) +
                            "\n");
    } else if (cfg.task == "power") {
        if (cfg.effects.empty()) throw ConfigError("eval power: empty effect grid");
        Eigen::VectorXd grid = Eigen::Map<const Eigen::VectorXd>(cfg.effects.data(),
                                                                 static_cast<Eigen::Index>(cfg.effects.size()));
        auto points = power_curve(grid, cfg.replications, cfg.level, cfg.seed, cfg.d, cfg.n);
        std::ostringstream csv;
        csv << "effect,rejection_rate\n";
        json arr = json::array();
        for (const auto& pt : points) {
            csv << pt.effect << "," << pt.rejection_rate << "\n";
            arr.push_back(json{{"effect", pt.effect}, {"rejection_rate", pt.rejection_rate}});
        }
        write_text_file(dir + "/power_points.csv", csv.str());
        write_text_file(dir + "/power_summary.json",
                        json{{"task", "power"}, {"d", cfg.d}, {"n", cfg.n},
                             {"replications", cfg.replications}, {"level", cfg.level}, {"points", arr},
                             {"timestamp", stamp}}
                                .dump(2) +
                            "\n");
    } else if (cfg.task == "normality") {
        InferenceOptions opts;
        auto reports = ggm_inference_replications(InferenceDesign::Deterministic, cfg.d, cfg.n,
                                                  cfg.replications, 0.0, cfg.seed, opts);
        Eigen::VectorXd residuals =
            standardized_residuals(reports, inference_target_feature(cfg.d), 0.0);
        NormalityResult res = normality_check(residuals);
        std::ostringstream csv;
        csv << "normal_quantile,residual\n";
        for (Eigen::Index i = 0; i < res.qq_points.rows(); ++i)
            csv << res.qq_points(i, 0) << "," << res.qq_points(i, 1) << "\n";
        write_text_file(dir + "/qq_points.csv", csv.str());
        write_text_file(dir + "/normality_summary.json",
                        json{{"task", "normality"}, {"d", cfg.d}, {"n", cfg.n},
                             {"replications", cfg.replications}, {"ks_stat", res.ks_stat},
                             {"pass_at_1pct", res.pass_at_1pct}, {"timestamp", stamp}}
                                .dump(2) +
                            "\n");
    } else {
        throw ConfigError("unknown eval task: " + cfg.task);
    }
}

}  // namespace spartsm::cli
