#include "spartsm/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "spartsm/parallel.hpp"
#include "spartsm/rng.hpp"

namespace spartsm {

RocCurve roc_from_scores(const Eigen::VectorXd& scores, const std::vector<bool>& labels) {
    if (static_cast<std::size_t>(scores.size()) != labels.size())
        throw std::invalid_argument("roc_from_scores: scores/labels mismatch");
    int pos = 0, neg = 0;
    for (bool l : labels) (l ? pos : neg)++;
    if (pos == 0 || neg == 0) throw std::invalid_argument("roc_from_scores: labels need both classes");

    std::vector<Eigen::Index> order(labels.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](Eigen::Index a, Eigen::Index b) { return scores[a] > scores[b]; });

    std::vector<double> thr, fpr, tpr;
    thr.push_back(std::numeric_limits<double>::infinity());
    fpr.push_back(0.0);
    tpr.push_back(0.0);
    int tp = 0, fp = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        double s = scores[order[i]];
        // All coordinates tied at this score move in one step.
        while (i < order.size() && scores[order[i]] == s) {
            if (labels[static_cast<std::size_t>(order[i])]) ++tp;
            else ++fp;
            ++i;
        }
        thr.push_back(s);
        fpr.push_back(static_cast<double>(fp) / neg);
        tpr.push_back(static_cast<double>(tp) / pos);
    }

    RocCurve curve;
    curve.thresholds = Eigen::Map<Eigen::VectorXd>(thr.data(), static_cast<Eigen::Index>(thr.size()));
    curve.fpr = Eigen::Map<Eigen::VectorXd>(fpr.data(), static_cast<Eigen::Index>(fpr.size()));
    curve.tpr = Eigen::Map<Eigen::VectorXd>(tpr.data(), static_cast<Eigen::Index>(tpr.size()));
    curve.auc = 0.0;
    for (std::size_t s = 1; s < fpr.size(); ++s)
        curve.auc += 0.5 * (tpr[s] + tpr[s - 1]) * (fpr[s] - fpr[s - 1]);
    return curve;
}

Eigen::VectorXd lasso_entry_scores(const QuadraticObjective& obj, int n_lambdas, double ratio) {
    if (n_lambdas < 2 || !(ratio > 0.0 && ratio < 1.0))
        throw std::invalid_argument("lasso_entry_scores: bad grid");
    int p = obj.dim();
    double lambda_max = 2.0 * obj.c.cwiseAbs().maxCoeff();
    Eigen::VectorXd scores = Eigen::VectorXd::Zero(p);
    if (!(lambda_max > 0.0)) return scores;

    Eigen::MatrixXd A = 2.0 * obj.H;
    Eigen::VectorXd b = -2.0 * obj.c;
    Eigen::VectorXd warm = Eigen::VectorXd::Zero(p);
    for (int gi = 0; gi < n_lambdas; ++gi) {
        double frac = static_cast<double>(gi + 1) / n_lambdas;
        double lambda = lambda_max * std::pow(ratio, frac);
        LassoConfig cfg;
        cfg.lambda = lambda;
        cfg.tol = 1e-7;
        cfg.max_iter = 5000;
        LassoSolution sol = prox_quadratic_l1(A, b, cfg, &warm);
        warm = sol.alpha_hat;
        for (int j = 0; j < p; ++j)
            if (sol.alpha_hat[j] != 0.0 && scores[j] == 0.0) scores[j] = lambda;
    }
    return scores;
}

namespace {

// Off-diagonal (edge) features only: diagonal precision entries are constant
// in every simulated path, so edges are the detection targets.
std::pair<Eigen::VectorXd, std::vector<bool>> edge_scores_and_labels(const PrecisionPath& path,
                                                                     const FeatureMap& fmap,
                                                                     const Eigen::VectorXd& all_scores) {
    std::vector<bool> mask_labels = path.feature_labels(fmap);
    std::vector<double> scores;
    std::vector<bool> labels;
    for (int j = 0; j < fmap.output_dim(); ++j) {
        auto edge = fmap.edge(j);
        if (!edge || edge->first == edge->second) continue;
        scores.push_back(all_scores[j]);
        labels.push_back(mask_labels[static_cast<std::size_t>(j)]);
    }
    Eigen::VectorXd score_vec =
        Eigen::Map<Eigen::VectorXd>(scores.data(), static_cast<Eigen::Index>(scores.size()));
    return {score_vec, labels};
}

double auc_for_path(const PrecisionPath& path, const TimedDataset& data, RocCurve* curve) {
    FeatureMap fmap = FeatureMap::gaussian_pairwise(path.dim());
    WeightFunction w;
    CondExpConfig condexp_cfg;
    CondExpEstimate condexp = estimate_cond_exp(data, fmap, condexp_cfg);
    QuadraticObjective obj = build_objective(data, fmap, w, condexp);
    Eigen::VectorXd scores = lasso_entry_scores(obj);
    auto [edge_scores, edge_labels] = edge_scores_and_labels(path, fmap, scores);
    RocCurve roc = roc_from_scores(edge_scores, edge_labels);
    if (curve) *curve = roc;
    return roc.auc;
}

}  // namespace

double auc_linear_ggm_experiment(int d, int n, std::uint64_t seed, RocCurve* curve) {
    PrecisionPath path = ggm_linear_path(d, split_seed(seed, 101), 0.023, 0.45, /*require_nonempty=*/true);
    TimedDataset data = sample_ggm_paired(path, n, split_seed(seed, 202));
    return auc_for_path(path, data, curve);
}

double auc_truncated_ggm_experiment(int d, int n, std::uint64_t seed, RocCurve* curve) {
    PrecisionPath path = ggm_linear_path(d, split_seed(seed, 101), 0.023, 0.45, /*require_nonempty=*/true);
    TimedDataset data = sample_truncated_ggm(path, n, split_seed(seed, 202));
    return auc_for_path(path, data, curve);
}

int inference_target_feature(int d) { return FeatureMap::gaussian_feature_index(d, 0, 1); }

std::vector<InferenceReport> ggm_inference_replications(InferenceDesign design, int d, int n, int R,
                                                        double effect, std::uint64_t root_seed,
                                                        const InferenceOptions& base_opts) {
    if (R < 1) throw std::invalid_argument("ggm_inference_replications: R must be >= 1");
    Eigen::MatrixXd theta0 = build_theta0(d, Theta0Style::Inference, split_seed(root_seed, 0));
    FeatureMap fmap = FeatureMap::gaussian_pairwise(d);
    WeightFunction w;

    InferenceOptions opts = base_opts;
    if (opts.targets.empty()) opts.targets = {inference_target_feature(d)};

    PrecisionPath det_path = design == InferenceDesign::Deterministic
                                 ? inference_deterministic_path(theta0, effect)
                                 : PrecisionPath::make(theta0, {});

    std::vector<InferenceReport> reports(static_cast<std::size_t>(R));
    parallel_for(static_cast<std::size_t>(R), [&](std::size_t r) {
        std::uint64_t data_seed = split_seed(root_seed, 2 * r + 1);
        const PrecisionPath* path = &det_path;
        PrecisionPath local_path = det_path;
        if (design == InferenceDesign::Random) {
            local_path = inference_random_path(theta0, split_seed(root_seed, 2 * r + 2), effect);
            path = &local_path;
        }
        TimedDataset data = sample_ggm_paired(*path, n, data_seed);
        reports[r] = run_pipeline(data, fmap, w, opts);
    });
    return reports;
}

CoverageResult coverage_experiment(const std::function<TimedDataset(std::uint64_t)>& generator,
                                   const FeatureMap& fmap, double alpha_star_j, int R, double level,
                                   int target, std::uint64_t root_seed,
                                   const InferenceOptions& base_opts) {
    if (R < 1) throw std::invalid_argument("coverage_experiment: R must be >= 1");
    if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("coverage_experiment: bad level");
    InferenceOptions opts = base_opts;
    opts.delta = 1.0 - level;
    opts.targets = {target};
    WeightFunction w;

    std::vector<char> missed(static_cast<std::size_t>(R), 0);
    parallel_for(static_cast<std::size_t>(R), [&](std::size_t r) {
        TimedDataset data = generator(split_seed(root_seed, r));
        InferenceReport rep = run_pipeline(data, fmap, w, opts);
        const CoordinateInference& ci = rep.coords.front();
        missed[r] = (alpha_star_j < ci.ci_lo || alpha_star_j > ci.ci_hi) ? 1 : 0;
    });

    CoverageResult res;
    res.replications = R;
    res.misses = static_cast<int>(std::count(missed.begin(), missed.end(), 1));
    res.miss_rate = static_cast<double>(res.misses) / R;
    return res;
}

CoverageResult ggm_coverage_experiment(InferenceDesign design, int d, int n, int R, double level,
                                       std::uint64_t root_seed) {
    InferenceOptions opts;
    opts.delta = 1.0 - level;
    auto reports = ggm_inference_replications(design, d, n, R, /*effect=*/0.0, root_seed, opts);
    CoverageResult res;
    res.replications = R;
    for (const auto& rep : reports) {
        const CoordinateInference& ci = rep.coords.front();
        if (0.0 < ci.ci_lo || 0.0 > ci.ci_hi) ++res.misses;
    }
    res.miss_rate = static_cast<double>(res.misses) / R;
    return res;
}

std::vector<PowerPoint> power_curve(const Eigen::VectorXd& effect_grid, int R, double level,
                                    std::uint64_t root_seed, int d, int n) {
    if (effect_grid.size() < 1) throw std::invalid_argument("power_curve: empty grid");
    InferenceOptions opts;
    opts.delta = 1.0 - level;
    std::vector<PowerPoint> out(static_cast<std::size_t>(effect_grid.size()));
    for (Eigen::Index e = 0; e < effect_grid.size(); ++e) {
        auto reports = ggm_inference_replications(InferenceDesign::Deterministic, d, n, R,
                                                  effect_grid[e], split_seed(root_seed, 7000 + e), opts);
        int rejects = 0;
        for (const auto& rep : reports)
            if (rep.coords.front().reject) ++rejects;
        out[static_cast<std::size_t>(e)] = {effect_grid[e], static_cast<double>(rejects) / R};
    }
    return out;
}

NormalityResult normality_check(const Eigen::VectorXd& residuals) {
    Eigen::Index R = residuals.size();
    if (R < 50) throw std::invalid_argument("normality_check: need R >= 50");
    Eigen::VectorXd sorted = residuals;
    std::sort(sorted.data(), sorted.data() + R);

    NormalityResult res;
    res.ks_stat = 0.0;
    for (Eigen::Index i = 0; i < R; ++i) {
        double cdf = normal_cdf(sorted[i]);
        double hi = static_cast<double>(i + 1) / R;
        double lo = static_cast<double>(i) / R;
        res.ks_stat = std::max({res.ks_stat, std::abs(cdf - hi), std::abs(cdf - lo)});
    }
    res.pass_at_1pct = res.ks_stat < 1.628 / std::sqrt(static_cast<double>(R));
    res.qq_points.resize(R, 2);
    for (Eigen::Index i = 0; i < R; ++i) {
        res.qq_points(i, 0) = normal_quantile((i + 0.5) / static_cast<double>(R));
        res.qq_points(i, 1) = sorted[i];
    }
    return res;
}

TimedDataset mean_shift_series(int n, double level_jump, double t_change, std::uint64_t seed) {
    if (n < 4) throw std::invalid_argument("mean_shift_series: n too small");
    auto rng = make_rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd t(n);
    Eigen::MatrixXd obs(n, 1);
    for (int i = 0; i < n; ++i) {
        t[i] = (i + 0.5) / n;
        double mu = t[i] < t_change ? 0.0 : level_jump;
        obs(i, 0) = mu + gauss(rng);
    }
    return TimedDataset::paired(t, obs, 0.0, 1.0);
}

ChangeReport univariate_change_report(const TimedDataset& series, const ChangepointRunConfig& cfg) {
    TimedDataset binned =
        series.layout() == TimedDataset::Layout::Paired ? bin_paired(series, cfg.bins) : series;
    FeatureMap fmap = FeatureMap::gaussian_univariate();
    TimeBasis basis = TimeBasis::fourier(cfg.fourier_b);
    WeightFunction w;
    CondExpConfig condexp;
    DiffParamFit fit = fit_diff_param(binned, fmap, basis, w, condexp, cfg.lambda);
    NullCovariance nullcov = null_covariance(binned, fmap, basis, w);
    return detect_changes(fit, nullcov, default_grid(cfg.grid), cfg.delta, cfg.eps_sp, cfg.eps_pp);
}

CvResult cv_select(const TimedDataset& dataset, const FeatureMap& fmap, const WeightFunction& w,
                   const std::vector<double>& bandwidth_grid, const std::vector<double>& lambda_grid,
                   int n_folds) {
    if (dataset.layout() != TimedDataset::Layout::Paired)
        throw std::invalid_argument("cv_select: paired dataset required");
    if (bandwidth_grid.empty() || lambda_grid.empty()) throw std::invalid_argument("cv_select: empty grid");
    int n = dataset.n_rows();
    if (n_folds < 2 || n_folds > n) throw std::invalid_argument("cv_select: bad fold count");

    const Eigen::VectorXd& times = dataset.times();
    const Eigen::MatrixXd& obs = dataset.observations();
    Eigen::MatrixXd features = fmap.eval_matrix(obs);

    CvResult best;
    best.loss = std::numeric_limits<double>::infinity();
    for (double h : bandwidth_grid) {
        for (double lambda : lambda_grid) {
            double total_loss = 0.0;
            for (int fold = 0; fold < n_folds; ++fold) {
                std::vector<Eigen::Index> train, val;
                // Every n_folds-th point (in time order) is held out, so the
                // validation set spans the whole time range.
                for (int i = 0; i < n; ++i) ((i % n_folds == fold) ? val : train).push_back(i);
                if (val.size() < 2 || train.size() < 2) continue;

                Eigen::MatrixXd obs_tr(static_cast<Eigen::Index>(train.size()), obs.cols());
                Eigen::VectorXd t_tr(static_cast<Eigen::Index>(train.size()));
                for (std::size_t i = 0; i < train.size(); ++i) {
                    obs_tr.row(static_cast<Eigen::Index>(i)) = obs.row(train[i]);
                    t_tr[static_cast<Eigen::Index>(i)] = times[train[i]];
                }
                TimedDataset ds_tr = TimedDataset::paired(t_tr, obs_tr, 0.0, 1.0);
                CondExpConfig cc;
                cc.bandwidth = h;
                CondExpEstimate ce = estimate_cond_exp(ds_tr, fmap, cc);
                QuadraticObjective obj = build_objective(ds_tr, fmap, w, ce);
                LassoConfig cfg;
                cfg.lambda = lambda;
                Eigen::VectorXd alpha = lasso_minimize(obj, cfg).alpha_hat;

                // Validation loss: unpenalized objective with bin-mean
                // centering (no kernel smoothing on the held-out part).
                Eigen::MatrixXd obs_val(static_cast<Eigen::Index>(val.size()), obs.cols());
                Eigen::VectorXd t_val(static_cast<Eigen::Index>(val.size()));
                for (std::size_t i = 0; i < val.size(); ++i) {
                    obs_val.row(static_cast<Eigen::Index>(i)) = obs.row(val[i]);
                    t_val[static_cast<Eigen::Index>(i)] = times[val[i]];
                }
                TimedDataset ds_val = TimedDataset::paired(t_val, obs_val, 0.0, 1.0);
                CondExpConfig vcc;
                vcc.method = CondExpConfig::Method::Binned;
                vcc.n_bins = std::min<int>(20, static_cast<int>(val.size()));
                CondExpEstimate vce = estimate_cond_exp(ds_val, fmap, vcc);
                QuadraticObjective vobj = build_objective(ds_val, fmap, w, vce);
                total_loss += vobj.value(alpha);
            }
            if (total_loss < best.loss) best = {h, lambda, total_loss};
        }
    }
    return best;
}

}  // namespace spartsm
