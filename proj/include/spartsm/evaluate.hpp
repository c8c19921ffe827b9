#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "spartsm/changepoint.hpp"
#include "spartsm/inference.hpp"
#include "spartsm/simulate.hpp"

namespace spartsm {

struct RocCurve {
    Eigen::VectorXd thresholds;
    Eigen::VectorXd fpr, tpr;
    double auc = 0.0;
};

/// Standard threshold sweep (ties grouped into one step), AUC by trapezoid.
/// Needs at least one positive and one negative label.
RocCurve roc_from_scores(const Eigen::VectorXd& scores, const std::vector<bool>& labels);

/// Entry-time scores along a 30-point log-spaced lambda path from the
/// all-zero threshold 2||c||_inf downwards: score_j is the largest lambda at
/// which coordinate j is active (0 if it never enters).
Eigen::VectorXd lasso_entry_scores(const QuadraticObjective& obj, int n_lambdas = 30,
                                   double ratio = 1e-3);

/// SparTSM AUC for time-varying edge detection (off-diagonal features only)
/// on the random linear-ramp GGM; *curve receives the ROC curve when given.
double auc_linear_ggm_experiment(int d, int n, std::uint64_t seed, RocCurve* curve = nullptr);
/// Same task on the positively truncated GGM.
double auc_truncated_ggm_experiment(int d, int n, std::uint64_t seed, RocCurve* curve = nullptr);

enum class InferenceDesign { Deterministic, Random };

/// Inference-design GGM replications: theta0 drawn once from the root seed;
/// the Random design redraws the nuisance change mask every replication. The
/// tested edge (1,2) ramps with the given effect (0 = stationary null).
std::vector<InferenceReport> ggm_inference_replications(InferenceDesign design, int d, int n, int R,
                                                        double effect, std::uint64_t root_seed,
                                                        const InferenceOptions& base_opts);

/// Feature index of the tested edge (1,2) in the GaussianPairwise layout.
int inference_target_feature(int d);

struct CoverageResult {
    double miss_rate = 0.0;
    int misses = 0;
    int replications = 0;
};

/// Fraction of level-confidence intervals that miss alpha_star_j across R
/// fresh datasets from the generator (seeded per replication).
CoverageResult coverage_experiment(const std::function<TimedDataset(std::uint64_t)>& generator,
                                   const FeatureMap& fmap, double alpha_star_j, int R, double level,
                                   int target, std::uint64_t root_seed, const InferenceOptions& base_opts);

/// Coverage of the stationary edge (1,2) in the inference-design GGM.
CoverageResult ggm_coverage_experiment(InferenceDesign design, int d, int n, int R, double level,
                                       std::uint64_t root_seed);

struct PowerPoint {
    double effect = 0.0;
    double rejection_rate = 0.0;
};

/// Rejection rate of H0: alpha*_j = 0 for the edge (1,2) as its ramp slope
/// sweeps the effect grid (deterministic inference design).
std::vector<PowerPoint> power_curve(const Eigen::VectorXd& effect_grid, int R, double level,
                                    std::uint64_t root_seed, int d = 20, int n = 400);

struct NormalityResult {
    double ks_stat = 0.0;
    bool pass_at_1pct = false;
    /// rows (normal quantile, sorted residual)
    Eigen::MatrixXd qq_points;
};

/// Kolmogorov-Smirnov distance of the residuals to N(0,1); passes below the
/// asymptotic 1% critical value 1.628/sqrt(R). Needs R >= 50.
NormalityResult normality_check(const Eigen::VectorXd& residuals);

/// Equispaced univariate Gaussian series whose mean jumps from 0 to
/// level_jump at t_change (sd 1 throughout).
TimedDataset mean_shift_series(int n, double level_jump, double t_change, std::uint64_t seed);

struct ChangepointRunConfig {
    int bins = 20;
    int fourier_b = 4;
    double lambda = 0.0;
    double delta = 0.05;
    double eps_sp = 0.01;
    double eps_pp = 0.02;
    int grid = 200;
};

/// Bin -> unregularized Fourier fit -> plug-in null covariance -> detector,
/// on a univariate series with f(x) = [x, x^2].
ChangeReport univariate_change_report(const TimedDataset& series, const ChangepointRunConfig& cfg);

/// Grid-search (bandwidth, lambda) selection: stratified-by-time folds, fit
/// on the training part, score with the unpenalized objective on the held-out
/// part centered by bin means (no kernel smoothing in the validation loss).
struct CvResult {
    double bandwidth = 0.0;
    double lambda = 0.0;
    double loss = 0.0;
};
CvResult cv_select(const TimedDataset& dataset, const FeatureMap& fmap, const WeightFunction& w,
                   const std::vector<double>& bandwidth_grid, const std::vector<double>& lambda_grid,
                   int n_folds = 5);

}  // namespace spartsm
