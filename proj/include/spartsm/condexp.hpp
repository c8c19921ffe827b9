#pragma once

#include <Eigen/Dense>

#include "spartsm/dataset.hpp"
#include "spartsm/feature_map.hpp"

namespace spartsm {

/// How to estimate the time-conditional feature mean E_{q_t}[f(x)].
struct CondExpConfig {
    enum class Method { NadarayaWatson, GroupMean, Binned };

    Method method = Method::NadarayaWatson;
    /// Gaussian-kernel bandwidth; <= 0 picks the Silverman-style default
    /// h = 1.06 * sd(times) * n^{-1/5}.
    double bandwidth = 0.0;
    /// Exclude the own sample from the kernel sum (cross-validation use).
    bool leave_one_out = false;
    /// Bin count for Method::Binned.
    int n_bins = 20;
};

/// Nadaraya-Watson smoother: row i is the kernel-weighted average of the
/// feature rows at query time times[i]. Weights are nonnegative and sum to
/// one, so every output row is a convex combination of the inputs.
Eigen::MatrixXd nw_cond_exp(const Eigen::MatrixXd& features, const Eigen::VectorXd& times,
                            double bandwidth, bool leave_one_out = false);

double silverman_bandwidth(const Eigen::VectorXd& times);

/// Exact per-block feature means of a grouped dataset, m x k.
Eigen::MatrixXd group_cond_exp(const TimedDataset& dataset, const FeatureMap& fmap);

/// Partition a paired dataset into consecutive equal-width time bins; each
/// block's stamp is the bin midpoint and empty bins are dropped.
TimedDataset bin_paired(const TimedDataset& dataset, int n_bins);

/// Conditional-expectation estimate aligned with a dataset's expanded rows.
struct CondExpEstimate {
    CondExpConfig::Method method = CondExpConfig::Method::GroupMean;
    /// n_rows x k, one estimate per expanded observation row.
    Eigen::MatrixXd means;
    double bandwidth_used = 0.0;
};

/// Evaluates the configured estimator on a dataset (grouped datasets always
/// use exact block means; Binned applies to paired data only).
CondExpEstimate estimate_cond_exp(const TimedDataset& dataset, const FeatureMap& fmap,
                                  const CondExpConfig& cfg);

/// Wraps externally supplied (e.g. exact-moment) means for the objective.
CondExpEstimate cond_exp_from_matrix(Eigen::MatrixXd means);

}  // namespace spartsm
