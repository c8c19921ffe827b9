#pragma once

#include <Eigen/Dense>
#include <vector>

#include "spartsm/dataset.hpp"
#include "spartsm/feature_map.hpp"
#include "spartsm/fit.hpp"
#include "spartsm/time_basis.hpp"
#include "spartsm/weight_function.hpp"

namespace spartsm {

/// Plug-in covariance of dtheta_hat(t) under the stationarity null, from the
/// per-block moments of the objective's gradient and Hessian:
///   Var[vec(alpha_hat)] = Sigma_A^{-1} Sigma_B Sigma_A^{-1},
///   Sigma_A = sum_j mean_j[grad^2 m],  Sigma_B = sum_j Var_j[grad m] / n_j,
///   Cov[dtheta_hat(t)] = dphi~(t)^T Var[vec(alpha_hat)] dphi~(t)
/// with dphi~(t) the block-diagonal stacking of dphi(t) per feature.
class NullCovariance {
public:
    NullCovariance(Eigen::MatrixXd sigma_a, Eigen::MatrixXd sigma_b, TimeBasis basis, int k,
                   bool ridged);

    const Eigen::MatrixXd& sigma_a() const { return sigma_a_; }
    const Eigen::MatrixXd& sigma_b() const { return sigma_b_; }
    const Eigen::MatrixXd& var_alpha() const { return var_alpha_; }
    bool ridged() const { return ridged_; }
    int feature_dim() const { return k_; }

    /// k x k covariance of dtheta_hat(t).
    Eigen::MatrixXd dtheta_cov(double t) const;
    /// Per-coordinate standard error at t.
    Eigen::VectorXd dtheta_se(double t) const;

private:
    Eigen::MatrixXd sigma_a_, sigma_b_, var_alpha_;
    TimeBasis basis_;
    int k_, b_;
    bool ridged_;
};

/// Estimates the null moments from a grouped (or pre-binned) dataset; every
/// block needs at least two samples. A singular Sigma_A gets the
/// 1e-8 * trace / dim ridge and sets the ridged flag.
NullCovariance null_covariance(const TimedDataset& dataset, const FeatureMap& fmap,
                               const TimeBasis& basis, const WeightFunction& w);

struct ChangeInterval {
    double lo = 0.0, hi = 0.0;
    int dominant_coord = 0;
    int sign = 0;
    double max_stat = 0.0;
};

struct ChangeReport {
    Eigen::VectorXd grid;
    /// grid x k standardized statistics |dtheta_hat_j(t)| / se_j(t).
    Eigen::MatrixXd stat;
    double threshold = 0.0;
    std::vector<ChangeInterval> raw_intervals;
    std::vector<ChangeInterval> filtered_intervals;
};

/// Small-peak filter (drop intervals narrower than eps_sp) followed by the
/// peak-proximity filter (merge intervals closer than eps_pp). Input must be
/// sorted and disjoint; applying the rules twice changes nothing.
std::vector<ChangeInterval> filter_intervals(const std::vector<ChangeInterval>& raw, double eps_sp,
                                             double eps_pp);

/// Threshold crossings of the standardized statistic at level delta, with the
/// eps filters applied to the raw crossing intervals.
ChangeReport detect_changes(const DiffParamFit& fit, const NullCovariance& nullcov,
                            const Eigen::VectorXd& grid, double delta = 0.01, double eps_sp = 0.01,
                            double eps_pp = 0.02);

/// n equispaced points spanning [0,1].
Eigen::VectorXd default_grid(int n = 200);

}  // namespace spartsm
