#pragma once

#include <Eigen/Dense>

#include "spartsm/condexp.hpp"
#include "spartsm/dataset.hpp"
#include "spartsm/feature_map.hpp"
#include "spartsm/time_basis.hpp"
#include "spartsm/weight_function.hpp"

namespace spartsm {

/// The sample time-score-matching objective. For any basis the objective is
/// quadratic in the stacked coefficient vector a = vec(alpha) (basis index
/// fastest, feature blocks contiguous):
///
///     L(a) = a^T H a + 2 c^T a      (modulo the data-only constant)
///
/// with H = sum_i w_i g_i r_i r_i^T,  r_i = centered_f_i (x) dphi(t_i),
/// and  c = sum_i w_i  f_i (x) (dg_i * dphi(t_i) + g_i * d2phi(t_i)).
/// For the linear basis this is the familiar k-dimensional form
/// H = F~^T G F~ / n, c = F^T dG 1 / n.
struct QuadraticObjective {
    Eigen::MatrixXd H;  // p x p, p = b*k
    Eigen::VectorXd c;  // p

    int n_rows = 0;
    int k = 0;  // feature dimension
    int b = 1;  // basis dimension

    // Per-row data kept for per-sample gradients and the covariance step.
    Eigen::MatrixXd features;  // n_rows x k
    Eigen::MatrixXd centered;  // n_rows x k
    Eigen::MatrixXd dphi;      // n_rows x b
    Eigen::MatrixXd d2phi;     // n_rows x b
    Eigen::VectorXd g, dg;     // n_rows
    Eigen::VectorXd weights;   // n_rows, sums to 1

    int dim() const { return static_cast<int>(c.size()); }

    double value(const Eigen::VectorXd& a) const;
    Eigen::VectorXd gradient(const Eigen::VectorXd& a) const;
    /// Hessian of L is the constant 2H.
    Eigen::VectorXd hessian_vector(const Eigen::VectorXd& a) const;
};

/// Linear-basis objective over the k feature coordinates.
QuadraticObjective build_objective(const TimedDataset& dataset, const FeatureMap& fmap,
                                   const WeightFunction& w, const CondExpEstimate& condexp);

/// Objective for an arbitrary differentiable basis; evaluates value, gradient
/// and Hessian-vector products on b x k coefficient matrices without
/// materializing the (bk)^2 quadratic form until asked for.
class GeneralObjective {
public:
    GeneralObjective(const TimedDataset& dataset, const FeatureMap& fmap, const TimeBasis& basis,
                     const WeightFunction& w, const CondExpEstimate& condexp);

    int feature_dim() const { return k_; }
    int basis_dim() const { return b_; }

    double value(const Eigen::MatrixXd& alpha) const;
    Eigen::MatrixXd gradient(const Eigen::MatrixXd& alpha) const;
    Eigen::MatrixXd hessian_vector(const Eigen::MatrixXd& direction) const;

    /// Materializes the stacked-coefficient quadratic form.
    QuadraticObjective to_quadratic() const;

private:
    int k_, b_;
    Eigen::MatrixXd features_, centered_, dphi_, d2phi_;
    Eigen::VectorXd g_, dg_, weights_;
};

GeneralObjective build_objective_general(const TimedDataset& dataset, const FeatureMap& fmap,
                                         const TimeBasis& basis, const WeightFunction& w,
                                         const CondExpEstimate& condexp);

/// argmin of a^T H a + 2 c^T a, i.e. -(H + ridge I)^{-1} c. Throws if the
/// (possibly ridged) system is numerically singular. ridge < 0 picks the
/// default 1e-10 * trace(H) / p escape hatch.
Eigen::VectorXd closed_form_minimizer(const QuadraticObjective& obj, double ridge = 0.0);

/// Row i = grad_a m(x_i, t_i) at the given coefficients; the weighted mean of
/// the rows equals the objective gradient.
Eigen::MatrixXd per_sample_gradients(const QuadraticObjective& obj, const Eigen::VectorXd& a);

}  // namespace spartsm
