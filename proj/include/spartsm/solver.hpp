#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "spartsm/objective.hpp"

namespace spartsm {

struct LassoConfig {
    double lambda = 0.0;
    int max_iter = 10000;
    /// Relative change of the iterate that counts as stationary.
    double tol = 1e-8;
    bool acceleration = true;
    /// When set, receives the regularized objective value after every
    /// iteration (monotone by construction).
    std::vector<double>* objective_trace = nullptr;
};

struct LassoSolution {
    Eigen::VectorXd alpha_hat;
    int iterations = 0;
    bool converged = false;
    /// max_j distance of the gradient coordinate from the l1 subdifferential.
    double final_subgradient_gap = 0.0;
    std::vector<int> support;
};

inline double soft_threshold(double v, double tau) {
    if (v > tau) return v - tau;
    if (v < -tau) return v + tau;
    return 0.0;
}

/// Proximal-gradient minimization of 1/2 x^T A x - b^T x + lambda ||x||_1
/// for symmetric PSD A, from a zero start (or x0 when given, for path
/// sweeps). Step size is 0.95 / lmax(A) with lmax estimated by 100 power
/// iterations.
LassoSolution prox_quadratic_l1(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const LassoConfig& cfg,
                                const Eigen::VectorXd* x0 = nullptr);

/// SparTSM fit: argmin a^T H a + 2 c^T a + lambda ||a||_1.
LassoSolution lasso_minimize(const QuadraticObjective& obj, const LassoConfig& cfg);

/// Column j of the inverse Hessian (2H)^{-1}, estimated through
/// argmin 1/2 w^T (2H) w - w_j + lambda_j ||w||_1.
LassoSolution solve_inverse_hessian_column(const QuadraticObjective& obj, int j, double lambda_j,
                                           const LassoConfig& cfg);

/// KKT residual of the l1-regularized quadratic at x (0 iff optimal).
double kkt_residual(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, double lambda,
                    const Eigen::VectorXd& x);

/// (lambda_lasso, lambda_j) defaults: sqrt(2 log k / n) for the fit and
/// sqrt(max(s_omega_j,1) log k / n) for the inverse-Hessian columns.
std::pair<double, double> default_lambdas(int n, int k, int s_omega_j = 1);

}  // namespace spartsm
