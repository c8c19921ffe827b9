#include "spartsm/inference.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spartsm/parallel.hpp"

namespace spartsm {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("normal_quantile: p must be in (0,1)");
    // Acklam's rational approximation, polished with one Newton step.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                               1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                               6.680131188771972e+01,  -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                               -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                               3.754408661907416e+00};
    const double plow = 0.02425, phigh = 1.0 - plow;
    double x;
    if (p < plow) {
        double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= phigh) {
        double q = p - 0.5, r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
    if (pdf > 1e-300) x -= (normal_cdf(x) - p) / pdf;
    return x;
}

double debias(const Eigen::VectorXd& alpha_hat, const Eigen::VectorXd& omega_j,
              const Eigen::VectorXd& grad_at_hat, int j) {
    if (j < 0 || j >= alpha_hat.size()) throw std::invalid_argument("debias: bad index");
    if (omega_j.size() != grad_at_hat.size()) throw std::invalid_argument("debias: size mismatch");
    if (!alpha_hat.allFinite() || !omega_j.allFinite() || !grad_at_hat.allFinite())
        throw std::invalid_argument("debias: non-finite input");
    return alpha_hat[j] - omega_j.dot(grad_at_hat);
}

Eigen::MatrixXd empirical_gradient_covariance(const Eigen::MatrixXd& per_sample_grads) {
    Eigen::Index n = per_sample_grads.rows();
    if (n < 2) throw std::invalid_argument("empirical_gradient_covariance: need n >= 2");
    Eigen::RowVectorXd mean = per_sample_grads.colwise().mean();
    Eigen::MatrixXd centered = per_sample_grads.rowwise() - mean;
    return (centered.transpose() * centered) / static_cast<double>(n);
}

double sigma_hat(const Eigen::VectorXd& omega, const Eigen::MatrixXd& Sigma, bool* clamped) {
    if (omega.size() != Sigma.rows() || Sigma.rows() != Sigma.cols())
        throw std::invalid_argument("sigma_hat: size mismatch");
    double quad = omega.dot(Sigma * omega);
    if (quad < -1e-10) throw std::runtime_error("sigma_hat: covariance quadratic form is negative");
    double s = std::sqrt(std::max(quad, 0.0));
    bool clamp = s < 1e-12;
    if (clamped) *clamped = clamp;
    return std::max(s, 1e-12);
}

double sigma_scaled_lambda(const QuadraticObjective& obj, const Eigen::VectorXd& alpha, double delta) {
    if (delta < 0.0) throw std::invalid_argument("sigma_scaled_lambda: delta must be >= 0");
    Eigen::MatrixXd psg = per_sample_gradients(obj, alpha);
    Eigen::MatrixXd cov = empirical_gradient_covariance(psg);
    double sigma = std::sqrt(std::max(cov.diagonal().maxCoeff(), 0.0));
    double logk = std::log(static_cast<double>(obj.dim()));
    return 2.0 * sigma * (std::sqrt(2.0 * logk / obj.n_rows) + delta);
}

namespace {

// sigma_hat via scalar projections omega^T grad_i; identical to forming the
// full covariance but O(n p) instead of O(n p^2).
double sigma_hat_projected(const Eigen::VectorXd& omega, const Eigen::MatrixXd& per_sample_grads,
                           bool* clamped) {
    Eigen::VectorXd proj = per_sample_grads * omega;
    double mean = proj.mean();
    double quad = (proj.array() - mean).square().sum() / static_cast<double>(proj.size());
    double s = std::sqrt(std::max(quad, 0.0));
    bool clamp = s < 1e-12;
    if (clamped) *clamped = clamp;
    return std::max(s, 1e-12);
}

}  // namespace

InferenceReport run_pipeline(const TimedDataset& dataset, const FeatureMap& fmap,
                             const WeightFunction& w, const InferenceOptions& opts) {
    const int k = fmap.output_dim();
    const int n = dataset.n_rows();

    std::vector<int> targets = opts.targets;
    if (targets.empty()) {
        if (k > 465)
            throw std::invalid_argument(
                "run_pipeline: pass explicit targets for k > 465 (one quadratic program per coordinate)");
        targets.resize(static_cast<std::size_t>(k));
        for (int j = 0; j < k; ++j) targets[static_cast<std::size_t>(j)] = j;
    }
    for (int j : targets)
        if (j < 0 || j >= k) throw std::invalid_argument("run_pipeline: target out of range");

    CondExpEstimate condexp = estimate_cond_exp(dataset, fmap, opts.condexp);
    QuadraticObjective obj = build_objective(dataset, fmap, w, condexp);

    auto [auto_lasso, auto_j] = default_lambdas(n, k);
    (void)auto_j;
    double lambda_lasso = opts.lambda_lasso >= 0.0 ? opts.lambda_lasso : auto_lasso;
    double lambda_j = opts.lambda_j >= 0.0 ? opts.lambda_j : lambda_lasso;

    LassoConfig fit_cfg = opts.solver;
    fit_cfg.lambda = lambda_lasso;
    LassoSolution fit = lasso_minimize(obj, fit_cfg);

    Eigen::VectorXd grad = obj.gradient(fit.alpha_hat);
    // Per-sample covariance with uniform row weights: exact for paired data
    // and for grouped data with equal block sizes (both have uniform expanded
    // weights); unequal blocks get the same unweighted treatment.
    Eigen::MatrixXd psg = per_sample_gradients(obj, fit.alpha_hat);

    InferenceReport rep;
    rep.n = n;
    rep.k = k;
    rep.lambda_lasso = lambda_lasso;
    rep.lambda_j = lambda_j;
    rep.delta = opts.delta;
    rep.lasso_converged = fit.converged;
    rep.alpha_hat_full = fit.alpha_hat;
    rep.coords.resize(targets.size());

    const double zq = normal_quantile(1.0 - opts.delta / 2.0);
    const double sqrt_n = std::sqrt(static_cast<double>(n));

    parallel_for(targets.size(), [&](std::size_t idx) {
        int j = targets[idx];
        LassoSolution omega = solve_inverse_hessian_column(obj, j, lambda_j, opts.solver);

        CoordinateInference ci;
        ci.feature = j;
        ci.alpha_hat = fit.alpha_hat[j];
        ci.omega_converged = omega.converged;
        ci.alpha_tilde = debias(fit.alpha_hat, omega.alpha_hat, grad, j);
        ci.sigma_hat = sigma_hat_projected(omega.alpha_hat, psg, &ci.sigma_clamped);
        ci.z = sqrt_n * ci.alpha_tilde / ci.sigma_hat;
        double half = zq * ci.sigma_hat / sqrt_n;
        ci.ci_lo = ci.alpha_tilde - half;
        ci.ci_hi = ci.alpha_tilde + half;
        ci.reject = (0.0 < ci.ci_lo) || (0.0 > ci.ci_hi);
        rep.coords[idx] = ci;
    });

    return rep;
}

Eigen::VectorXd standardized_residuals(const std::vector<InferenceReport>& reps, int target,
                                       double alpha_star_j) {
    if (reps.size() < 2) throw std::invalid_argument("standardized_residuals: need >= 2 replications");
    Eigen::VectorXd out(static_cast<Eigen::Index>(reps.size()));
    for (std::size_t r = 0; r < reps.size(); ++r) {
        const InferenceReport& rep = reps[r];
        const CoordinateInference* hit = nullptr;
        for (const auto& ci : rep.coords)
            if (ci.feature == target) {
                hit = &ci;
                break;
            }
        if (!hit) throw std::invalid_argument("standardized_residuals: target missing from report");
        out[static_cast<Eigen::Index>(r)] =
            std::sqrt(static_cast<double>(rep.n)) * (hit->alpha_tilde - alpha_star_j) / hit->sigma_hat;
    }
    return out;
}

}  // namespace spartsm
