#include "spartsm/fit.hpp"

namespace spartsm {

DiffParamFit fit_diff_param(const TimedDataset& dataset, const FeatureMap& fmap, const TimeBasis& basis,
                            const WeightFunction& w, const CondExpConfig& condexp_cfg, double lambda,
                            const LassoConfig& solver_cfg) {
    CondExpEstimate condexp = estimate_cond_exp(dataset, fmap, condexp_cfg);
    QuadraticObjective obj = build_objective_general(dataset, fmap, basis, w, condexp).to_quadratic();

    DiffParamFit fit;
    fit.lambda = lambda;
    Eigen::VectorXd a;
    if (lambda == 0.0) {
        a = closed_form_minimizer(obj, -1.0);  // default ridge escape hatch
        fit.converged = true;
        fit.iterations = 0;
        fit.subgradient_gap = obj.gradient(a).cwiseAbs().maxCoeff();
        for (int j = 0; j < obj.dim(); ++j)
            if (a[j] != 0.0) fit.support.push_back(j);
    } else {
        LassoConfig cfg = solver_cfg;
        cfg.lambda = lambda;
        LassoSolution sol = lasso_minimize(obj, cfg);
        a = sol.alpha_hat;
        fit.converged = sol.converged;
        fit.iterations = sol.iterations;
        fit.subgradient_gap = sol.final_subgradient_gap;
        fit.support = sol.support;
    }

    Eigen::Map<const Eigen::MatrixXd> alpha(a.data(), basis.dim(), fmap.output_dim());
    fit.param = DiffParam(alpha, basis);
    return fit;
}

}  // namespace spartsm
