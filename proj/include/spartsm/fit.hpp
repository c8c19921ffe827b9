#pragma once

#include <Eigen/Dense>

#include "spartsm/condexp.hpp"
#include "spartsm/dataset.hpp"
#include "spartsm/diff_param.hpp"
#include "spartsm/feature_map.hpp"
#include "spartsm/objective.hpp"
#include "spartsm/solver.hpp"
#include "spartsm/time_basis.hpp"
#include "spartsm/weight_function.hpp"

namespace spartsm {

/// A fitted differential-parameter model plus solver diagnostics.
struct DiffParamFit {
    DiffParam param;
    double lambda = 0.0;
    int iterations = 0;
    bool converged = true;
    double subgradient_gap = 0.0;
    std::vector<int> support;  // indices into vec(alpha), basis index fastest

    Eigen::VectorXd evaluate(double t) const { return param.evaluate(t); }
};

/// Conditional expectation -> objective -> l1 fit (closed form when
/// lambda == 0, with the default ridge escape hatch).
DiffParamFit fit_diff_param(const TimedDataset& dataset, const FeatureMap& fmap, const TimeBasis& basis,
                            const WeightFunction& w, const CondExpConfig& condexp_cfg, double lambda,
                            const LassoConfig& solver_cfg = {});

}  // namespace spartsm
