#pragma once

#include <Eigen/Dense>
#include <stdexcept>

#include "spartsm/time_basis.hpp"

namespace spartsm {

/// Estimated differential parameter dtheta(t) = alpha^T dphi(t), alpha b x k.
struct DiffParam {
    Eigen::MatrixXd alpha;  // b x k
    TimeBasis basis = TimeBasis::linear();

    DiffParam() = default;
    DiffParam(Eigen::MatrixXd a, TimeBasis b) : alpha(std::move(a)), basis(std::move(b)) {
        if (alpha.rows() != basis.dim()) throw std::invalid_argument("DiffParam: alpha rows != basis dim");
    }

    int feature_dim() const { return static_cast<int>(alpha.cols()); }

    Eigen::VectorXd evaluate(double t) const { return alpha.transpose() * basis.dphi(t); }
};

inline Eigen::VectorXd eval_diff_param(const DiffParam& dp, double t) { return dp.evaluate(t); }

}  // namespace spartsm
