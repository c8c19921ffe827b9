#include "spartsm/objective.hpp"

#include <cmath>
#include <stdexcept>

namespace spartsm {

namespace {

void check_alignment(const TimedDataset::Expanded& rows, const CondExpEstimate& condexp, int k) {
    if (condexp.means.rows() != rows.obs.rows() || condexp.means.cols() != k)
        throw std::invalid_argument("objective: conditional-expectation estimate not aligned with dataset");
}

}  // namespace

double QuadraticObjective::value(const Eigen::VectorXd& a) const {
    return a.dot(H * a) + 2.0 * c.dot(a);
}

Eigen::VectorXd QuadraticObjective::gradient(const Eigen::VectorXd& a) const {
    return 2.0 * (H * a) + 2.0 * c;
}

Eigen::VectorXd QuadraticObjective::hessian_vector(const Eigen::VectorXd& a) const {
    return 2.0 * (H * a);
}

GeneralObjective::GeneralObjective(const TimedDataset& dataset, const FeatureMap& fmap,
                                   const TimeBasis& basis, const WeightFunction& w,
                                   const CondExpEstimate& condexp)
    : k_(fmap.output_dim()), b_(basis.dim()) {
    TimedDataset::Expanded rows = dataset.expand();
    check_alignment(rows, condexp, k_);
    int n = static_cast<int>(rows.obs.rows());

    features_ = fmap.eval_matrix(rows.obs);
    centered_ = features_ - condexp.means;
    weights_ = rows.weights;
    g_.resize(n);
    dg_.resize(n);
    dphi_.resize(n, b_);
    d2phi_.resize(n, b_);
    for (int i = 0; i < n; ++i) {
        double t = rows.times[i];
        g_[i] = w.g(t);
        dg_[i] = w.dg(t);
        dphi_.row(i) = basis.dphi(t).transpose();
        d2phi_.row(i) = basis.d2phi(t).transpose();
    }
}

double GeneralObjective::value(const Eigen::MatrixXd& alpha) const {
    if (alpha.rows() != b_ || alpha.cols() != k_)
        throw std::invalid_argument("objective: alpha must be basis_dim x feature_dim");
    Eigen::MatrixXd da = dphi_ * alpha;    // n x k, row i = (dphi_i^T alpha)
    Eigen::MatrixXd d2a = d2phi_ * alpha;  // n x k
    Eigen::VectorXd s = (da.cwiseProduct(centered_)).rowwise().sum();
    Eigen::VectorXd lin1 = (da.cwiseProduct(features_)).rowwise().sum();
    Eigen::VectorXd lin2 = (d2a.cwiseProduct(features_)).rowwise().sum();
    return (weights_.array() *
            (g_.array() * s.array().square() + 2.0 * dg_.array() * lin1.array() + 2.0 * g_.array() * lin2.array()))
        .sum();
}

Eigen::MatrixXd GeneralObjective::gradient(const Eigen::MatrixXd& alpha) const {
    Eigen::MatrixXd da = dphi_ * alpha;
    Eigen::VectorXd s = (da.cwiseProduct(centered_)).rowwise().sum();
    Eigen::VectorXd wgs = weights_.array() * g_.array() * s.array();
    Eigen::VectorXd wdg = weights_.array() * dg_.array();
    Eigen::VectorXd wg = weights_.array() * g_.array();
    Eigen::MatrixXd grad = 2.0 * dphi_.transpose() * wgs.asDiagonal() * centered_;
    grad.noalias() += 2.0 * dphi_.transpose() * wdg.asDiagonal() * features_;
    grad.noalias() += 2.0 * d2phi_.transpose() * wg.asDiagonal() * features_;
    return grad;
}

Eigen::MatrixXd GeneralObjective::hessian_vector(const Eigen::MatrixXd& direction) const {
    Eigen::MatrixXd db = dphi_ * direction;
    Eigen::VectorXd sb = (db.cwiseProduct(centered_)).rowwise().sum();
    Eigen::VectorXd wgs = weights_.array() * g_.array() * sb.array();
    return 2.0 * dphi_.transpose() * wgs.asDiagonal() * centered_;
}

QuadraticObjective GeneralObjective::to_quadratic() const {
    int n = static_cast<int>(features_.rows());
    int p = b_ * k_;
    QuadraticObjective obj;
    obj.n_rows = n;
    obj.k = k_;
    obj.b = b_;
    obj.features = features_;
    obj.centered = centered_;
    obj.dphi = dphi_;
    obj.d2phi = d2phi_;
    obj.g = g_;
    obj.dg = dg_;
    obj.weights = weights_;

    // H = R^T R with rows sqrt(w_i g_i) * (centered_i kron dphi_i); the
    // weights are nonnegative so H is PSD by construction.
    Eigen::MatrixXd scaled(n, p);
    Eigen::VectorXd root = (weights_.array() * g_.array()).cwiseMax(0.0).sqrt();
    for (int je = 0; je < k_; ++je)
        scaled.middleCols(static_cast<Eigen::Index>(je) * b_, b_) =
            (root.array() * centered_.col(je).array()).matrix().asDiagonal() * dphi_;
    obj.H.noalias() = scaled.transpose() * scaled;

    // c blocks: sum_i w_i f_i,je * (dg_i dphi_i + g_i d2phi_i).
    Eigen::MatrixXd lin = dg_.asDiagonal() * dphi_ + g_.asDiagonal() * d2phi_;  // n x b
    Eigen::MatrixXd cmat = features_.transpose() * weights_.asDiagonal() * lin;  // k x b
    obj.c.resize(p);
    for (int je = 0; je < k_; ++je) obj.c.segment(static_cast<Eigen::Index>(je) * b_, b_) = cmat.row(je).transpose();
    return obj;
}

QuadraticObjective build_objective(const TimedDataset& dataset, const FeatureMap& fmap,
                                   const WeightFunction& w, const CondExpEstimate& condexp) {
    return GeneralObjective(dataset, fmap, TimeBasis::linear(), w, condexp).to_quadratic();
}

GeneralObjective build_objective_general(const TimedDataset& dataset, const FeatureMap& fmap,
                                         const TimeBasis& basis, const WeightFunction& w,
                                         const CondExpEstimate& condexp) {
    return GeneralObjective(dataset, fmap, basis, w, condexp);
}

Eigen::VectorXd closed_form_minimizer(const QuadraticObjective& obj, double ridge) {
    int p = obj.dim();
    double rho = ridge;
    if (rho < 0.0) rho = 1e-10 * obj.H.trace() / p;
    Eigen::MatrixXd M = obj.H;
    M.diagonal().array() += rho;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(M);
    if (ldlt.info() != Eigen::Success) throw std::runtime_error("closed_form_minimizer: factorization failed");
    Eigen::VectorXd a = ldlt.solve(-obj.c);
    // One refinement step, then verify stationarity of the (ridged) system.
    a -= ldlt.solve(M * a + obj.c);
    double resid = 2.0 * (M * a + obj.c).norm();
    if (!(resid <= 1e-8 * (1.0 + obj.c.norm())) || !a.allFinite())
        throw std::runtime_error("closed_form_minimizer: singular system; retry with ridge > 0");
    return a;
}

Eigen::MatrixXd per_sample_gradients(const QuadraticObjective& obj, const Eigen::VectorXd& a) {
    int n = obj.n_rows;
    int p = obj.dim();
    if (a.size() != p) throw std::invalid_argument("per_sample_gradients: wrong coefficient length");

    // s_i = <a, centered_i kron dphi_i>
    Eigen::Map<const Eigen::MatrixXd> alpha(a.data(), obj.b, obj.k);
    Eigen::MatrixXd da = obj.dphi * alpha;
    Eigen::VectorXd s = (da.cwiseProduct(obj.centered)).rowwise().sum();

    Eigen::MatrixXd lin = obj.dg.asDiagonal() * obj.dphi + obj.g.asDiagonal() * obj.d2phi;  // n x b
    Eigen::VectorXd gs = obj.g.array() * s.array();
    Eigen::MatrixXd rows(n, p);
    for (int je = 0; je < obj.k; ++je) {
        rows.middleCols(static_cast<Eigen::Index>(je) * obj.b, obj.b) =
            2.0 * ((gs.array() * obj.centered.col(je).array()).matrix().asDiagonal() * obj.dphi) +
            2.0 * (obj.features.col(je).asDiagonal() * lin);
    }
    return rows;
}

}  // namespace spartsm
