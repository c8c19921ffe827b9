#include "spartsm/feature_map.hpp"

#include <cmath>
#include <stdexcept>

namespace spartsm {

FeatureMap FeatureMap::gaussian_pairwise(int d) {
    if (d < 1) throw std::invalid_argument("gaussian_pairwise: d must be >= 1");
    int k = d * (d + 1) / 2;
    auto eval = [d, k](const Eigen::VectorXd& x) {
        Eigen::VectorXd out(k);
        int idx = 0;
        for (int i = 0; i < d; ++i)
            for (int j = i; j < d; ++j) out[idx++] = x[i] * x[j];
        return out;
    };
    return FeatureMap(Kind::GaussianPairwise, d, k, eval);
}

FeatureMap FeatureMap::ising_pairwise(int d) {
    if (d < 2) throw std::invalid_argument("ising_pairwise: d must be >= 2");
    int k = d * (d - 1) / 2;
    auto eval = [d, k](const Eigen::VectorXd& x) {
        Eigen::VectorXd out(k);
        int idx = 0;
        for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j) out[idx++] = x[i] * x[j];
        return out;
    };
    return FeatureMap(Kind::IsingPairwise, d, k, eval);
}

FeatureMap FeatureMap::custom(int d, int k, Evaluator evaluator) {
    if (d < 1 || k < 1) throw std::invalid_argument("custom feature map: d, k must be >= 1");
    if (!evaluator) throw std::invalid_argument("custom feature map: null evaluator");
    return FeatureMap(Kind::Custom, d, k, std::move(evaluator));
}

FeatureMap FeatureMap::gaussian_univariate() {
    return custom(1, 2, [](const Eigen::VectorXd& x) {
        Eigen::VectorXd out(2);
        out[0] = x[0];
        out[1] = x[0] * x[0];
        return out;
    });
}

Eigen::VectorXd FeatureMap::operator()(const Eigen::VectorXd& x) const {
    if (x.size() != d_) throw std::invalid_argument("feature map: observation has wrong dimension");
    Eigen::VectorXd out = evaluator_(x);
    if (out.size() != k_) throw std::runtime_error("feature map: evaluator output has wrong length");
    return out;
}

Eigen::MatrixXd FeatureMap::eval_matrix(const Eigen::MatrixXd& obs) const {
    if (obs.cols() != d_) throw std::invalid_argument("feature map: observation matrix has wrong width");
    Eigen::MatrixXd out(obs.rows(), k_);
    for (Eigen::Index r = 0; r < obs.rows(); ++r) out.row(r) = (*this)(obs.row(r).transpose()).transpose();
    return out;
}

std::optional<std::pair<int, int>> FeatureMap::edge(int feature) const {
    if (feature < 0 || feature >= k_) throw std::out_of_range("feature index out of range");
    if (kind_ == Kind::Custom) return std::nullopt;
    int idx = 0;
    for (int i = 0; i < d_; ++i) {
        int j0 = (kind_ == Kind::GaussianPairwise) ? i : i + 1;
        for (int j = j0; j < d_; ++j) {
            if (idx == feature) return std::make_pair(i, j);
            ++idx;
        }
    }
    return std::nullopt;  // unreachable
}

int FeatureMap::gaussian_feature_index(int d, int i, int j) {
    if (i > j) std::swap(i, j);
    if (i < 0 || j >= d) throw std::out_of_range("gaussian_feature_index: bad pair");
    return i * d - i * (i - 1) / 2 + (j - i);
}

int FeatureMap::ising_feature_index(int d, int i, int j) {
    if (i > j) std::swap(i, j);
    if (i < 0 || j >= d || i == j) throw std::out_of_range("ising_feature_index: bad pair");
    return i * d - i * (i + 1) / 2 + (j - i - 1);
}

}  // namespace spartsm
