#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <utility>

namespace spartsm {

/// Sufficient-statistic map f : R^d -> R^k of the exponential family.
///
/// Pairwise feature indices use a fixed row-major upper-triangular layout so
/// that edge (i,j) <-> feature index is stable across runs:
///   GaussianPairwise (i <= j, diagonal included):
///     (0,0),(0,1),...,(0,d-1),(1,1),...,(d-1,d-1), k = d(d+1)/2
///   IsingPairwise (i < j, diagonal excluded since x_i^2 = x_i on {0,1}):
///     (0,1),...,(0,d-1),(1,2),...,(d-2,d-1),       k = d(d-1)/2
class FeatureMap {
public:
    enum class Kind { GaussianPairwise, IsingPairwise, Custom };

    using Evaluator = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

    static FeatureMap gaussian_pairwise(int d);
    static FeatureMap ising_pairwise(int d);
    static FeatureMap custom(int d, int k, Evaluator evaluator);
    /// f(x) = [x, x^2] for scalar observations (univariate Gaussian family).
    static FeatureMap gaussian_univariate();

    Kind kind() const { return kind_; }
    int input_dim() const { return d_; }
    int output_dim() const { return k_; }

    Eigen::VectorXd operator()(const Eigen::VectorXd& x) const;
    /// n x d observation matrix -> n x k feature matrix.
    Eigen::MatrixXd eval_matrix(const Eigen::MatrixXd& obs) const;

    /// (i,j) pair of a pairwise feature index; nullopt for Custom maps.
    std::optional<std::pair<int, int>> edge(int feature) const;

    static int gaussian_feature_index(int d, int i, int j);
    static int ising_feature_index(int d, int i, int j);

private:
    FeatureMap(Kind kind, int d, int k, Evaluator evaluator)
        : kind_(kind), d_(d), k_(k), evaluator_(std::move(evaluator)) {}

    Kind kind_;
    int d_;
    int k_;
    Evaluator evaluator_;
};

}  // namespace spartsm
