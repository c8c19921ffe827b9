#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "spartsm/dataset.hpp"
#include "spartsm/feature_map.hpp"

namespace spartsm {

/// One time-varying entry of a precision path, mirrored at (j,i).
struct ChangeEntry {
    enum class Kind { Sine, LinearRamp };
    int i = 0, j = 0;
    Kind kind = Kind::LinearRamp;
    /// Sine amplitude or ramp slope.
    double magnitude = 0.0;
    /// Sine angular frequency.
    double freq = 10.0;

    double value(double t) const;
    double derivative(double t) const;
};

/// Theta(t) = Theta0 + Theta'(t): a dense symmetric base plus sparse
/// time-varying entries. Construction verifies positive definiteness on a
/// 50-point grid over [0,1].
class PrecisionPath {
public:
    static PrecisionPath make(Eigen::MatrixXd theta0, std::vector<ChangeEntry> changes);

    int dim() const { return static_cast<int>(theta0_.rows()); }
    const Eigen::MatrixXd& theta0() const { return theta0_; }
    const std::vector<ChangeEntry>& changes() const { return changes_; }

    Eigen::MatrixXd evaluate(double t) const;
    /// Entrywise time derivative of Theta(t).
    Eigen::MatrixXd dtheta(double t) const;
    /// (i,j) pairs (i < j) carrying a time-varying entry.
    std::vector<std::pair<int, int>> change_mask() const;

    /// Ground-truth differential natural parameter in feature space for the
    /// GaussianPairwise layout: -dTheta_ij for i<j, -dTheta_ii/2 on the
    /// diagonal (from q ~ exp(-x^T Theta x / 2)).
    Eigen::VectorXd feature_dtheta(const FeatureMap& fmap, double t) const;
    /// Per-feature labels: true iff the feature's edge is in the change mask.
    std::vector<bool> feature_labels(const FeatureMap& fmap) const;

private:
    Eigen::MatrixXd theta0_;
    std::vector<ChangeEntry> changes_;
};

enum class Theta0Style { Estimation, Inference };

/// Dense symmetric PD-friendly base precision matrix.
/// Estimation: standard-normal A, off-diagonal of A^T A / (2d), diagonal 2.
/// Inference: uniform(0,1) A, off-diagonal of 0.01 A^T A, diagonal 12.
/// diag_override > 0 replaces the style's diagonal value.
Eigen::MatrixXd build_theta0(int d, Theta0Style style, std::uint64_t seed, double diag_override = 0.0);

/// Random sine-varying GGM: Bernoulli(p) mask of off-diagonal edges, each
/// varying as amp*sin(freq t).
PrecisionPath ggm_sine_path(int d, std::uint64_t seed, double p = 0.02, double amp = 0.5,
                            double freq = 10.0);

/// Random linear-ramp GGM: Bernoulli(p) mask, entries slope*t. When
/// require_nonempty is set, the whole mask is redrawn (with successive
/// sub-seeds) until at least one edge changes.
PrecisionPath ggm_linear_path(int d, std::uint64_t seed, double p = 0.023, double slope = 0.45,
                              bool require_nonempty = false);

/// Fixed inference design: chain edges (i,i+1), i >= 2, and spokes (1,3),
/// (1,4), (1,5) ramp with slope 1 (1-based); the tested edge (1,2) ramps with
/// slope target_slope and stays stationary at 0.
PrecisionPath inference_deterministic_path(Eigen::MatrixXd theta0, double target_slope);

/// Random inference design: every off-diagonal edge except (1,2) ramps with
/// slope 1 w.p. p; edge (1,2) ramps with slope target_slope.
PrecisionPath inference_random_path(Eigen::MatrixXd theta0, std::uint64_t mask_seed,
                                    double target_slope, double p = 0.2);

/// Paired draws: t_i ~ U(0,1) sorted, x_i ~ N(0, Theta(t_i)^{-1}).
TimedDataset sample_ggm_paired(const PrecisionPath& path, int n, std::uint64_t seed);

/// Grouped draws: m equispaced bin-midpoint stamps, n_per samples each.
TimedDataset sample_ggm_grouped(const PrecisionPath& path, int m, int n_per, std::uint64_t seed);

struct TruncationStats {
    long attempts = 0;
    long accepted = 0;
    double acceptance_rate() const { return attempts > 0 ? static_cast<double>(accepted) / attempts : 0.0; }
};

/// Rejection sampling of the positively truncated GGM (all coordinates > 0).
/// Aborts if a 10^4-draw pilot sees acceptance below 1e-4.
TimedDataset sample_truncated_ggm(const PrecisionPath& path, int n, std::uint64_t seed,
                                  TruncationStats* stats = nullptr);

/// Pairwise Ising draws over {0,1}^d with q_t ~ exp(sum_{i<j} J_ij(t) x_i x_j).
/// coupling(t) returns the symmetric J matrix (diagonal ignored). Each sample
/// runs an independent Gibbs chain: 50 burn-in sweeps plus n_sweeps sweeps
/// from a random start, site order reshuffled per sweep from the seed.
TimedDataset sample_ising_path(const std::function<Eigen::MatrixXd(double)>& coupling, int d, int n,
                               std::uint64_t seed, int n_sweeps = 200);

/// Univariate Gaussian family with closed-form time score, used as the exact
/// oracle for the score model: mu(t) = mu0 + mu1 t, sigma(t) = sigma0 +
/// sigma1 t (positive on [0,1]).
struct GaussianOracle {
    enum class Kind { FixedMeanTimeVar, TimeMeanFixedVar, TimeMeanTimeVar };

    Kind kind = Kind::TimeMeanFixedVar;
    double mu0 = 0.0, mu1 = 0.0;
    double sigma0 = 1.0, sigma1 = 0.0;

    double mu(double t) const { return mu0 + mu1 * t; }
    double sigma(double t) const { return sigma0 + sigma1 * t; }

    /// d/dt log q_t(x), differentiated directly from the Gaussian log density.
    double time_score(double x, double t) const;
    /// d/dt of the natural parameters (mu/sigma^2, -1/(2 sigma^2)).
    Eigen::Vector2d dtheta(double t) const;
    /// (E[x], E[x^2]) under q_t.
    Eigen::Vector2d moments(double t) const;

    /// Paired draws t ~ U(0,1), x ~ N(mu(t), sigma(t)^2).
    TimedDataset sample(int n, std::uint64_t seed) const;
};

GaussianOracle gaussian_oracle_family(GaussianOracle::Kind kind, double mu0, double mu1, double sigma0,
                                      double sigma1);

}  // namespace spartsm
