#pragma once

#include <Eigen/Dense>
#include <functional>

namespace spartsm {

/// Basis phi : R -> R^b for the time-derivative model
/// dtheta_j(t) = <alpha_j, dphi(t)>, with exact first and second derivatives.
class TimeBasis {
public:
    enum class Kind { Linear, Fourier, Custom };

    using Fn = std::function<Eigen::VectorXd(double)>;

    /// b = 1, phi(t) = [t]; the model's derivative is constant in t.
    static TimeBasis linear();
    /// b even; phi(t) = [sin(t), cos(t), ..., sin((b/2)t), cos((b/2)t)].
    static TimeBasis fourier(int b);
    static TimeBasis custom(int b, Fn phi, Fn dphi, Fn d2phi);

    Kind kind() const { return kind_; }
    int dim() const { return b_; }

    Eigen::VectorXd phi(double t) const { return phi_(t); }
    Eigen::VectorXd dphi(double t) const { return dphi_(t); }
    Eigen::VectorXd d2phi(double t) const { return d2phi_(t); }

private:
    TimeBasis(Kind kind, int b, Fn phi, Fn dphi, Fn d2phi);

    Kind kind_;
    int b_;
    Fn phi_, dphi_, d2phi_;
};

}  // namespace spartsm
