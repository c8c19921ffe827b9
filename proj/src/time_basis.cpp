#include "spartsm/time_basis.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace spartsm {

TimeBasis::TimeBasis(Kind kind, int b, Fn phi, Fn dphi, Fn d2phi)
    : kind_(kind), b_(b), phi_(std::move(phi)), dphi_(std::move(dphi)), d2phi_(std::move(d2phi)) {}

TimeBasis TimeBasis::linear() {
    auto phi = [](double t) { return Eigen::VectorXd::Constant(1, t); };
    auto dphi = [](double) { return Eigen::VectorXd::Constant(1, 1.0); };
    auto d2phi = [](double) { return Eigen::VectorXd::Zero(1); };
    return TimeBasis(Kind::Linear, 1, phi, dphi, d2phi);
}

TimeBasis TimeBasis::fourier(int b) {
    if (b < 2 || b % 2 != 0) throw std::invalid_argument("fourier basis: b must be a positive even count");
    auto phi = [b](double t) {
        Eigen::VectorXd out(b);
        for (int l = 0; l < b / 2; ++l) {
            double w = static_cast<double>(l + 1);
            out[2 * l] = std::sin(w * t);
            out[2 * l + 1] = std::cos(w * t);
        }
        return out;
    };
    auto dphi = [b](double t) {
        Eigen::VectorXd out(b);
        for (int l = 0; l < b / 2; ++l) {
            double w = static_cast<double>(l + 1);
            out[2 * l] = w * std::cos(w * t);
            out[2 * l + 1] = -w * std::sin(w * t);
        }
        return out;
    };
    auto d2phi = [b](double t) {
        Eigen::VectorXd out(b);
        for (int l = 0; l < b / 2; ++l) {
            double w = static_cast<double>(l + 1);
            out[2 * l] = -w * w * std::sin(w * t);
            out[2 * l + 1] = -w * w * std::cos(w * t);
        }
        return out;
    };
    return TimeBasis(Kind::Fourier, b, phi, dphi, d2phi);
}

TimeBasis TimeBasis::custom(int b, Fn phi, Fn dphi, Fn d2phi) {
    if (b < 1) throw std::invalid_argument("custom basis: b must be >= 1");
    if (!phi || !dphi || !d2phi) throw std::invalid_argument("custom basis: null function");
    return TimeBasis(Kind::Custom, b, std::move(phi), std::move(dphi), std::move(d2phi));
}

}  // namespace spartsm
