#pragma once

#include <stdexcept>
#include <utility>

namespace spartsm {

/// Boundary-vanishing weight g(t) = -(t - t_start)(t - t_end), the quadratic
/// that makes the integration-by-parts identity hold on a bounded time domain.
/// g is strictly positive inside (t_start, t_end) and exactly zero at the ends.
struct WeightFunction {
    double t_start = 0.0;
    double t_end = 1.0;

    WeightFunction() = default;
    WeightFunction(double start, double end) : t_start(start), t_end(end) {
        if (!(end > start)) throw std::invalid_argument("weight function: need t_end > t_start");
    }

    double g(double t) const { return -(t - t_start) * (t - t_end); }
    double dg(double t) const { return -(2.0 * t - t_start - t_end); }
};

/// (g(t), dg(t)) pair.
inline std::pair<double, double> eval_weight(const WeightFunction& w, double t) {
    return {w.g(t), w.dg(t)};
}

}  // namespace spartsm
