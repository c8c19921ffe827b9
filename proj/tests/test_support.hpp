#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <sstream>
#include <string>

namespace test_support {

inline double rel_err(double got, double want) {
    double denom = std::max(std::abs(want), 1e-300);
    return std::abs(got - want) / denom;
}

inline double rel_err_vec(const Eigen::VectorXd& got, const Eigen::VectorXd& want) {
    double denom = std::max(want.norm(), 1e-300);
    return (got - want).norm() / denom;
}

inline Eigen::MatrixXd random_matrix(std::mt19937_64& rng, int rows, int cols, double scale = 1.0) {
    std::normal_distribution<double> gauss(0.0, scale);
    Eigen::MatrixXd m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = gauss(rng);
    return m;
}

inline Eigen::VectorXd random_vector(std::mt19937_64& rng, int n, double scale = 1.0) {
    std::normal_distribution<double> gauss(0.0, scale);
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = gauss(rng);
    return v;
}

inline Eigen::MatrixXd random_spd(std::mt19937_64& rng, int p, double ridge = 0.5) {
    Eigen::MatrixXd a = random_matrix(rng, p, p);
    return a.transpose() * a / p + ridge * Eigen::MatrixXd::Identity(p, p);
}

template <typename... Args>
std::string format_msg(Args&&... args) {
    std::ostringstream oss;
    (oss << ... << args);
    return oss.str();
}

}  // namespace test_support
