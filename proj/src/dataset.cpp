#include "spartsm/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace spartsm {

Eigen::VectorXd normalize_times(const Eigen::VectorXd& raw_times, double domain_lo, double domain_hi) {
    if (!(domain_hi > domain_lo)) throw std::invalid_argument("normalize_times: degenerate time domain");
    double span = domain_hi - domain_lo;
    Eigen::VectorXd out(raw_times.size());
    for (Eigen::Index i = 0; i < raw_times.size(); ++i) {
        double t = raw_times[i];
        if (!std::isfinite(t)) throw std::invalid_argument("normalize_times: non-finite time");
        if (t < domain_lo || t > domain_hi) throw std::invalid_argument("normalize_times: time outside domain");
        out[i] = (t - domain_lo) / span;
    }
    return out;
}

namespace {

void check_finite(const Eigen::MatrixXd& obs) {
    if (!obs.allFinite()) throw std::invalid_argument("dataset: non-finite observation value");
}

std::pair<double, double> infer_domain(const Eigen::VectorXd& t) {
    if (t.size() == 0) throw std::invalid_argument("dataset: no time stamps");
    double lo = t.minCoeff(), hi = t.maxCoeff();
    if (!(hi > lo)) throw std::invalid_argument("dataset: all time stamps equal, give an explicit domain");
    return {lo, hi};
}

}  // namespace

TimedDataset TimedDataset::paired(const Eigen::VectorXd& raw_times, const Eigen::MatrixXd& obs) {
    auto [lo, hi] = infer_domain(raw_times);
    return paired(raw_times, obs, lo, hi);
}

TimedDataset TimedDataset::paired(const Eigen::VectorXd& raw_times, const Eigen::MatrixXd& obs,
                                  double domain_lo, double domain_hi) {
    if (raw_times.size() != obs.rows()) throw std::invalid_argument("paired dataset: times/rows mismatch");
    if (obs.rows() == 0 || obs.cols() == 0) throw std::invalid_argument("paired dataset: empty");
    check_finite(obs);
    Eigen::VectorXd t = normalize_times(raw_times, domain_lo, domain_hi);

    std::vector<Eigen::Index> order(static_cast<std::size_t>(t.size()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return t[a] < t[b]; });

    TimedDataset ds;
    ds.layout_ = Layout::Paired;
    ds.d_ = static_cast<int>(obs.cols());
    ds.total_rows_ = static_cast<int>(obs.rows());
    ds.domain_lo_ = domain_lo;
    ds.domain_hi_ = domain_hi;
    ds.times_.resize(t.size());
    ds.obs_.resize(obs.rows(), obs.cols());
    for (Eigen::Index i = 0; i < t.size(); ++i) {
        ds.times_[i] = t[order[static_cast<std::size_t>(i)]];
        ds.obs_.row(i) = obs.row(order[static_cast<std::size_t>(i)]);
    }
    return ds;
}

TimedDataset TimedDataset::grouped(const Eigen::VectorXd& raw_times, std::vector<Eigen::MatrixXd> blocks) {
    auto [lo, hi] = infer_domain(raw_times);
    return grouped(raw_times, std::move(blocks), lo, hi);
}

TimedDataset TimedDataset::grouped(const Eigen::VectorXd& raw_times, std::vector<Eigen::MatrixXd> blocks,
                                   double domain_lo, double domain_hi) {
    if (static_cast<std::size_t>(raw_times.size()) != blocks.size())
        throw std::invalid_argument("grouped dataset: times/blocks mismatch");
    if (blocks.empty()) throw std::invalid_argument("grouped dataset: empty");
    int d = static_cast<int>(blocks.front().cols());
    int total = 0;
    for (const auto& b : blocks) {
        if (b.rows() == 0) throw std::invalid_argument("grouped dataset: empty block");
        if (b.cols() != d) throw std::invalid_argument("grouped dataset: inconsistent dimension");
        check_finite(b);
        total += static_cast<int>(b.rows());
    }
    Eigen::VectorXd t = normalize_times(raw_times, domain_lo, domain_hi);

    std::vector<Eigen::Index> order(blocks.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return t[a] < t[b]; });

    TimedDataset ds;
    ds.layout_ = Layout::Grouped;
    ds.d_ = d;
    ds.total_rows_ = total;
    ds.domain_lo_ = domain_lo;
    ds.domain_hi_ = domain_hi;
    ds.times_.resize(t.size());
    ds.blocks_.resize(blocks.size());
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        ds.times_[static_cast<Eigen::Index>(i)] = t[order[i]];
        ds.blocks_[i] = std::move(blocks[static_cast<std::size_t>(order[i])]);
    }
    return ds;
}

const Eigen::MatrixXd& TimedDataset::observations() const {
    if (layout_ != Layout::Paired) throw std::logic_error("observations(): dataset is grouped");
    return obs_;
}

const std::vector<Eigen::MatrixXd>& TimedDataset::blocks() const {
    if (layout_ != Layout::Grouped) throw std::logic_error("blocks(): dataset is paired");
    return blocks_;
}

TimedDataset::Expanded TimedDataset::expand() const {
    Expanded out;
    if (layout_ == Layout::Paired) {
        out.obs = obs_;
        out.times = times_;
        out.weights = Eigen::VectorXd::Constant(total_rows_, 1.0 / total_rows_);
        return out;
    }
    out.obs.resize(total_rows_, d_);
    out.times.resize(total_rows_);
    out.weights.resize(total_rows_);
    int m = static_cast<int>(blocks_.size());
    int row = 0;
    for (int j = 0; j < m; ++j) {
        int nj = static_cast<int>(blocks_[static_cast<std::size_t>(j)].rows());
        double w = 1.0 / (static_cast<double>(m) * nj);
        for (int i = 0; i < nj; ++i, ++row) {
            out.obs.row(row) = blocks_[static_cast<std::size_t>(j)].row(i);
            out.times[row] = times_[j];
            out.weights[row] = w;
        }
    }
    return out;
}

}  // namespace spartsm
