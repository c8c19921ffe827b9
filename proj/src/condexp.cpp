#include "spartsm/condexp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace spartsm {

double silverman_bandwidth(const Eigen::VectorXd& times) {
    Eigen::Index n = times.size();
    if (n < 2) return 0.1;
    double mean = times.mean();
    double ss = (times.array() - mean).square().sum();
    double sd = std::sqrt(ss / static_cast<double>(n - 1));
    double h = 1.06 * sd * std::pow(static_cast<double>(n), -0.2);
    return std::max(h, 1e-6);
}

Eigen::MatrixXd nw_cond_exp(const Eigen::MatrixXd& features, const Eigen::VectorXd& times,
                            double bandwidth, bool leave_one_out) {
    Eigen::Index n = features.rows();
    if (n < 1) throw std::invalid_argument("nw_cond_exp: empty input");
    if (times.size() != n) throw std::invalid_argument("nw_cond_exp: times/features mismatch");
    if (!(bandwidth > 0.0)) throw std::invalid_argument("nw_cond_exp: bandwidth must be positive");
    if (leave_one_out && n < 2) throw std::invalid_argument("nw_cond_exp: leave-one-out needs n >= 2");

    double inv2h2 = 1.0 / (2.0 * bandwidth * bandwidth);
    Eigen::MatrixXd out(n, features.cols());

    // Row at a time: O(n) scratch instead of the n x n kernel matrix.
    Eigen::VectorXd z(n), w(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        z = (times.array() - times[i]).square() * inv2h2;
        if (leave_one_out) z[i] = std::numeric_limits<double>::infinity();
        // Shift by the row minimum so the largest weight is exp(0); the
        // shift cancels in the normalization but prevents a zero total.
        double zmin = z.minCoeff();
        w = (-(z.array() - zmin)).exp();
        if (leave_one_out) w[i] = 0.0;
        double total = w.sum();
        out.row(i) = (w.transpose() * features) / total;
    }
    return out;
}

Eigen::MatrixXd group_cond_exp(const TimedDataset& dataset, const FeatureMap& fmap) {
    const auto& blocks = dataset.blocks();
    Eigen::MatrixXd out(static_cast<Eigen::Index>(blocks.size()), fmap.output_dim());
    for (std::size_t j = 0; j < blocks.size(); ++j)
        out.row(static_cast<Eigen::Index>(j)) = fmap.eval_matrix(blocks[j]).colwise().mean();
    return out;
}

TimedDataset bin_paired(const TimedDataset& dataset, int n_bins) {
    if (dataset.layout() != TimedDataset::Layout::Paired)
        throw std::invalid_argument("bin_paired: dataset is already grouped");
    int n = dataset.n_rows();
    if (n_bins < 1 || n_bins > n) throw std::invalid_argument("bin_paired: need n >= n_bins >= 1");

    const Eigen::VectorXd& t = dataset.times();
    const Eigen::MatrixXd& obs = dataset.observations();
    std::vector<std::vector<Eigen::Index>> members(static_cast<std::size_t>(n_bins));
    for (Eigen::Index i = 0; i < t.size(); ++i) {
        int bin = std::min(static_cast<int>(t[i] * n_bins), n_bins - 1);
        members[static_cast<std::size_t>(bin)].push_back(i);
    }

    std::vector<Eigen::MatrixXd> blocks;
    std::vector<double> stamps;
    for (int b = 0; b < n_bins; ++b) {
        const auto& rows = members[static_cast<std::size_t>(b)];
        if (rows.empty()) continue;
        Eigen::MatrixXd block(static_cast<Eigen::Index>(rows.size()), obs.cols());
        for (std::size_t r = 0; r < rows.size(); ++r) block.row(static_cast<Eigen::Index>(r)) = obs.row(rows[r]);
        blocks.push_back(std::move(block));
        stamps.push_back((b + 0.5) / n_bins);
    }
    Eigen::VectorXd stamp_vec = Eigen::Map<Eigen::VectorXd>(stamps.data(), static_cast<Eigen::Index>(stamps.size()));
    return TimedDataset::grouped(stamp_vec, std::move(blocks), 0.0, 1.0);
}

CondExpEstimate estimate_cond_exp(const TimedDataset& dataset, const FeatureMap& fmap,
                                  const CondExpConfig& cfg) {
    CondExpEstimate est;
    if (dataset.layout() == TimedDataset::Layout::Grouped) {
        // Block means are exact; the kernel estimator is a paired-data device.
        Eigen::MatrixXd block_means = group_cond_exp(dataset, fmap);
        est.method = CondExpConfig::Method::GroupMean;
        est.means.resize(dataset.n_rows(), fmap.output_dim());
        int row = 0;
        const auto& blocks = dataset.blocks();
        for (std::size_t j = 0; j < blocks.size(); ++j)
            for (Eigen::Index i = 0; i < blocks[j].rows(); ++i)
                est.means.row(row++) = block_means.row(static_cast<Eigen::Index>(j));
        return est;
    }

    switch (cfg.method) {
        case CondExpConfig::Method::NadarayaWatson: {
            Eigen::MatrixXd features = fmap.eval_matrix(dataset.observations());
            double h = cfg.bandwidth > 0.0 ? cfg.bandwidth : silverman_bandwidth(dataset.times());
            est.method = cfg.method;
            est.bandwidth_used = h;
            est.means = nw_cond_exp(features, dataset.times(), h, cfg.leave_one_out);
            return est;
        }
        case CondExpConfig::Method::Binned: {
            // Each paired row gets the feature mean of its time bin.
            int n_bins = std::min(cfg.n_bins, dataset.n_rows());
            if (n_bins < 1) throw std::invalid_argument("estimate_cond_exp: bad bin count");
            Eigen::MatrixXd features = fmap.eval_matrix(dataset.observations());
            const Eigen::VectorXd& t = dataset.times();
            Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(n_bins, features.cols());
            Eigen::VectorXd counts = Eigen::VectorXd::Zero(n_bins);
            std::vector<int> bin_of(static_cast<std::size_t>(t.size()));
            for (Eigen::Index i = 0; i < t.size(); ++i) {
                int b = std::min(static_cast<int>(t[i] * n_bins), n_bins - 1);
                bin_of[static_cast<std::size_t>(i)] = b;
                sums.row(b) += features.row(i);
                counts[b] += 1.0;
            }
            est.method = cfg.method;
            est.means.resize(features.rows(), features.cols());
            for (Eigen::Index i = 0; i < t.size(); ++i) {
                int b = bin_of[static_cast<std::size_t>(i)];
                est.means.row(i) = sums.row(b) / counts[b];
            }
            return est;
        }
        case CondExpConfig::Method::GroupMean:
            throw std::invalid_argument("estimate_cond_exp: GroupMean needs a grouped dataset");
    }
    throw std::logic_error("estimate_cond_exp: unreachable");
}

CondExpEstimate cond_exp_from_matrix(Eigen::MatrixXd means) {
    CondExpEstimate est;
    est.method = CondExpConfig::Method::GroupMean;
    est.means = std::move(means);
    return est;
}

}  // namespace spartsm
