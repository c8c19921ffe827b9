#pragma once

#include <Eigen/Dense>
#include <vector>

namespace spartsm {

/// Affine map of raw times onto [0,1]; rejects a degenerate domain.
Eigen::VectorXd normalize_times(const Eigen::VectorXd& raw_times, double domain_lo, double domain_hi);

/// Time-indexed observations with times normalized to [0,1] at construction.
///
/// Paired: one observation per time stamp (rows sorted by time).
/// Grouped: a block of observations per time stamp (blocks sorted by time,
/// every block non-empty).
class TimedDataset {
public:
    enum class Layout { Paired, Grouped };

    /// raw_times length n, obs n x d. Domain defaults to [min t, max t].
    static TimedDataset paired(const Eigen::VectorXd& raw_times, const Eigen::MatrixXd& obs);
    static TimedDataset paired(const Eigen::VectorXd& raw_times, const Eigen::MatrixXd& obs,
                               double domain_lo, double domain_hi);
    static TimedDataset grouped(const Eigen::VectorXd& raw_times, std::vector<Eigen::MatrixXd> blocks);
    static TimedDataset grouped(const Eigen::VectorXd& raw_times, std::vector<Eigen::MatrixXd> blocks,
                                double domain_lo, double domain_hi);

    Layout layout() const { return layout_; }
    int dim() const { return d_; }
    /// Total number of observation rows across the dataset.
    int n_rows() const { return total_rows_; }
    /// Number of time stamps (n for paired, m for grouped).
    int n_times() const { return static_cast<int>(times_.size()); }

    /// Normalized time stamps, one per row (paired) or per block (grouped).
    const Eigen::VectorXd& times() const { return times_; }
    /// Paired observations, n x d.
    const Eigen::MatrixXd& observations() const;
    /// Grouped observation blocks.
    const std::vector<Eigen::MatrixXd>& blocks() const;

    double domain_lo() const { return domain_lo_; }
    double domain_hi() const { return domain_hi_; }

    /// Row-expanded view shared by both layouts: every observation row with
    /// its time stamp and objective weight. Paired weights are 1/n; grouped
    /// rows carry 1/(m * block_size) so blocks contribute equally.
    struct Expanded {
        Eigen::MatrixXd obs;      // n_rows x d
        Eigen::VectorXd times;    // n_rows
        Eigen::VectorXd weights;  // n_rows, sums to 1
    };
    Expanded expand() const;

private:
    TimedDataset() = default;

    Layout layout_ = Layout::Paired;
    int d_ = 0;
    int total_rows_ = 0;
    double domain_lo_ = 0.0, domain_hi_ = 1.0;
    Eigen::VectorXd times_;
    Eigen::MatrixXd obs_;                     // paired only
    std::vector<Eigen::MatrixXd> blocks_;     // grouped only
};

}  // namespace spartsm
