#include "spartsm/changepoint.hpp"

#include <cmath>
#include <stdexcept>

#include "spartsm/inference.hpp"

namespace spartsm {

NullCovariance::NullCovariance(Eigen::MatrixXd sigma_a, Eigen::MatrixXd sigma_b, TimeBasis basis, int k,
                               bool ridged)
    : sigma_a_(std::move(sigma_a)),
      sigma_b_(std::move(sigma_b)),
      basis_(std::move(basis)),
      k_(k),
      b_(basis_.dim()),
      ridged_(ridged) {
    Eigen::LDLT<Eigen::MatrixXd> ldlt(sigma_a_);
    Eigen::MatrixXd half = ldlt.solve(sigma_b_);
    var_alpha_ = ldlt.solve(half.transpose()).transpose();
    var_alpha_ = 0.5 * (var_alpha_ + var_alpha_.transpose()).eval();
}

Eigen::MatrixXd NullCovariance::dtheta_cov(double t) const {
    Eigen::VectorXd u = basis_.dphi(t);
    Eigen::MatrixXd cov(k_, k_);
    for (int je = 0; je < k_; ++je)
        for (int jf = 0; jf <= je; ++jf) {
            double v = u.dot(var_alpha_.block(static_cast<Eigen::Index>(je) * b_,
                                              static_cast<Eigen::Index>(jf) * b_, b_, b_) *
                             u);
            cov(je, jf) = v;
            cov(jf, je) = v;
        }
    return cov;
}

Eigen::VectorXd NullCovariance::dtheta_se(double t) const {
    Eigen::VectorXd u = basis_.dphi(t);
    Eigen::VectorXd se(k_);
    for (int je = 0; je < k_; ++je) {
        double v = u.dot(var_alpha_.block(static_cast<Eigen::Index>(je) * b_,
                                          static_cast<Eigen::Index>(je) * b_, b_, b_) *
                         u);
        se[je] = std::sqrt(std::max(v, 0.0));
    }
    return se;
}

NullCovariance null_covariance(const TimedDataset& dataset, const FeatureMap& fmap,
                               const TimeBasis& basis, const WeightFunction& w) {
    if (dataset.layout() != TimedDataset::Layout::Grouped)
        throw std::invalid_argument("null_covariance: needs a grouped (or binned) dataset");
    const auto& blocks = dataset.blocks();
    const Eigen::VectorXd& stamps = dataset.times();
    const int k = fmap.output_dim();
    const int b = basis.dim();
    const int p = b * k;

    Eigen::MatrixXd sigma_a = Eigen::MatrixXd::Zero(p, p);
    Eigen::MatrixXd sigma_b = Eigen::MatrixXd::Zero(p, p);

    for (std::size_t j = 0; j < blocks.size(); ++j) {
        const Eigen::MatrixXd& block = blocks[j];
        Eigen::Index nj = block.rows();
        if (nj < 2) throw std::invalid_argument("null_covariance: every block needs >= 2 samples");
        double t = stamps[static_cast<Eigen::Index>(j)];
        double gj = w.g(t), dgj = w.dg(t);
        Eigen::VectorXd u = basis.dphi(t);
        Eigen::VectorXd v = basis.d2phi(t);
        Eigen::VectorXd lin = dgj * u + gj * v;  // b

        Eigen::MatrixXd features = fmap.eval_matrix(block);
        Eigen::RowVectorXd mean = features.colwise().mean();
        Eigen::MatrixXd centered = features.rowwise() - mean;
        Eigen::MatrixXd cov_f = (centered.transpose() * centered) / static_cast<double>(nj);  // k x k

        Eigen::MatrixXd uu = u * u.transpose();
        Eigen::MatrixXd ll = lin * lin.transpose();
        for (int je = 0; je < k; ++je)
            for (int jf = 0; jf < k; ++jf) {
                sigma_a.block(static_cast<Eigen::Index>(je) * b, static_cast<Eigen::Index>(jf) * b, b, b) +=
                    2.0 * gj * cov_f(je, jf) * uu;
                sigma_b.block(static_cast<Eigen::Index>(je) * b, static_cast<Eigen::Index>(jf) * b, b, b) +=
                    (4.0 * cov_f(je, jf) / static_cast<double>(nj)) * ll;
            }
    }

    bool ridged = false;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sigma_a);
    double max_eig = eig.eigenvalues().cwiseAbs().maxCoeff();
    if (!(eig.eigenvalues().minCoeff() > 1e-12 * std::max(max_eig, 1e-300))) {
        double ridge = 1e-8 * sigma_a.trace() / p;
        if (!(ridge > 0.0)) ridge = 1e-8;
        sigma_a.diagonal().array() += ridge;
        ridged = true;
    }
    return NullCovariance(std::move(sigma_a), std::move(sigma_b), basis, k, ridged);
}

Eigen::VectorXd default_grid(int n) {
    if (n < 2) throw std::invalid_argument("default_grid: need >= 2 points");
    Eigen::VectorXd grid(n);
    for (int i = 0; i < n; ++i) grid[i] = static_cast<double>(i) / (n - 1);
    return grid;
}

namespace {

ChangeInterval interval_from_run(const Eigen::VectorXd& grid, const Eigen::MatrixXd& stat,
                                 const DiffParamFit& fit, int first, int last) {
    ChangeInterval iv;
    iv.lo = grid[first];
    iv.hi = grid[last];
    iv.max_stat = -1.0;
    for (int gp = first; gp <= last; ++gp)
        for (int j = 0; j < stat.cols(); ++j)
            if (stat(gp, j) > iv.max_stat) {
                iv.max_stat = stat(gp, j);
                iv.dominant_coord = j;
                double est = fit.evaluate(grid[gp])[j];
                iv.sign = est > 0.0 ? 1 : (est < 0.0 ? -1 : 0);
            }
    return iv;
}

ChangeInterval merge_intervals(const ChangeInterval& a, const ChangeInterval& b) {
    ChangeInterval out = a.max_stat >= b.max_stat ? a : b;
    out.lo = a.lo;
    out.hi = b.hi;
    return out;
}

}  // namespace

ChangeReport detect_changes(const DiffParamFit& fit, const NullCovariance& nullcov,
                            const Eigen::VectorXd& grid, double delta, double eps_sp, double eps_pp) {
    if (grid.size() < 1) throw std::invalid_argument("detect_changes: empty grid");
    for (Eigen::Index i = 1; i < grid.size(); ++i)
        if (grid[i] < grid[i - 1]) throw std::invalid_argument("detect_changes: grid must be sorted");
    if (eps_sp < 0.0 || eps_pp < 0.0) throw std::invalid_argument("detect_changes: eps must be >= 0");
    const int k = nullcov.feature_dim();
    if (fit.param.feature_dim() != k) throw std::invalid_argument("detect_changes: fit/covariance mismatch");

    ChangeReport report;
    report.grid = grid;
    report.threshold = normal_quantile(1.0 - delta / 2.0);
    report.stat.resize(grid.size(), k);
    for (Eigen::Index gp = 0; gp < grid.size(); ++gp) {
        Eigen::VectorXd est = fit.evaluate(grid[gp]);
        Eigen::VectorXd se = nullcov.dtheta_se(grid[gp]);
        for (int j = 0; j < k; ++j) report.stat(gp, j) = std::abs(est[j]) / std::max(se[j], 1e-12);
    }

    // Maximal runs of grid points where any coordinate exceeds the threshold.
    int run_start = -1;
    for (Eigen::Index gp = 0; gp <= grid.size(); ++gp) {
        bool exceed = gp < grid.size() && report.stat.row(gp).maxCoeff() > report.threshold;
        if (exceed && run_start < 0) run_start = static_cast<int>(gp);
        if (!exceed && run_start >= 0) {
            report.raw_intervals.push_back(
                interval_from_run(grid, report.stat, fit, run_start, static_cast<int>(gp) - 1));
            run_start = -1;
        }
    }

    report.filtered_intervals = filter_intervals(report.raw_intervals, eps_sp, eps_pp);
    return report;
}

std::vector<ChangeInterval> filter_intervals(const std::vector<ChangeInterval>& raw, double eps_sp,
                                             double eps_pp) {
    std::vector<ChangeInterval> out;
    for (const auto& iv : raw) {
        if (iv.hi - iv.lo < eps_sp) continue;
        if (!out.empty() && iv.lo - out.back().hi < eps_pp)
            out.back() = merge_intervals(out.back(), iv);
        else
            out.push_back(iv);
    }
    return out;
}

}  // namespace spartsm
