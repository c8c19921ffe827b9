#include "spartsm/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "spartsm/rng.hpp"

namespace spartsm {

double ChangeEntry::value(double t) const {
    switch (kind) {
        case Kind::Sine: return magnitude * std::sin(freq * t);
        case Kind::LinearRamp: return magnitude * t;
    }
    return 0.0;
}

double ChangeEntry::derivative(double t) const {
    switch (kind) {
        case Kind::Sine: return magnitude * freq * std::cos(freq * t);
        case Kind::LinearRamp: return magnitude;
    }
    return 0.0;
}

PrecisionPath PrecisionPath::make(Eigen::MatrixXd theta0, std::vector<ChangeEntry> changes) {
    if (theta0.rows() != theta0.cols() || theta0.rows() < 1)
        throw std::invalid_argument("PrecisionPath: theta0 must be square");
    if (!theta0.isApprox(theta0.transpose(), 1e-12))
        throw std::invalid_argument("PrecisionPath: theta0 must be symmetric");
    int d = static_cast<int>(theta0.rows());
    for (auto& e : changes) {
        if (e.i == e.j || e.i < 0 || e.j < 0 || e.i >= d || e.j >= d)
            throw std::invalid_argument("PrecisionPath: change entry off the strict off-diagonal");
        if (e.i > e.j) std::swap(e.i, e.j);
    }
    PrecisionPath path;
    path.theta0_ = std::move(theta0);
    path.changes_ = std::move(changes);
    for (int gp = 0; gp < 50; ++gp) {
        double t = gp / 49.0;
        Eigen::LLT<Eigen::MatrixXd> llt(path.evaluate(t));
        if (llt.info() != Eigen::Success)
            throw std::runtime_error("PrecisionPath: Theta(t) not positive definite at t = " + std::to_string(t));
    }
    return path;
}

Eigen::MatrixXd PrecisionPath::evaluate(double t) const {
    Eigen::MatrixXd out = theta0_;
    for (const auto& e : changes_) {
        double v = e.value(t);
        out(e.i, e.j) += v;
        out(e.j, e.i) += v;
    }
    return out;
}

Eigen::MatrixXd PrecisionPath::dtheta(double t) const {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim(), dim());
    for (const auto& e : changes_) {
        double v = e.derivative(t);
        out(e.i, e.j) += v;
        out(e.j, e.i) += v;
    }
    return out;
}

std::vector<std::pair<int, int>> PrecisionPath::change_mask() const {
    std::vector<std::pair<int, int>> mask;
    for (const auto& e : changes_)
        if (e.magnitude != 0.0) mask.emplace_back(e.i, e.j);
    std::sort(mask.begin(), mask.end());
    mask.erase(std::unique(mask.begin(), mask.end()), mask.end());
    return mask;
}

Eigen::VectorXd PrecisionPath::feature_dtheta(const FeatureMap& fmap, double t) const {
    if (fmap.kind() != FeatureMap::Kind::GaussianPairwise || fmap.input_dim() != dim())
        throw std::invalid_argument("feature_dtheta: needs the GaussianPairwise map of matching dimension");
    Eigen::MatrixXd dt = dtheta(t);
    Eigen::VectorXd out(fmap.output_dim());
    int idx = 0;
    for (int i = 0; i < dim(); ++i)
        for (int j = i; j < dim(); ++j) out[idx++] = (i == j) ? -0.5 * dt(i, j) : -dt(i, j);
    return out;
}

std::vector<bool> PrecisionPath::feature_labels(const FeatureMap& fmap) const {
    if (fmap.kind() != FeatureMap::Kind::GaussianPairwise || fmap.input_dim() != dim())
        throw std::invalid_argument("feature_labels: needs the GaussianPairwise map of matching dimension");
    std::vector<bool> labels(static_cast<std::size_t>(fmap.output_dim()), false);
    for (const auto& [i, j] : change_mask())
        labels[static_cast<std::size_t>(FeatureMap::gaussian_feature_index(dim(), i, j))] = true;
    return labels;
}

Eigen::MatrixXd build_theta0(int d, Theta0Style style, std::uint64_t seed, double diag_override) {
    if (d < 2) throw std::invalid_argument("build_theta0: d must be >= 2");
    auto rng = make_rng(seed);
    Eigen::MatrixXd A(d, d);
    if (style == Theta0Style::Estimation) {
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) A(i, j) = gauss(rng);
        Eigen::MatrixXd theta0 = (A.transpose() * A) / (2.0 * d);
        double diag = diag_override > 0.0 ? diag_override : 2.0;
        theta0.diagonal().setConstant(diag);
        return theta0;
    }
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) A(i, j) = unif(rng);
    Eigen::MatrixXd theta0 = 0.01 * (A.transpose() * A);
    double diag = diag_override > 0.0 ? diag_override : 12.0;
    theta0.diagonal().setConstant(diag);
    return theta0;
}

namespace {

std::vector<ChangeEntry> bernoulli_mask_entries(int d, std::uint64_t seed, double p,
                                                ChangeEntry::Kind kind, double magnitude, double freq,
                                                int skip_i = -1, int skip_j = -1) {
    auto rng = make_rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<ChangeEntry> entries;
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            double u = unif(rng);
            if (i == skip_i && j == skip_j) continue;
            if (u < p) entries.push_back({i, j, kind, magnitude, freq});
        }
    return entries;
}

}  // namespace

PrecisionPath ggm_sine_path(int d, std::uint64_t seed, double p, double amp, double freq) {
    Eigen::MatrixXd theta0 = build_theta0(d, Theta0Style::Estimation, split_seed(seed, 0));
    auto entries = bernoulli_mask_entries(d, split_seed(seed, 1), p, ChangeEntry::Kind::Sine, amp, freq);
    return PrecisionPath::make(std::move(theta0), std::move(entries));
}

PrecisionPath ggm_linear_path(int d, std::uint64_t seed, double p, double slope, bool require_nonempty) {
    Eigen::MatrixXd theta0 = build_theta0(d, Theta0Style::Estimation, split_seed(seed, 0));
    for (std::uint64_t attempt = 0;; ++attempt) {
        auto entries = bernoulli_mask_entries(d, split_seed(seed, 1 + attempt), p,
                                              ChangeEntry::Kind::LinearRamp, slope, 0.0);
        if (entries.empty() && require_nonempty && attempt < 1000) continue;
        if (entries.empty() && require_nonempty)
            throw std::runtime_error("ggm_linear_path: could not draw a non-empty mask");
        return PrecisionPath::make(std::move(theta0), std::move(entries));
    }
}

PrecisionPath inference_deterministic_path(Eigen::MatrixXd theta0, double target_slope) {
    int d = static_cast<int>(theta0.rows());
    if (d < 6) throw std::invalid_argument("inference_deterministic_path: d must be >= 6");
    std::vector<ChangeEntry> entries;
    for (int i = 1; i + 1 < d; ++i)
        entries.push_back({i, i + 1, ChangeEntry::Kind::LinearRamp, 1.0, 0.0});
    for (int j = 2; j <= 4; ++j)
        entries.push_back({0, j, ChangeEntry::Kind::LinearRamp, 1.0, 0.0});
    if (target_slope != 0.0)
        entries.push_back({0, 1, ChangeEntry::Kind::LinearRamp, target_slope, 0.0});
    return PrecisionPath::make(std::move(theta0), std::move(entries));
}

PrecisionPath inference_random_path(Eigen::MatrixXd theta0, std::uint64_t mask_seed,
                                    double target_slope, double p) {
    int d = static_cast<int>(theta0.rows());
    auto entries =
        bernoulli_mask_entries(d, mask_seed, p, ChangeEntry::Kind::LinearRamp, 1.0, 0.0, 0, 1);
    if (target_slope != 0.0)
        entries.push_back({0, 1, ChangeEntry::Kind::LinearRamp, target_slope, 0.0});
    return PrecisionPath::make(std::move(theta0), std::move(entries));
}

namespace {

// x ~ N(0, Theta^{-1}) through the Cholesky factor of Theta.
Eigen::VectorXd draw_from_precision(const Eigen::LLT<Eigen::MatrixXd>& llt, std::mt19937_64& rng,
                                    std::normal_distribution<double>& gauss, int d) {
    Eigen::VectorXd z(d);
    for (int i = 0; i < d; ++i) z[i] = gauss(rng);
    return llt.matrixU().solve(z);
}

}  // namespace

TimedDataset sample_ggm_paired(const PrecisionPath& path, int n, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("sample_ggm_paired: n must be >= 2");
    int d = path.dim();
    auto rng = make_rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    Eigen::VectorXd t(n);
    for (int i = 0; i < n; ++i) t[i] = unif(rng);
    std::sort(t.data(), t.data() + n);

    Eigen::MatrixXd obs(n, d);
    for (int i = 0; i < n; ++i) {
        Eigen::LLT<Eigen::MatrixXd> llt(path.evaluate(t[i]));
        if (llt.info() != Eigen::Success)
            throw std::runtime_error("sample_ggm_paired: factorization failed at t = " + std::to_string(t[i]));
        obs.row(i) = draw_from_precision(llt, rng, gauss, d).transpose();
    }
    return TimedDataset::paired(t, obs, 0.0, 1.0);
}

TimedDataset sample_ggm_grouped(const PrecisionPath& path, int m, int n_per, std::uint64_t seed) {
    if (m < 2 || n_per < 1) throw std::invalid_argument("sample_ggm_grouped: need m >= 2, n_per >= 1");
    int d = path.dim();
    auto rng = make_rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    Eigen::VectorXd stamps(m);
    std::vector<Eigen::MatrixXd> blocks(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) {
        double t = (j + 0.5) / m;
        stamps[j] = t;
        Eigen::LLT<Eigen::MatrixXd> llt(path.evaluate(t));
        if (llt.info() != Eigen::Success)
            throw std::runtime_error("sample_ggm_grouped: factorization failed at t = " + std::to_string(t));
        Eigen::MatrixXd block(n_per, d);
        for (int i = 0; i < n_per; ++i) block.row(i) = draw_from_precision(llt, rng, gauss, d).transpose();
        blocks[static_cast<std::size_t>(j)] = std::move(block);
    }
    return TimedDataset::grouped(stamps, std::move(blocks), 0.0, 1.0);
}

TimedDataset sample_truncated_ggm(const PrecisionPath& path, int n, std::uint64_t seed,
                                  TruncationStats* stats) {
    if (n < 2) throw std::invalid_argument("sample_truncated_ggm: n must be >= 2");
    int d = path.dim();
    auto rng = make_rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    Eigen::VectorXd t(n);
    for (int i = 0; i < n; ++i) t[i] = unif(rng);
    std::sort(t.data(), t.data() + n);

    long attempts = 0, accepted = 0;
    const long pilot = 10000;
    Eigen::MatrixXd obs(n, d);
    int filled = 0;
    while (filled < n) {
        Eigen::LLT<Eigen::MatrixXd> llt(path.evaluate(t[filled]));
        if (llt.info() != Eigen::Success)
            throw std::runtime_error("sample_truncated_ggm: factorization failed at t = " +
                                     std::to_string(t[filled]));
        for (;;) {
            Eigen::VectorXd x = draw_from_precision(llt, rng, gauss, d);
            ++attempts;
            if ((x.array() > 0.0).all()) {
                ++accepted;
                obs.row(filled) = x.transpose();
                break;
            }
            if (attempts >= pilot && accepted < attempts / 10000)
                throw std::runtime_error("sample_truncated_ggm: acceptance below 1e-4, aborting");
            if (attempts > 20000000L)
                throw std::runtime_error("sample_truncated_ggm: rejection budget exhausted");
        }
        ++filled;
    }
    if (stats) {
        stats->attempts = attempts;
        stats->accepted = accepted;
    }
    return TimedDataset::paired(t, obs, 0.0, 1.0);
}

TimedDataset sample_ising_path(const std::function<Eigen::MatrixXd(double)>& coupling, int d, int n,
                               std::uint64_t seed, int n_sweeps) {
    if (d < 2 || d > 64) throw std::invalid_argument("sample_ising_path: need 2 <= d <= 64");
    if (n < 2 || n_sweeps < 1) throw std::invalid_argument("sample_ising_path: bad n or n_sweeps");
    auto rng = make_rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    Eigen::VectorXd t(n);
    for (int i = 0; i < n; ++i) t[i] = unif(rng);
    std::sort(t.data(), t.data() + n);

    const int burn_in = 50;
    std::vector<int> order(static_cast<std::size_t>(d));
    std::iota(order.begin(), order.end(), 0);

    Eigen::MatrixXd obs(n, d);
    Eigen::VectorXd x(d);
    for (int s = 0; s < n; ++s) {
        Eigen::MatrixXd J = coupling(t[s]);
        if (J.rows() != d || J.cols() != d) throw std::invalid_argument("sample_ising_path: bad coupling matrix");
        for (int i = 0; i < d; ++i) x[i] = unif(rng) < 0.5 ? 0.0 : 1.0;
        for (int sweep = 0; sweep < burn_in + n_sweeps; ++sweep) {
            std::shuffle(order.begin(), order.end(), rng);
            for (int site : order) {
                double field = 0.0;
                for (int jj = 0; jj < d; ++jj)
                    if (jj != site) field += J(site, jj) * x[jj];
                double p1 = 1.0 / (1.0 + std::exp(-field));
                x[site] = unif(rng) < p1 ? 1.0 : 0.0;
            }
        }
        obs.row(s) = x.transpose();
    }
    return TimedDataset::paired(t, obs, 0.0, 1.0);
}

double GaussianOracle::time_score(double x, double t) const {
    double m = mu(t), s = sigma(t);
    double dm = mu1, ds = sigma1;
    return (x - m) * dm / (s * s) + (x - m) * (x - m) * ds / (s * s * s) - ds / s;
}

Eigen::Vector2d GaussianOracle::dtheta(double t) const {
    double m = mu(t), s = sigma(t);
    double dm = mu1, ds = sigma1;
    Eigen::Vector2d out;
    out[0] = (dm * s - 2.0 * m * ds) / (s * s * s);
    out[1] = ds / (s * s * s);
    return out;
}

Eigen::Vector2d GaussianOracle::moments(double t) const {
    double m = mu(t), s = sigma(t);
    return Eigen::Vector2d(m, s * s + m * m);
}

TimedDataset GaussianOracle::sample(int n, std::uint64_t seed) const {
    if (n < 2) throw std::invalid_argument("GaussianOracle::sample: n must be >= 2");
    auto rng = make_rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd t(n);
    for (int i = 0; i < n; ++i) t[i] = unif(rng);
    std::sort(t.data(), t.data() + n);
    Eigen::MatrixXd obs(n, 1);
    for (int i = 0; i < n; ++i) obs(i, 0) = mu(t[i]) + sigma(t[i]) * gauss(rng);
    return TimedDataset::paired(t, obs, 0.0, 1.0);
}

GaussianOracle gaussian_oracle_family(GaussianOracle::Kind kind, double mu0, double mu1, double sigma0,
                                      double sigma1) {
    GaussianOracle fam;
    fam.kind = kind;
    fam.mu0 = mu0;
    fam.sigma0 = sigma0;
    fam.mu1 = (kind == GaussianOracle::Kind::FixedMeanTimeVar) ? 0.0 : mu1;
    fam.sigma1 = (kind == GaussianOracle::Kind::TimeMeanFixedVar) ? 0.0 : sigma1;
    if (!(fam.sigma(0.0) > 0.0) || !(fam.sigma(1.0) > 0.0))
        throw std::invalid_argument("gaussian_oracle_family: sigma must stay positive on [0,1]");
    return fam;
}

}  // namespace spartsm
