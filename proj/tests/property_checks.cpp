#include "property_checks.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>

#include "spartsm/changepoint.hpp"
#include "spartsm/condexp.hpp"
#include "spartsm/evaluate.hpp"
#include "spartsm/inference.hpp"
#include "spartsm/objective.hpp"
#include "spartsm/rng.hpp"
#include "spartsm/simulate.hpp"
#include "spartsm/solver.hpp"
#include "test_support.hpp"

namespace property_checks {

using namespace spartsm;
using test_support::format_msg;
using test_support::random_matrix;
using test_support::random_spd;
using test_support::random_vector;

namespace {

using Failures = std::vector<std::string>;

// ---------------------------------------------------------------- model

Failures basis_derivatives_match_fd() {
    Failures fails;
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> unif(0.05, 0.95);
    const double h = 1e-5;
    for (const TimeBasis& basis : {TimeBasis::linear(), TimeBasis::fourier(2), TimeBasis::fourier(8)}) {
        for (int c = 0; c < 100; ++c) {
            double t = unif(rng);
            Eigen::VectorXd fd1 = (basis.phi(t + h) - basis.phi(t - h)) / (2.0 * h);
            double err1 = (basis.dphi(t) - fd1).norm() / std::max(fd1.norm(), 1.0);
            if (err1 > 1e-6)
                fails.push_back(format_msg("dphi mismatch at t=", t, " err=", err1));
            // Second derivative against a first difference of the (already
            // verified) analytic dphi; a direct second difference of phi at
            // step 1e-5 sits below double-precision cancellation noise.
            Eigen::VectorXd fd2 = (basis.dphi(t + h) - basis.dphi(t - h)) / (2.0 * h);
            double err2 = (basis.d2phi(t) - fd2).norm() / std::max(fd2.norm(), 1.0);
            if (err2 > 1e-6)
                fails.push_back(format_msg("d2phi mismatch at t=", t, " err=", err2));
        }
    }
    return fails;
}

Failures weight_boundary_zeros_exact() {
    Failures fails;
    std::mt19937_64 rng(102);
    std::uniform_real_distribution<double> unif(-50.0, 50.0);
    for (int c = 0; c < 100; ++c) {
        double a = unif(rng), b = a + std::abs(unif(rng)) + 1e-6;
        WeightFunction w(a, b);
        if (w.g(a) != 0.0 || w.g(b) != 0.0)
            fails.push_back(format_msg("weight nonzero at boundary for [", a, ",", b, "]"));
    }
    return fails;
}

Failures gaussian_single_coordinate_single_feature() {
    Failures fails;
    std::mt19937_64 rng(103);
    std::uniform_int_distribution<int> dim(1, 12);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int c = 0; c < 100; ++c) {
        int d = dim(rng);
        FeatureMap fmap = FeatureMap::gaussian_pairwise(d);
        int coord = std::uniform_int_distribution<int>(0, d - 1)(rng);
        Eigen::VectorXd x = Eigen::VectorXd::Zero(d);
        x[coord] = gauss(rng) + 2.0;
        Eigen::VectorXd f = fmap(x);
        int nonzeros = 0, where = -1;
        for (int j = 0; j < f.size(); ++j)
            if (f[j] != 0.0) {
                ++nonzeros;
                where = j;
            }
        if (nonzeros != 1 || where != FeatureMap::gaussian_feature_index(d, coord, coord))
            fails.push_back(format_msg("expected single (", coord, ",", coord, ") feature, got ", nonzeros));
    }
    return fails;
}

// -------------------------------------------------------------- condexp

struct NwInstance {
    Eigen::MatrixXd features;
    Eigen::VectorXd times;
};

NwInstance random_nw_instance(std::mt19937_64& rng, int n, int k) {
    NwInstance inst;
    inst.features = random_matrix(rng, n, k);
    inst.times.resize(n);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int i = 0; i < n; ++i) inst.times[i] = unif(rng);
    return inst;
}

Failures nw_convex_hull() {
    Failures fails;
    std::mt19937_64 rng(104);
    std::uniform_real_distribution<double> bw(0.01, 1.0);
    for (int c = 0; c < 100; ++c) {
        NwInstance inst = random_nw_instance(rng, 30, 3);
        Eigen::MatrixXd out = nw_cond_exp(inst.features, inst.times, bw(rng));
        for (int col = 0; col < 3; ++col) {
            double lo = inst.features.col(col).minCoeff(), hi = inst.features.col(col).maxCoeff();
            if (out.col(col).minCoeff() < lo - 1e-12 || out.col(col).maxCoeff() > hi + 1e-12)
                fails.push_back(format_msg("NW output escapes the convex hull in column ", col));
        }
    }
    return fails;
}

Failures nw_permutation_invariance() {
    Failures fails;
    std::mt19937_64 rng(105);
    for (int c = 0; c < 100; ++c) {
        NwInstance inst = random_nw_instance(rng, 25, 2);
        Eigen::MatrixXd base = nw_cond_exp(inst.features, inst.times, 0.2);

        std::vector<int> perm(25);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        Eigen::MatrixXd pf(25, 2);
        Eigen::VectorXd pt(25);
        for (int i = 0; i < 25; ++i) {
            pf.row(i) = inst.features.row(perm[static_cast<std::size_t>(i)]);
            pt[i] = inst.times[perm[static_cast<std::size_t>(i)]];
        }
        Eigen::MatrixXd permuted = nw_cond_exp(pf, pt, 0.2);
        for (int i = 0; i < 25; ++i)
            if ((permuted.row(i) - base.row(perm[static_cast<std::size_t>(i)])).cwiseAbs().maxCoeff() > 1e-12)
                fails.push_back("NW not invariant to permuting rows");
    }
    return fails;
}

Failures nw_small_bandwidth_self_weight() {
    Failures fails;
    std::mt19937_64 rng(106);
    for (int c = 0; c < 100; ++c) {
        int n = 20;
        Eigen::VectorXd t(n);
        std::uniform_real_distribution<double> jitter(-0.01, 0.01);
        for (int i = 0; i < n; ++i) t[i] = (i + 0.5) / n + jitter(rng) / n;  // distinct, separated
        Eigen::MatrixXd f = random_matrix(rng, n, 2);
        Eigen::MatrixXd out = nw_cond_exp(f, t, 1e-6);
        if ((out - f).cwiseAbs().maxCoeff() > 1e-8)
            fails.push_back("NW at bandwidth 1e-6 does not collapse to the own row");
    }
    return fails;
}

// ------------------------------------------------------------- objective

Failures objective_zero_mean_gradient_at_truth() {
    Failures fails;
    GaussianOracle fam = gaussian_oracle_family(GaussianOracle::Kind::TimeMeanFixedVar, 0.3, 0.8, 1.0, 0.0);
    Eigen::Vector2d alpha_star(0.8, 0.0);  // dtheta = (mu'/sigma^2, 0)
    const int R = 200, n = 500;
    FeatureMap fmap = FeatureMap::gaussian_univariate();
    WeightFunction w;
    Eigen::MatrixXd grads(R, 2);
    for (int r = 0; r < R; ++r) {
        TimedDataset data = fam.sample(n, split_seed(4242, static_cast<std::uint64_t>(r)));
        // Exact conditional moments: the centering carries no estimation bias.
        Eigen::MatrixXd means(n, 2);
        for (int i = 0; i < n; ++i) means.row(i) = fam.moments(data.times()[i]).transpose();
        QuadraticObjective obj = build_objective(data, fmap, w, cond_exp_from_matrix(means));
        grads.row(r) = obj.gradient(alpha_star).transpose();
    }
    Eigen::RowVector2d mean = grads.colwise().mean();
    for (int j = 0; j < 2; ++j) {
        double sd = std::sqrt((grads.col(j).array() - mean[j]).square().sum() / (R - 1));
        double half_width = 4.0 * sd / std::sqrt(static_cast<double>(R));
        if (std::abs(mean[j]) > half_width)
            fails.push_back(format_msg("gradient coordinate ", j, " mean ", mean[j], " exceeds ", half_width));
    }
    return fails;
}

Failures objective_exactly_quadratic() {
    Failures fails;
    std::mt19937_64 rng(107);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int c = 0; c < 100; ++c) {
        int n = 15, d = 2;
        Eigen::VectorXd t(n);
        for (int i = 0; i < n; ++i) t[i] = unif(rng);
        TimedDataset ds = TimedDataset::paired(t, random_matrix(rng, n, d), 0.0, 1.0);
        FeatureMap fmap = FeatureMap::gaussian_pairwise(d);
        CondExpConfig cfg;
        QuadraticObjective obj = build_objective(ds, fmap, WeightFunction(), estimate_cond_exp(ds, fmap, cfg));
        Eigen::VectorXd alpha = random_vector(rng, obj.dim());
        double a = std::uniform_real_distribution<double>(-3.0, 3.0)(rng);
        double lhs = obj.value(a * alpha);
        double rhs = a * a * alpha.dot(obj.H * alpha) + 2.0 * a * obj.c.dot(alpha);
        if (std::abs(lhs - rhs) > 1e-10 * (1.0 + std::abs(rhs)))
            fails.push_back(format_msg("objective not exactly quadratic: ", lhs, " vs ", rhs));
    }
    return fails;
}

Failures minimizer_permutation_invariance() {
    Failures fails;
    std::mt19937_64 rng(108);
    for (int c = 0; c < 100; ++c) {
        // Grouped data keeps within-block row order, so permuting block rows
        // exercises a different summation order.
        int m = 4, n_per = 6, d = 2;
        Eigen::VectorXd stamps(m);
        std::vector<Eigen::MatrixXd> blocks, shuffled;
        for (int j = 0; j < m; ++j) {
            stamps[j] = (j + 0.5) / m;
            Eigen::MatrixXd block = random_matrix(rng, n_per, d);
            blocks.push_back(block);
            std::vector<int> perm(n_per);
            std::iota(perm.begin(), perm.end(), 0);
            std::shuffle(perm.begin(), perm.end(), rng);
            Eigen::MatrixXd moved(n_per, d);
            for (int i = 0; i < n_per; ++i) moved.row(i) = block.row(perm[static_cast<std::size_t>(i)]);
            shuffled.push_back(moved);
        }
        FeatureMap fmap = FeatureMap::gaussian_pairwise(d);
        WeightFunction w;
        CondExpConfig cfg;
        TimedDataset a = TimedDataset::grouped(stamps, blocks, 0.0, 1.0);
        TimedDataset b = TimedDataset::grouped(stamps, shuffled, 0.0, 1.0);
        Eigen::VectorXd ma = closed_form_minimizer(build_objective(a, fmap, w, estimate_cond_exp(a, fmap, cfg)), 1e-9);
        Eigen::VectorXd mb = closed_form_minimizer(build_objective(b, fmap, w, estimate_cond_exp(b, fmap, cfg)), 1e-9);
        if ((ma - mb).cwiseAbs().maxCoeff() > 1e-8)
            fails.push_back(format_msg("minimizer moved by ", (ma - mb).cwiseAbs().maxCoeff(),
                                       " under row permutation"));
    }
    return fails;
}

// ---------------------------------------------------------------- solver

Failures lasso_path_monotone() {
    Failures fails;
    std::mt19937_64 rng(109);
    for (int c = 0; c < 100; ++c) {
        QuadraticObjective obj;
        obj.H = random_spd(rng, 8, 0.2);
        obj.c = random_vector(rng, 8);
        obj.n_rows = 1;
        obj.k = 8;
        double lambda_max = 2.0 * obj.c.cwiseAbs().maxCoeff();
        // Non-increasing in lambda: scanning lambda downward, the l1 norm
        // must never shrink.
        double prev_norm = 0.0;
        for (int gi = 0; gi < 10; ++gi) {
            double lambda = lambda_max * (10 - gi) / 10.0;
            LassoConfig cfg;
            cfg.lambda = lambda;
            cfg.tol = 1e-10;
            double norm = lasso_minimize(obj, cfg).alpha_hat.lpNorm<1>();
            if (norm < prev_norm - 1e-8)
                fails.push_back(format_msg("l1 norm fell from ", prev_norm, " to ", norm,
                                           " when lambda fell to ", lambda));
            prev_norm = norm;
        }
    }
    return fails;
}

Failures lasso_screening_exact_zero() {
    Failures fails;
    std::mt19937_64 rng(110);
    for (int c = 0; c < 100; ++c) {
        int p = 6;
        QuadraticObjective obj;
        obj.H = random_spd(rng, p, 0.3);
        int dead = std::uniform_int_distribution<int>(0, p - 1)(rng);
        obj.H.row(dead).setZero();
        obj.H.col(dead).setZero();
        obj.c = random_vector(rng, p);
        double lambda = 2.0 * std::abs(obj.c[dead]) + 0.5;  // |2 c_dead| < lambda - 1e-12
        obj.n_rows = 1;
        obj.k = p;
        LassoConfig cfg;
        cfg.lambda = lambda;
        LassoSolution sol = lasso_minimize(obj, cfg);
        if (sol.alpha_hat[dead] != 0.0)
            fails.push_back(format_msg("screened coordinate ", dead, " is nonzero"));
    }
    return fails;
}

Failures lasso_objective_descent() {
    Failures fails;
    std::mt19937_64 rng(111);
    for (int c = 0; c < 100; ++c) {
        QuadraticObjective obj;
        obj.H = random_spd(rng, 10, 0.05);
        obj.c = random_vector(rng, 10);
        obj.n_rows = 1;
        obj.k = 10;
        std::vector<double> trace;
        LassoConfig cfg;
        cfg.lambda = 0.3;
        cfg.objective_trace = &trace;
        lasso_minimize(obj, cfg);
        // Non-increasing up to float noise (the solver's own descent bound);
        // a plain accelerated scheme overshoots by many orders more.
        for (std::size_t i = 1; i < trace.size(); ++i)
            if (trace[i] > trace[i - 1] + 2e-12 * (1.0 + std::abs(trace[i - 1])))
                fails.push_back(format_msg("objective rose at iteration ", i));
    }
    return fails;
}

// ------------------------------------------------------------- inference

Failures debias_exact_on_quadratics() {
    Failures fails;
    std::mt19937_64 rng(112);
    for (int c = 0; c < 100; ++c) {
        int p = 6;
        QuadraticObjective obj;
        obj.H = random_spd(rng, p);
        obj.c = random_vector(rng, p);
        obj.n_rows = 1;
        obj.k = p;
        Eigen::VectorXd minimizer = closed_form_minimizer(obj);
        for (double lambda : {0.0, 0.1, 1.0}) {
            LassoConfig cfg;
            cfg.lambda = lambda;
            cfg.tol = 1e-12;
            cfg.max_iter = 100000;
            Eigen::VectorXd alpha_hat = lasso_minimize(obj, cfg).alpha_hat;
            Eigen::VectorXd grad = obj.gradient(alpha_hat);
            int j = std::uniform_int_distribution<int>(0, p - 1)(rng);
            LassoConfig wcfg;
            wcfg.tol = 1e-13;
            wcfg.max_iter = 200000;
            Eigen::VectorXd omega = solve_inverse_hessian_column(obj, j, 0.0, wcfg).alpha_hat;
            double tilde = debias(alpha_hat, omega, grad, j);
            if (std::abs(tilde - minimizer[j]) > 1e-8)
                fails.push_back(format_msg("debias missed the minimizer by ", std::abs(tilde - minimizer[j]),
                                           " at lambda=", lambda));
        }
    }
    return fails;
}

Failures ci_width_scales_with_sqrt_n() {
    Failures fails;
    const int d = 5, R = 40;
    FeatureMap fmap = FeatureMap::gaussian_pairwise(d);
    Eigen::MatrixXd theta0 = build_theta0(d, Theta0Style::Inference, 55);
    PrecisionPath path = PrecisionPath::make(theta0, {});
    WeightFunction w;
    InferenceOptions opts;
    opts.targets = {1};

    auto median_width = [&](int n) {
        std::vector<double> widths;
        for (int r = 0; r < R; ++r) {
            TimedDataset data =
                sample_ggm_paired(path, n, split_seed(808, static_cast<std::uint64_t>(1000 * n + r)));
            InferenceReport rep = run_pipeline(data, fmap, w, opts);
            widths.push_back(rep.coords.front().ci_hi - rep.coords.front().ci_lo);
        }
        std::nth_element(widths.begin(), widths.begin() + R / 2, widths.end());
        return widths[R / 2];
    };
    double w200 = median_width(200), w400 = median_width(400);
    double ratio = w200 / w400;
    if (ratio < std::sqrt(2.0) * 0.85 || ratio > std::sqrt(2.0) * 1.15)
        fails.push_back(format_msg("median CI width ratio ", ratio, " outside sqrt(2) +- 15%"));
    return fails;
}

Failures report_determinism() {
    Failures fails;
    Eigen::MatrixXd theta0 = build_theta0(4, Theta0Style::Inference, 77);
    PrecisionPath path = PrecisionPath::make(theta0, {});
    TimedDataset data = sample_ggm_paired(path, 150, 78);
    FeatureMap fmap = FeatureMap::gaussian_pairwise(4);
    WeightFunction w;
    InferenceOptions opts;
    InferenceReport a = run_pipeline(data, fmap, w, opts);
    InferenceReport b = run_pipeline(data, fmap, w, opts);
    for (std::size_t i = 0; i < a.coords.size(); ++i) {
        if (a.coords[i].alpha_tilde != b.coords[i].alpha_tilde ||
            a.coords[i].sigma_hat != b.coords[i].sigma_hat || a.coords[i].z != b.coords[i].z)
            fails.push_back("pipeline reports differ between identical runs");
    }
    return fails;
}

// ----------------------------------------------------------- changepoint

Failures interval_filters_idempotent() {
    Failures fails;
    std::mt19937_64 rng(113);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int c = 0; c < 100; ++c) {
        // Random sorted disjoint intervals.
        std::vector<ChangeInterval> raw;
        double cursor = 0.0;
        while (cursor < 0.9) {
            double lo = cursor + 0.002 + 0.05 * unif(rng);
            double hi = lo + 0.06 * unif(rng);
            if (hi > 1.0) break;
            ChangeInterval iv;
            iv.lo = lo;
            iv.hi = hi;
            iv.max_stat = unif(rng);
            raw.push_back(iv);
            cursor = hi;
        }
        double eps_sp = 0.02 * unif(rng), eps_pp = 0.03 * unif(rng);
        auto once = filter_intervals(raw, eps_sp, eps_pp);
        auto twice = filter_intervals(once, eps_sp, eps_pp);
        if (once.size() != twice.size()) {
            fails.push_back("filtering is not idempotent (size changed)");
            continue;
        }
        for (std::size_t i = 0; i < once.size(); ++i)
            if (once[i].lo != twice[i].lo || once[i].hi != twice[i].hi)
                fails.push_back("filtering is not idempotent (bounds moved)");
        // Sorted and disjoint output.
        for (std::size_t i = 1; i < once.size(); ++i)
            if (once[i].lo < once[i - 1].hi) fails.push_back("filtered intervals overlap");
    }
    return fails;
}

Failures changepoint_affine_invariance() {
    Failures fails;
    for (int c = 0; c < 20; ++c) {
        auto rng = make_rng(split_seed(114, static_cast<std::uint64_t>(c)));
        std::normal_distribution<double> gauss(0.0, 1.0);
        int n = 300;
        Eigen::VectorXd t(n);
        Eigen::MatrixXd obs(n, 1);
        for (int i = 0; i < n; ++i) {
            t[i] = (i + 0.5) / n;
            obs(i, 0) = (t[i] < 0.5 ? 0.0 : 1.5) + gauss(rng);
        }
        ChangepointRunConfig cfg;
        cfg.bins = 15;
        ChangeReport a = univariate_change_report(TimedDataset::paired(t, obs, 0.0, 1.0), cfg);
        Eigen::VectorXd t2 = (t.array() * 250.0 - 30.0).matrix();
        ChangeReport b = univariate_change_report(TimedDataset::paired(t2, obs, -30.0, 220.0), cfg);
        if (a.filtered_intervals.size() != b.filtered_intervals.size()) {
            fails.push_back("interval count changed under affine re-indexing");
            continue;
        }
        for (std::size_t i = 0; i < a.filtered_intervals.size(); ++i)
            if (std::abs(a.filtered_intervals[i].lo - b.filtered_intervals[i].lo) > 1e-9 ||
                std::abs(a.filtered_intervals[i].hi - b.filtered_intervals[i].hi) > 1e-9)
                fails.push_back("interval bounds moved under affine re-indexing");
    }
    return fails;
}

// -------------------------------------------------------------- simulate

Failures mask_matches_nonzero_derivatives() {
    Failures fails;
    std::mt19937_64 seeds(115);
    for (int c = 0; c < 100; ++c) {
        PrecisionPath path = (c % 2 == 0) ? ggm_sine_path(10, seeds(), 0.05)
                                          : ggm_linear_path(10, seeds(), 0.05, 0.45, false);
        FeatureMap fmap = FeatureMap::gaussian_pairwise(10);
        auto labels = path.feature_labels(fmap);
        auto mask = path.change_mask();
        // Analytic derivative nonzero somewhere on the grid iff masked.
        for (int j = 0; j < fmap.output_dim(); ++j) {
            auto edge = fmap.edge(j);
            double max_abs = 0.0;
            for (int gp = 0; gp <= 20; ++gp)
                max_abs = std::max(max_abs, std::abs(path.dtheta(gp / 20.0)(edge->first, edge->second)));
            bool in_mask = labels[static_cast<std::size_t>(j)];
            if (in_mask != (max_abs > 0.0))
                fails.push_back(format_msg("label/derivative mismatch at feature ", j));
        }
        (void)mask;
    }
    return fails;
}

Failures random_constructions_reproducible() {
    Failures fails;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        PrecisionPath a = ggm_sine_path(8, seed, 0.1);
        PrecisionPath b = ggm_sine_path(8, seed, 0.1);
        if (a.change_mask() != b.change_mask()) fails.push_back("sine mask differs across identical seeds");
        if ((a.theta0() - b.theta0()).cwiseAbs().maxCoeff() != 0.0)
            fails.push_back("theta0 differs across identical seeds");
    }
    return fails;
}

// ------------------------------------------------------------------ eval

Failures auc_invariant_to_monotone_transforms() {
    Failures fails;
    std::mt19937_64 rng(116);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int c = 0; c < 100; ++c) {
        int k = 60;
        Eigen::VectorXd scores(k);
        std::vector<bool> labels(static_cast<std::size_t>(k));
        int pos = 0;
        for (int i = 0; i < k; ++i) {
            scores[i] = 4.0 * unif(rng) - 2.0;
            labels[static_cast<std::size_t>(i)] = unif(rng) < 0.4;
            pos += labels[static_cast<std::size_t>(i)];
        }
        if (pos == 0 || pos == k) continue;
        double base = roc_from_scores(scores, labels).auc;
        Eigen::VectorXd expd = scores.array().exp().matrix();
        Eigen::VectorXd atand = scores.array().atan().matrix();
        if (std::abs(roc_from_scores(expd, labels).auc - base) > 1e-12 ||
            std::abs(roc_from_scores(atand, labels).auc - base) > 1e-12)
            fails.push_back("AUC changed under a strictly increasing transform");
    }
    return fails;
}

Failures experiments_reproducible() {
    Failures fails;
    CoverageResult a = ggm_coverage_experiment(InferenceDesign::Random, 6, 100, 8, 0.95, 3131);
    CoverageResult b = ggm_coverage_experiment(InferenceDesign::Random, 6, 100, 8, 0.95, 3131);
    if (a.misses != b.misses) fails.push_back("coverage misses differ across identical runs");

    Eigen::VectorXd effects(1);
    effects << 4.0;
    auto pa = power_curve(effects, 6, 0.95, 77, 6, 100);
    auto pb = power_curve(effects, 6, 0.95, 77, 6, 100);
    if (pa[0].rejection_rate != pb[0].rejection_rate)
        fails.push_back("power points differ across identical runs");
    return fails;
}

}  // namespace

const std::vector<PropertyCheck>& all_property_checks() {
    static const std::vector<PropertyCheck> checks = {
        {"model", "basis derivatives match finite differences", basis_derivatives_match_fd},
        {"model", "weight boundary zeros are exact", weight_boundary_zeros_exact},
        {"model", "single-coordinate input hits a single pairwise feature",
         gaussian_single_coordinate_single_feature},
        {"condexp", "NW rows stay in the convex hull", nw_convex_hull},
        {"condexp", "NW is permutation invariant", nw_permutation_invariance},
        {"condexp", "NW self-weight dominates as bandwidth vanishes", nw_small_bandwidth_self_weight},
        {"objective", "gradient at the truth is zero-mean", objective_zero_mean_gradient_at_truth},
        {"objective", "objective is exactly quadratic in alpha", objective_exactly_quadratic},
        {"objective", "minimizer is invariant to row permutation", minimizer_permutation_invariance},
        {"solver", "l1 norm of the solution is monotone in lambda", lasso_path_monotone},
        {"solver", "screened coordinates are exactly zero", lasso_screening_exact_zero},
        {"solver", "regularized objective descends monotonically", lasso_objective_descent},
        {"inference", "debiasing is exact on quadratics", debias_exact_on_quadratics},
        {"inference", "CI width shrinks like 1/sqrt(n)", ci_width_scales_with_sqrt_n},
        {"inference", "reports are deterministic", report_determinism},
        {"changepoint", "interval filters are idempotent", interval_filters_idempotent},
        {"changepoint", "detection is invariant to affine time re-indexing", changepoint_affine_invariance},
        {"simulate", "change masks equal the nonzero-derivative set", mask_matches_nonzero_derivatives},
        {"simulate", "random constructions are seed-reproducible", random_constructions_reproducible},
        {"eval", "AUC is invariant under increasing transforms", auc_invariant_to_monotone_transforms},
        {"eval", "experiments replay bit-identically from seeds", experiments_reproducible},
    };
    return checks;
}

}  // namespace property_checks
