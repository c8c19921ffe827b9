#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <regex>

#include <json.hpp>

#include "spartsm/commands.hpp"
#include "spartsm/evaluate.hpp"
#include "spartsm/io.hpp"
#include "spartsm/simulate.hpp"

using namespace spartsm;
using namespace spartsm::cli;
using nlohmann::json;

namespace {

namespace fs = std::filesystem;

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / fs::path("spartsm_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string strip_timestamp(std::string text) {
    static const std::regex ts("\"timestamp\": \"[^\"]*\"");
    return std::regex_replace(text, ts, "\"timestamp\": \"\"");
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("configs round-trip through json losslessly") {
    SimulateConfig sim;
    sim.model = "ggm-linear";
    sim.d = 12;
    sim.seed = 99;
    sim.p = 0.05;
    CHECK(to_json(simulate_config_from_json(to_json(sim))) == to_json(sim));

    FitConfig fit;
    fit.data = "x.csv";
    fit.basis = "fourier:6";
    fit.domain = std::make_pair(3.0, 9.0);
    CHECK(to_json(fit_config_from_json(to_json(fit))) == to_json(fit));

    InferConfig inf;
    inf.data = "x.csv";
    inf.targets = {"1-2", "7"};
    CHECK(to_json(infer_config_from_json(to_json(inf))) == to_json(inf));

    ChangepointConfig cp;
    cp.data = "y.csv";
    cp.eps_pp = 0.05;
    CHECK(to_json(changepoint_config_from_json(to_json(cp))) == to_json(cp));

    EvalConfig ev;
    ev.task = "power";
    ev.effects = {0.0, 1.0};
    CHECK(to_json(eval_config_from_json(to_json(ev))) == to_json(ev));
}

TEST_CASE("unknown config keys are rejected") {
    json j = to_json(SimulateConfig{});
    j["typo_key"] = 1;
    CHECK_THROWS_AS(simulate_config_from_json(j), ConfigError);

    json fit = to_json(FitConfig{});
    fit["lambda_extra"] = 0.1;
    CHECK_THROWS_AS(fit_config_from_json(fit), ConfigError);
}

TEST_CASE("simulate writes a dataset and a matching truth file") {
    TempDir tmp;
    SimulateConfig cfg;
    cfg.model = "ggm-sine";
    cfg.d = 10;
    cfg.n = 200;
    cfg.seed = 7;
    cfg.out = tmp.file("data.csv");
    cfg.truth_out = tmp.file("truth.json");
    cmd_simulate(cfg);

    CsvData csv = read_dataset_csv(cfg.out);
    CHECK(csv.obs.rows() == 200);
    CHECK(csv.obs.cols() == 10);

    json truth = json::parse(slurp(cfg.truth_out));
    CHECK(truth["model"] == "ggm-sine");
    CHECK(truth["seed"] == 7);
    // Recorded mask equals the path realized from the same seed.
    PrecisionPath path = ggm_sine_path(10, 7, 0.02);
    CHECK(truth["mask"].size() == path.change_mask().size());
}

TEST_CASE("simulate rejects bad dimensions with a config error") {
    SimulateConfig cfg;
    cfg.d = 0;
    CHECK_THROWS_AS(cmd_simulate(cfg), ConfigError);
}

TEST_CASE("ising simulate writes a binary csv") {
    TempDir tmp;
    SimulateConfig cfg;
    cfg.model = "ising";
    cfg.d = 6;
    cfg.n = 60;
    cfg.seed = 5;
    cfg.out = tmp.file("ising.csv");
    cfg.truth_out = tmp.file("ising_truth.json");
    cmd_simulate(cfg);
    CsvData csv = read_dataset_csv(cfg.out);
    for (Eigen::Index r = 0; r < csv.obs.rows(); ++r)
        for (Eigen::Index c = 0; c < csv.obs.cols(); ++c)
            CHECK((csv.obs(r, c) == 0.0 || csv.obs(r, c) == 1.0));
}

TEST_CASE("fit with a huge penalty returns the all-zero model and reruns identically") {
    TempDir tmp;
    // Tiny hand-written dataset (n = 4, d = 2).
    write_text_file(tmp.file("tiny.csv"),
                    "t,x1,x2\n0.0,1.0,2.0\n0.3,0.5,-1.0\n0.7,-0.25,0.75\n1.0,2.0,0.0\n");
    FitConfig cfg;
    cfg.data = tmp.file("tiny.csv");
    cfg.lambda = 1e6;
    cfg.out = tmp.file("fit.json");
    cmd_fit(cfg);
    json fit = json::parse(slurp(cfg.out));
    for (const auto& row : fit["alpha"])
        for (const auto& v : row) CHECK(v.get<double>() == 0.0);
    CHECK(fit["support"].empty());

    // Re-running with identical flags gives identical bytes modulo timestamp.
    std::string first = slurp(cfg.out);
    cfg.out = tmp.file("fit2.json");
    cmd_fit(cfg);
    CHECK(strip_timestamp(first) == strip_timestamp(slurp(cfg.out)));
}

TEST_CASE("fit with lambda auto records the default penalty") {
    TempDir tmp;
    SimulateConfig sim;
    sim.model = "ggm-sine";
    sim.d = 5;
    sim.n = 150;
    sim.seed = 3;
    sim.out = tmp.file("d.csv");
    sim.truth_out = tmp.file("t.json");
    cmd_simulate(sim);

    FitConfig cfg;
    cfg.data = tmp.file("d.csv");
    cfg.out = tmp.file("fit.json");
    cmd_fit(cfg);
    json fit = json::parse(slurp(cfg.out));
    int k = 5 * 6 / 2;
    double expect = std::sqrt(2.0 * std::log(static_cast<double>(k)) / 150.0);
    CHECK(fit["meta"]["lambda"].get<double>() == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("infer writes per-target entries with edges") {
    TempDir tmp;
    SimulateConfig sim;
    sim.model = "ggm-inference-det";
    sim.d = 8;
    sim.n = 150;
    sim.seed = 11;
    sim.out = tmp.file("d.csv");
    sim.truth_out = tmp.file("t.json");
    cmd_simulate(sim);

    InferConfig cfg;
    cfg.data = tmp.file("d.csv");
    cfg.targets = {"1-2"};
    cfg.out = tmp.file("report.json");
    cmd_infer(cfg);
    json report = json::parse(slurp(cfg.out));
    REQUIRE(report["coordinates"].size() == 1);
    const auto& coord = report["coordinates"][0];
    CHECK(coord["feature_index"] == 1);  // (0,1) in the upper-triangular layout
    CHECK(coord["edge"][0] == 0);
    CHECK(coord["edge"][1] == 1);
    CHECK(coord.contains("ci"));
    double lo = coord["ci"][0].get<double>(), hi = coord["ci"][1].get<double>();
    CHECK(lo < hi);
}

TEST_CASE("changepoint command emits a report and a stat csv") {
    TempDir tmp;
    TimedDataset series = mean_shift_series(600, 2.0, 0.5, 2024);
    write_dataset_csv(tmp.file("series.csv"), series.times(), series.observations());

    ChangepointConfig cfg;
    cfg.data = tmp.file("series.csv");
    cfg.delta = 0.05;
    cfg.out = tmp.file("change.json");
    cfg.stat_csv = tmp.file("stat.csv");
    cmd_changepoint(cfg);

    json change = json::parse(slurp(cfg.out));
    CHECK(change.contains("intervals"));
    std::string stat = slurp(cfg.stat_csv);
    CHECK(stat.rfind("t,stat_1,stat_2", 0) == 0);
}

TEST_CASE("ising family fit runs on binary vote-style data") {
    TempDir tmp;
    SimulateConfig sim;
    sim.model = "ising";
    sim.d = 6;
    sim.n = 120;
    sim.seed = 9;
    sim.p = 0.3;
    sim.out = tmp.file("votes.csv");
    sim.truth_out = tmp.file("votes_truth.json");
    cmd_simulate(sim);

    FitConfig cfg;
    cfg.data = tmp.file("votes.csv");
    cfg.family = "ising";
    cfg.out = tmp.file("ising_fit.json");
    cmd_fit(cfg);
    json fit = json::parse(slurp(cfg.out));
    CHECK(fit["meta"]["feature_dim"] == 15);  // 6*5/2 strict upper pairs
    CHECK(fit["meta"]["converged"].get<bool>());
}

TEST_CASE("grouped csv round trip reconstructs blocks") {
    TempDir tmp;
    SimulateConfig cfg;
    cfg.model = "ggm-sine";
    cfg.d = 3;
    cfg.grouped = true;
    cfg.m = 5;
    cfg.block_n = 7;
    cfg.seed = 13;
    cfg.out = tmp.file("grouped.csv");
    cfg.truth_out = tmp.file("truth.json");
    cmd_simulate(cfg);

    CsvData csv = read_dataset_csv(cfg.out);
    TimedDataset ds = dataset_from_csv(csv, /*grouped=*/true);
    CHECK(ds.layout() == TimedDataset::Layout::Grouped);
    CHECK(ds.n_times() == 5);
    for (const auto& block : ds.blocks()) CHECK(block.rows() == 7);
}

TEST_CASE("binary exit codes match the contract") {
    std::string exe = SPARTSM_CLI_PATH;
    TempDir tmp;
    int rc = std::system((exe + " simulate --d 0 --out " + tmp.file("x.csv") + " --truth " +
                          tmp.file("x.json") + " 2>/dev/null")
                             .c_str());
    CHECK(WEXITSTATUS(rc) == 2);

    rc = std::system((exe + " infer --data /nonexistent_dir/none.csv --out " + tmp.file("r.json") +
                      " 2>/dev/null")
                         .c_str());
    CHECK(WEXITSTATUS(rc) == 1);

    rc = std::system((exe + " --help > /dev/null").c_str());
    CHECK(WEXITSTATUS(rc) == 0);

    // Subcommand help documents flags with their defaults.
    rc = std::system((exe + " fit --help > " + tmp.file("help.txt")).c_str());
    CHECK(WEXITSTATUS(rc) == 0);
    std::string help = slurp(tmp.file("help.txt"));
    CHECK(help.find("--lambda") != std::string::npos);
    CHECK(help.find("--bandwidth") != std::string::npos);
}

TEST_CASE("eval tasks write their summaries and point files") {
    TempDir tmp;
    EvalConfig ev;
    ev.out_dir = tmp.path.string();
    ev.seed = 12;

    ev.task = "roc";
    ev.design = "linear";
    ev.d = 8;
    ev.n = 300;
    ev.seeds = 2;
    cmd_eval(ev);
    json roc = json::parse(slurp(tmp.file("roc_summary.json")));
    CHECK(roc["aucs"].size() == 2);
    CHECK(slurp(tmp.file("roc_points.csv")).rfind("threshold,fpr,tpr", 0) == 0);

    ev.task = "coverage";
    ev.design = "deterministic";
    ev.d = 8;
    ev.n = 120;
    ev.replications = 6;
    cmd_eval(ev);
    json cov = json::parse(slurp(tmp.file("coverage_summary.json")));
    CHECK(cov["replications"] == 6);
    CHECK(cov["miss_rate"].get<double>() >= 0.0);

    ev.task = "power";
    ev.effects = {0.0, 8.0};
    ev.replications = 5;
    cmd_eval(ev);
    json pow = json::parse(slurp(tmp.file("power_summary.json")));
    CHECK(pow["points"].size() == 2);
    CHECK(slurp(tmp.file("power_points.csv")).rfind("effect,rejection_rate", 0) == 0);

    ev.task = "normality";
    ev.replications = 60;
    cmd_eval(ev);
    json norm = json::parse(slurp(tmp.file("normality_summary.json")));
    CHECK(norm["ks_stat"].get<double>() >= 0.0);
    CHECK(slurp(tmp.file("qq_points.csv")).rfind("normal_quantile,residual", 0) == 0);

    ev.task = "nonsense";
    CHECK_THROWS_AS(cmd_eval(ev), ConfigError);
}

TEST_CASE("bad targets and missing files are config errors") {
    InferConfig cfg;
    cfg.data = "/nonexistent/file.csv";
    CHECK_THROWS(cmd_infer(cfg));

    TempDir tmp;
    write_text_file(tmp.file("d.csv"), "t,x1\n0,1\n1,2\n");
    InferConfig bad;
    bad.data = tmp.file("d.csv");
    bad.targets = {"not-a-number"};
    CHECK_THROWS_AS(cmd_infer(bad), ConfigError);
}

}  // TEST_SUITE
