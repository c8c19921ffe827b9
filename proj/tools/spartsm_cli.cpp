// Command-line front end: estimation, inference and changepoint detection on
// time-indexed samples from a time-varying exponential family, plus the
// simulators and evaluation harnesses.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <json.hpp>

#include "spartsm/commands.hpp"
#include "spartsm/parallel.hpp"

namespace {

using nlohmann::json;
using namespace spartsm::cli;

json load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad config JSON: ") + e.what());
    }
}

int threads_from_env() {
    const char* env = std::getenv("SPARTSM_THREADS");
    if (!env) return 0;
    try {
        return std::max(0, std::stoi(env));
    } catch (const std::exception&) {
        return 0;
    }
}

template <typename Config, typename Parser, typename Runner>
int run_command(const std::string& config_path, Config& cfg, Parser parse, Runner run) {
    try {
        if (!config_path.empty()) cfg = parse(load_config_file(config_path));
        run(cfg);
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Differential-parameter estimation and inference via time score matching"};
    app.require_subcommand(1);

    int threads = threads_from_env();
    app.add_option("--threads", threads, "Worker thread cap (default: all cores; env SPARTSM_THREADS)");

    std::string config_path;

    // simulate
    SimulateConfig sim;
    auto* sim_cmd = app.add_subcommand("simulate", "Generate a synthetic dataset CSV plus ground truth");
    sim_cmd->add_option("--config", config_path, "JSON config file (overrides flags)");
    sim_cmd->add_option("--model", sim.model,
                        "ggm-sine|ggm-linear|ggm-inference-det|ggm-inference-random|trunc-ggm|ising|gaussian1d")
        ->capture_default_str();
    sim_cmd->add_option("--d", sim.d, "Observation dimension")->capture_default_str();
    sim_cmd->add_option("--n", sim.n, "Sample count (paired)")->capture_default_str();
    sim_cmd->add_flag("--grouped", sim.grouped, "Write a grouped dataset (m blocks)");
    sim_cmd->add_option("--m", sim.m, "Grouped: block count")->capture_default_str();
    sim_cmd->add_option("--block-n", sim.block_n, "Grouped: samples per block (0 = n/m)")
        ->capture_default_str();
    sim_cmd->add_option("--seed", sim.seed, "Root seed")->capture_default_str();
    sim_cmd->add_option("--p", sim.p, "Change-mask probability (-1 = model default)")->capture_default_str();
    sim_cmd->add_option("--effect", sim.effect, "Inference designs: ramp slope of edge (1,2)")
        ->capture_default_str();
    sim_cmd->add_option("--mu0", sim.mu0, "gaussian1d: mean intercept")->capture_default_str();
    sim_cmd->add_option("--mu1", sim.mu1, "gaussian1d: mean slope")->capture_default_str();
    sim_cmd->add_option("--sigma0", sim.sigma0, "gaussian1d: sd intercept")->capture_default_str();
    sim_cmd->add_option("--sigma1", sim.sigma1, "gaussian1d: sd slope")->capture_default_str();
    sim_cmd->add_option("--out", sim.out, "Dataset CSV path")->capture_default_str();
    sim_cmd->add_option("--truth", sim.truth_out, "Ground-truth JSON path")->capture_default_str();

    // fit
    FitConfig fit;
    auto* fit_cmd = app.add_subcommand("fit", "SparTSM l1 fit of the differential parameter");
    fit_cmd->add_option("--config", config_path, "JSON config file (overrides flags)");
    fit_cmd->add_option("--data", fit.data, "Dataset CSV (header t,x1,...,xd)");
    fit_cmd->add_flag("--grouped", fit.grouped, "Rows sharing a t value form a block");
    std::vector<double> fit_domain;
    fit_cmd->add_option("--domain", fit_domain, "Raw time domain lo hi (default: [min t, max t])")
        ->expected(2);
    fit_cmd->add_option("--family", fit.family, "auto|gaussian|ising|gaussian1d")->capture_default_str();
    fit_cmd->add_option("--basis", fit.basis, "linear|fourier:<b>")->capture_default_str();
    fit_cmd->add_option("--bandwidth", fit.bandwidth, "Kernel bandwidth (0 = Silverman default)")
        ->capture_default_str();
    fit_cmd->add_option("--bins", fit.bins, "Bin paired data into this many blocks first (0 = off)")
        ->capture_default_str();
    fit_cmd->add_option("--lambda", fit.lambda, "l1 penalty (-1 = sqrt(2 log k / n))")->capture_default_str();
    fit_cmd->add_option("--seed", fit.seed, "Seed recorded in outputs")->capture_default_str();
    fit_cmd->add_option("--out", fit.out, "Fit JSON path")->capture_default_str();

    // infer
    InferConfig infer;
    auto* infer_cmd = app.add_subcommand("infer", "Debiased estimates, intervals and tests (SparTSM+)");
    infer_cmd->add_option("--config", config_path, "JSON config file (overrides flags)");
    infer_cmd->add_option("--data", infer.data, "Dataset CSV");
    infer_cmd->add_flag("--grouped", infer.grouped, "Rows sharing a t value form a block");
    std::vector<double> infer_domain;
    infer_cmd->add_option("--domain", infer_domain, "Raw time domain lo hi")->expected(2);
    infer_cmd->add_option("--family", infer.family, "auto|gaussian|ising|gaussian1d")->capture_default_str();
    infer_cmd->add_option("--bandwidth", infer.bandwidth, "Kernel bandwidth (0 = Silverman default)")
        ->capture_default_str();
    infer_cmd->add_option("--lambda", infer.lambda, "l1 penalty (-1 = sqrt(2 log k / n))")
        ->capture_default_str();
    infer_cmd->add_option("--lambda-j", infer.lambda_j, "Inverse-Hessian penalty (-1 = same as --lambda)")
        ->capture_default_str();
    infer_cmd->add_option("--targets", infer.targets,
                          "Feature indices or 1-based edges i-j (default: all coordinates)");
    infer_cmd->add_option("--level", infer.level, "Confidence level")->capture_default_str();
    infer_cmd->add_option("--seed", infer.seed, "Seed recorded in outputs")->capture_default_str();
    infer_cmd->add_option("--out", infer.out, "Report JSON path")->capture_default_str();

    // changepoint
    ChangepointConfig cp;
    auto* cp_cmd = app.add_subcommand("changepoint", "Asymptotic-null change detection");
    cp_cmd->add_option("--config", config_path, "JSON config file (overrides flags)");
    cp_cmd->add_option("--data", cp.data, "Dataset CSV");
    cp_cmd->add_flag("--grouped", cp.grouped, "Rows sharing a t value form a block");
    std::vector<double> cp_domain;
    cp_cmd->add_option("--domain", cp_domain, "Raw time domain lo hi")->expected(2);
    cp_cmd->add_option("--family", cp.family, "auto|gaussian|ising|gaussian1d")->capture_default_str();
    cp_cmd->add_option("--basis", cp.basis, "linear|fourier:<b>")->capture_default_str();
    cp_cmd->add_option("--bins", cp.bins, "Bins for paired data")->capture_default_str();
    cp_cmd->add_option("--lambda", cp.lambda, "l1 penalty for the fit (0 = unregularized)")
        ->capture_default_str();
    cp_cmd->add_option("--delta", cp.delta, "Significance level")->capture_default_str();
    cp_cmd->add_option("--eps-sp", cp.eps_sp, "Small-peak width filter")->capture_default_str();
    cp_cmd->add_option("--eps-pp", cp.eps_pp, "Peak-proximity merge distance")->capture_default_str();
    cp_cmd->add_option("--grid", cp.grid, "Evaluation grid size")->capture_default_str();
    cp_cmd->add_option("--seed", cp.seed, "Seed recorded in outputs")->capture_default_str();
    cp_cmd->add_option("--out", cp.out, "Change report JSON path")->capture_default_str();
    cp_cmd->add_option("--stat-csv", cp.stat_csv, "Per-grid-point statistic CSV path")->capture_default_str();

    // eval
    EvalConfig ev;
    auto* eval_cmd = app.add_subcommand("eval", "Evaluation harnesses: roc|coverage|power|normality");
    eval_cmd->add_option("--config", config_path, "JSON config file (overrides flags)");
    eval_cmd->add_option("task", ev.task, "roc|coverage|power|normality")->capture_default_str();
    eval_cmd->add_option("--design", ev.design, "coverage: deterministic|random; roc: linear|truncated")
        ->capture_default_str();
    eval_cmd->add_option("--d", ev.d, "Observation dimension")->capture_default_str();
    eval_cmd->add_option("--n", ev.n, "Samples per replication")->capture_default_str();
    eval_cmd->add_option("--replications", ev.replications, "Replication count")->capture_default_str();
    eval_cmd->add_option("--seeds", ev.seeds, "roc: number of trials")->capture_default_str();
    eval_cmd->add_option("--level", ev.level, "Confidence level")->capture_default_str();
    eval_cmd->add_option("--effects", ev.effects, "power: effect grid")->capture_default_str();
    eval_cmd->add_option("--seed", ev.seed, "Root seed")->capture_default_str();
    eval_cmd->add_option("--out-dir", ev.out_dir, "Output directory")->capture_default_str();

    CLI11_PARSE(app, argc, argv);
    spartsm::max_threads() = threads;
    if (fit_domain.size() == 2) fit.domain = std::make_pair(fit_domain[0], fit_domain[1]);
    if (infer_domain.size() == 2) infer.domain = std::make_pair(infer_domain[0], infer_domain[1]);
    if (cp_domain.size() == 2) cp.domain = std::make_pair(cp_domain[0], cp_domain[1]);

    if (sim_cmd->parsed()) return run_command(config_path, sim, simulate_config_from_json, cmd_simulate);
    if (fit_cmd->parsed()) return run_command(config_path, fit, fit_config_from_json, cmd_fit);
    if (infer_cmd->parsed()) return run_command(config_path, infer, infer_config_from_json, cmd_infer);
    if (cp_cmd->parsed()) return run_command(config_path, cp, changepoint_config_from_json, cmd_changepoint);
    if (eval_cmd->parsed()) return run_command(config_path, ev, eval_config_from_json, cmd_eval);
    std::cerr << "no subcommand given\n";
    return 2;
}
