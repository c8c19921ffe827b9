#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace spartsm::cli {

/// Configuration problems exit with code 2; runtime failures with 1.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SimulateConfig {
    std::string model = "ggm-sine";  // ggm-sine | ggm-linear | ggm-inference-det |
                                     // ggm-inference-random | trunc-ggm | ising | gaussian1d
    int d = 20;
    int n = 1000;
    bool grouped = false;
    int m = 20;       // grouped: number of blocks
    int block_n = 0;  // grouped: samples per block (0 = n / m)
    std::uint64_t seed = 1;
    double p = -1.0;       // mask probability (<0 = model default)
    double effect = 0.0;   // inference designs: ramp slope of edge (1,2)
    double mu0 = 0.0, mu1 = 1.0, sigma0 = 1.0, sigma1 = 0.0;  // gaussian1d
    std::string out = "dataset.csv";
    std::string truth_out = "truth.json";
};

struct FitConfig {
    std::string data;
    bool grouped = false;
    std::optional<std::pair<double, double>> domain;
    std::string family = "auto";  // auto | gaussian | ising | gaussian1d
    std::string basis = "linear";  // linear | fourier:<b>
    double bandwidth = 0.0;        // <= 0: Silverman default
    int bins = 0;                  // > 0: bin paired data first
    double lambda = -1.0;          // < 0: sqrt(2 log k / n)
    std::uint64_t seed = 1;
    std::string out = "fit.json";
};

struct InferConfig {
    std::string data;
    bool grouped = false;
    std::optional<std::pair<double, double>> domain;
    std::string family = "auto";
    double bandwidth = 0.0;
    double lambda = -1.0;
    double lambda_j = -1.0;
    std::vector<std::string> targets;  // feature indices or 1-based "i-j" edges
    double level = 0.95;
    std::uint64_t seed = 1;
    std::string out = "report.json";
};

struct ChangepointConfig {
    std::string data;
    bool grouped = false;
    std::optional<std::pair<double, double>> domain;
    std::string family = "auto";
    std::string basis = "fourier:4";
    int bins = 20;
    double lambda = 0.0;
    double delta = 0.01;
    double eps_sp = 0.01;
    double eps_pp = 0.02;
    int grid = 200;
    std::uint64_t seed = 1;
    std::string out = "change.json";
    std::string stat_csv = "stat.csv";
};

struct EvalConfig {
    std::string task = "coverage";  // roc | coverage | power | normality
    std::string design = "deterministic";  // coverage: deterministic | random; roc: linear | truncated
    int d = 20;
    int n = 400;
    int replications = 500;
    int seeds = 10;  // roc: number of trials
    double level = 0.95;
    std::vector<double> effects = {0.0, 2.0, 4.0, 6.0, 8.0, 10.0};
    std::uint64_t seed = 1;
    std::string out_dir = ".";
};

nlohmann::json to_json(const SimulateConfig& cfg);
nlohmann::json to_json(const FitConfig& cfg);
nlohmann::json to_json(const InferConfig& cfg);
nlohmann::json to_json(const ChangepointConfig& cfg);
nlohmann::json to_json(const EvalConfig& cfg);

/// Strict parsers: unknown keys are rejected with ConfigError.
SimulateConfig simulate_config_from_json(const nlohmann::json& j);
FitConfig fit_config_from_json(const nlohmann::json& j);
InferConfig infer_config_from_json(const nlohmann::json& j);
ChangepointConfig changepoint_config_from_json(const nlohmann::json& j);
EvalConfig eval_config_from_json(const nlohmann::json& j);

void cmd_simulate(const SimulateConfig& cfg);
void cmd_fit(const FitConfig& cfg);
void cmd_infer(const InferConfig& cfg);
void cmd_changepoint(const ChangepointConfig& cfg);
void cmd_eval(const EvalConfig& cfg);

/// Wall-clock stamp written into JSON outputs (the one non-reproducible field).
std::string current_timestamp();

}  // namespace spartsm::cli
