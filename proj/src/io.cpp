#include "spartsm/io.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace spartsm {

using nlohmann::json;

CsvData read_dataset_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open dataset file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty dataset file: " + path);

    auto split = [](const std::string& s) {
        std::vector<std::string> cells;
        std::stringstream ss(s);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        return cells;
    };

    std::vector<std::string> header = split(line);
    if (header.size() < 2 || header[0] != "t")
        throw std::runtime_error("dataset CSV must start with header t,x1,...,xd");
    std::size_t d = header.size() - 1;

    std::vector<double> times;
    std::vector<double> values;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> cells = split(line);
        if (cells.size() != d + 1)
            throw std::runtime_error("dataset CSV row " + std::to_string(line_no) + " has wrong arity");
        try {
            times.push_back(std::stod(cells[0]));
            for (std::size_t c = 1; c < cells.size(); ++c) values.push_back(std::stod(cells[c]));
        } catch (const std::exception&) {
            throw std::runtime_error("dataset CSV row " + std::to_string(line_no) + " has a non-numeric cell");
        }
    }
    if (times.empty()) throw std::runtime_error("dataset CSV has no data rows");

    CsvData out;
    out.times = Eigen::Map<Eigen::VectorXd>(times.data(), static_cast<Eigen::Index>(times.size()));
    out.obs.resize(static_cast<Eigen::Index>(times.size()), static_cast<Eigen::Index>(d));
    for (std::size_t r = 0; r < times.size(); ++r)
        for (std::size_t c = 0; c < d; ++c)
            out.obs(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = values[r * d + c];
    return out;
}

void write_dataset_csv(const std::string& path, const Eigen::VectorXd& raw_times,
                       const Eigen::MatrixXd& obs) {
    if (raw_times.size() != obs.rows()) throw std::invalid_argument("write_dataset_csv: size mismatch");
    std::ostringstream out;
    out.precision(17);
    out << "t";
    for (Eigen::Index c = 0; c < obs.cols(); ++c) out << ",x" << (c + 1);
    out << "\n";
    for (Eigen::Index r = 0; r < obs.rows(); ++r) {
        out << raw_times[r];
        for (Eigen::Index c = 0; c < obs.cols(); ++c) out << "," << obs(r, c);
        out << "\n";
    }
    write_text_file(path, out.str());
}

TimedDataset dataset_from_csv(const CsvData& csv, bool grouped,
                              std::optional<std::pair<double, double>> domain) {
    double lo = domain ? domain->first : csv.times.minCoeff();
    double hi = domain ? domain->second : csv.times.maxCoeff();
    if (!grouped) return TimedDataset::paired(csv.times, csv.obs, lo, hi);

    // Rows sharing a raw stamp form a block.
    std::map<double, std::vector<Eigen::Index>> groups;
    for (Eigen::Index i = 0; i < csv.times.size(); ++i) groups[csv.times[i]].push_back(i);
    Eigen::VectorXd stamps(static_cast<Eigen::Index>(groups.size()));
    std::vector<Eigen::MatrixXd> blocks;
    Eigen::Index g = 0;
    for (const auto& [stamp, rows] : groups) {
        stamps[g++] = stamp;
        Eigen::MatrixXd block(static_cast<Eigen::Index>(rows.size()), csv.obs.cols());
        for (std::size_t r = 0; r < rows.size(); ++r)
            block.row(static_cast<Eigen::Index>(r)) = csv.obs.row(rows[r]);
        blocks.push_back(std::move(block));
    }
    return TimedDataset::grouped(stamps, std::move(blocks), lo, hi);
}

std::string inference_report_json(const InferenceReport& report, const FeatureMap& fmap,
                                  const std::string& timestamp) {
    json meta{{"n", report.n},
              {"k", report.k},
              {"lambda_lasso", report.lambda_lasso},
              {"lambda_j", report.lambda_j},
              {"delta", report.delta},
              {"lasso_converged", report.lasso_converged},
              {"timestamp", timestamp}};
    json coords = json::array();
    for (const auto& ci : report.coords) {
        json entry{{"feature_index", ci.feature}, {"alpha_hat", ci.alpha_hat},
                   {"alpha_tilde", ci.alpha_tilde}, {"sigma_hat", ci.sigma_hat},
                   {"z", ci.z},                     {"ci", {ci.ci_lo, ci.ci_hi}},
                   {"reject", ci.reject}};
        auto edge = fmap.edge(ci.feature);
        entry["edge"] = edge ? json{edge->first, edge->second} : json(nullptr);
        if (ci.sigma_clamped) entry["sigma_clamped"] = true;
        if (!ci.omega_converged) entry["omega_converged"] = false;
        coords.push_back(entry);
    }
    return json{{"meta", meta}, {"coordinates", coords}}.dump(2) + "\n";
}

std::string fit_json(const DiffParamFit& fit, const FeatureMap& fmap, const std::string& timestamp) {
    const Eigen::MatrixXd& alpha = fit.param.alpha;
    json alpha_rows = json::array();
    for (Eigen::Index r = 0; r < alpha.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < alpha.cols(); ++c) row.push_back(alpha(r, c));
        alpha_rows.push_back(row);
    }
    json support = json::array();
    for (int idx : fit.support) {
        int feature = idx / static_cast<int>(alpha.rows());
        json entry{{"coef_index", idx}, {"feature_index", feature}};
        auto edge = fmap.edge(feature);
        entry["edge"] = edge ? json{edge->first, edge->second} : json(nullptr);
        support.push_back(entry);
    }
    return json{{"meta",
                 {{"lambda", fit.lambda},
                  {"iterations", fit.iterations},
                  {"converged", fit.converged},
                  {"subgradient_gap", fit.subgradient_gap},
                  {"basis_dim", alpha.rows()},
                  {"feature_dim", alpha.cols()},
                  {"timestamp", timestamp}}},
                {"alpha", alpha_rows},
                {"support", support}}
               .dump(2) +
           "\n";
}

std::string change_report_json(const ChangeReport& report, const std::string& timestamp) {
    auto intervals_json = [](const std::vector<ChangeInterval>& intervals) {
        json arr = json::array();
        for (const auto& iv : intervals)
            arr.push_back(json{{"interval", {iv.lo, iv.hi}},
                               {"dominant_coord", iv.dominant_coord},
                               {"sign", iv.sign},
                               {"max_stat", iv.max_stat}});
        return arr;
    };
    return json{{"meta", {{"threshold", report.threshold}, {"timestamp", timestamp}}},
                {"raw_intervals", intervals_json(report.raw_intervals)},
                {"intervals", intervals_json(report.filtered_intervals)}}
               .dump(2) +
           "\n";
}

std::string change_stat_csv(const ChangeReport& report) {
    std::ostringstream out;
    out.precision(17);
    out << "t";
    for (Eigen::Index j = 0; j < report.stat.cols(); ++j) out << ",stat_" << (j + 1);
    out << "\n";
    for (Eigen::Index g = 0; g < report.grid.size(); ++g) {
        out << report.grid[g];
        for (Eigen::Index j = 0; j < report.stat.cols(); ++j) out << "," << report.stat(g, j);
        out << "\n";
    }
    return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace spartsm
