#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "spartsm/changepoint.hpp"
#include "spartsm/dataset.hpp"
#include "spartsm/feature_map.hpp"
#include "spartsm/fit.hpp"
#include "spartsm/inference.hpp"

namespace spartsm {

/// Dataset CSV: header `t,x1,...,xd`, one observation row per line. Rows
/// sharing a t value form a block in the grouped reading.
struct CsvData {
    Eigen::VectorXd times;
    Eigen::MatrixXd obs;
};

CsvData read_dataset_csv(const std::string& path);
void write_dataset_csv(const std::string& path, const Eigen::VectorXd& raw_times,
                       const Eigen::MatrixXd& obs);

/// Builds a TimedDataset from CSV contents; grouped = true groups rows with
/// equal raw time stamps into blocks. Without an explicit domain the time
/// range [min, max] is used.
TimedDataset dataset_from_csv(const CsvData& csv, bool grouped,
                              std::optional<std::pair<double, double>> domain = std::nullopt);

std::string inference_report_json(const InferenceReport& report, const FeatureMap& fmap,
                                  const std::string& timestamp);
std::string fit_json(const DiffParamFit& fit, const FeatureMap& fmap, const std::string& timestamp);
std::string change_report_json(const ChangeReport& report, const std::string& timestamp);
/// CSV of (t, stat_1..stat_k) for external plotting.
std::string change_stat_csv(const ChangeReport& report);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace spartsm
