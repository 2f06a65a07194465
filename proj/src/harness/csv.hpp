/*
 Copyright 2026 The lqt Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#ifndef LQT_HARNESS_CSV_HPP
#define LQT_HARNESS_CSV_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "lqt/metrics.hpp"
#include "lqt/qlearning.hpp"
#include "lqt/state_space.hpp"

namespace lqt::harness {

/// Shortest exact decimal form of a double (%.17g round-trips).
std::string format_value(double v);

/// Write a whole file atomically (temp file in the same directory, then rename).
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

void write_csv(const std::filesystem::path& path, const CsvTable& table);
CsvTable read_csv(const std::filesystem::path& path);

/// Schema: t, x1..xn, r1..rn, u1..um; the final row has empty input cells.
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory<double>& traj);

/// Inverse of write_trajectory_csv.
Trajectory<double> read_trajectory_csv(const std::filesystem::path& path);

/// Schema: t, stage_cost, cumulative; t counts from t_start.
void write_cost_csv(const std::filesystem::path& path, const CostReport<double>& report,
                    int t_start);

/// Bare numeric rows, no header.
void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& M);

/// Same schema as the trajectory CSV; row t holds (x(t), r(t), u(t)) and the
/// final row carries the last successor state with empty input cells.
void write_dataset_csv(const std::filesystem::path& path, const TransitionDataset<double>& data);

/// Inverse of write_dataset_csv (seed is not recoverable from the CSV).
TransitionDataset<double> read_dataset_csv(const std::filesystem::path& path);

}  // namespace lqt::harness

#endif  // LQT_HARNESS_CSV_HPP
