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
#ifndef LQT_HARNESS_EXPERIMENTS_HPP
#define LQT_HARNESS_EXPERIMENTS_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "harness/config.hpp"
#include "lqt/finite_lqt.hpp"
#include "lqt/infinite_lqt.hpp"
#include "lqt/metrics.hpp"
#include "lqt/qlearning.hpp"

namespace lqt::harness {

/// In-margin thresholds (degC) used by the three controllers' summaries.
inline constexpr double kFiniteMargin = 0.09;
inline constexpr double kInfiniteMargin = 0.1;
inline constexpr double kQlearnMargin = 0.11;

/// Closed-loop rollout metrics for a stationary gain on the tracking plant.
struct ClosedLoopEval {
    Trajectory<double> trajectory;
    CostReport<double> report;  ///< discounted, from the initial time
    std::optional<int> steps_to_margin;
    std::optional<int> settled_step;
    double ss_error = 0;  ///< final-sample max |x - r|
    double cost_500 = 0;  ///< cumulative discounted cost after 500 stages
    double cost_final = 0;
    double tracking = 0;
    double input = 0;
};

struct FiniteArtifacts {
    Trajectory<double> trajectory;
    Eigen::VectorXd converged_x;  ///< x(T-2), the settled pre-terminal state
    std::optional<int> steps_to_margin;
    double total_cost = 0;
    std::filesystem::path dir;
};

struct InfiniteArtifacts {
    StationarySolution<double> solution;
    double are_res = 0;
    ClosedLoopEval eval;
    std::filesystem::path dir;
};

struct QlearnArtifacts {
    LearnResult<double> learn;
    Eigen::MatrixXd K_hat;
    Eigen::MatrixXd K_star;  ///< model-based gain for the same config
    double frobenius = 0;
    double mean_abs = 0;
    ClosedLoopEval eval;
    std::filesystem::path dir;
};

/// One acceptance-band verdict in the comparison report.
struct BandCheck {
    std::string name;
    double value = 0;
    double lo = 0;
    double hi = 0;
    bool pass = false;
};

struct CompareArtifacts {
    InfiniteArtifacts infinite;
    QlearnArtifacts qlearn;
    std::vector<BandCheck> checks;  ///< recomputed from the emitted CSVs
    bool all_pass = false;
    std::filesystem::path dir;
};

FiniteArtifacts run_finite(const ExperimentConfig& cfg);
InfiniteArtifacts run_infinite(const ExperimentConfig& cfg);
QlearnArtifacts run_qlearn(const ExperimentConfig& cfg);
CompareArtifacts run_compare(const ExperimentConfig& cfg);

/// Model-based stationary solution for a config (seed drives the K0 draw).
StationarySolution<double> model_solution(const ExperimentConfig& cfg);

/// Roll out u = -K [x; r] and collect all summary metrics.
ClosedLoopEval evaluate_gain(const Eigen::MatrixXd& K, const ExperimentConfig& cfg,
                             double margin);

}  // namespace lqt::harness

#endif  // LQT_HARNESS_EXPERIMENTS_HPP
