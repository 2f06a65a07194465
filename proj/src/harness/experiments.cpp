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
#include "harness/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <tuple>

#include "harness/csv.hpp"
#include "harness/svg.hpp"

namespace lqt::harness {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kPiMaxSweeps = 100;
constexpr double kKernelTol = 1e-3;
constexpr int kKernelMaxIter = 30;

// Reference values and acceptance bands for the comparison report.
constexpr double kModelCost500 = 153367.0;
constexpr double kModelCostFinal = 153368.0;
constexpr double kModelTracking = 107830.0;
constexpr double kModelInput = 45538.0;
constexpr double kLearnedCostLo = 152200.0;
constexpr double kLearnedCostHi = 155300.0;
constexpr double kLearnedTracking = 111676.0;
constexpr double kLearnedInput = 42068.0;

struct Problem {
    LinearSystem<double> sys;
    ReferenceSignal<double> ref;
    Eigen::MatrixXd Q;
    Eigen::MatrixXd R;
    Eigen::VectorXd x0;
};

Problem make_problem(const ExperimentConfig& cfg) {
    return Problem{baam_model<double>(), cfg.reference_signal(),
                   Eigen::MatrixXd::Identity(6, 6), Eigen::MatrixXd::Identity(7, 7),
                   cfg.x0_vector()};
}

json to_json_optional(const std::optional<int>& v) {
    if (v) return *v;
    return nullptr;
}

json to_json_vector(const Eigen::VectorXd& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

void write_json(const fs::path& path, const json& j) {
    write_text_atomic(path, j.dump(2) + "\n");
}

template <typename Fn>
void try_plot(Fn&& fn) {
    try {
        fn();
    } catch (const std::exception& e) {
        std::cerr << "warning: plot generation skipped: " << e.what() << "\n";
    }
}

std::vector<PlotSeries> trajectory_series(Eigen::Index n) {
    std::vector<PlotSeries> series;
    for (Eigen::Index i = 1; i <= n; ++i) {
        series.push_back({"x" + std::to_string(i), "x" + std::to_string(i), false,
                          static_cast<int>(i - 1)});
    }
    for (Eigen::Index i = 1; i <= n; ++i) {
        series.push_back({"r" + std::to_string(i), "r" + std::to_string(i), true,
                          static_cast<int>(i - 1)});
    }
    return series;
}

/// Per-stage discounted tracking/input components (cost.csv carries only the
/// combined stage cost; the split is emitted separately so the comparison
/// report can be re-derived from CSVs alone).
void write_cost_components_csv(const fs::path& path, const Trajectory<double>& traj,
                               const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R, double gamma,
                               Eigen::Index horizon) {
    CsvTable table;
    table.header = {"t", "tracking_stage", "input_stage", "tracking_cumulative",
                    "input_cumulative"};
    const Eigen::Index L = std::min<Eigen::Index>(traj.length(), horizon);
    double discount = 1.0, track_sum = 0.0, input_sum = 0.0;
    for (Eigen::Index k = 0; k < L; ++k) {
        const Eigen::VectorXd e = traj.states[k] - traj.references[k];
        const double track = discount * e.dot(Q * e);
        const double effort = discount * traj.inputs[k].dot(R * traj.inputs[k]);
        track_sum += track;
        input_sum += effort;
        table.rows.push_back({std::to_string(traj.t0 + static_cast<int>(k)), format_value(track),
                              format_value(effort), format_value(track_sum),
                              format_value(input_sum)});
        discount *= gamma;
    }
    write_csv(path, table);
}

Eigen::MatrixXd read_matrix_csv(const fs::path& path) {
    const CsvTable raw = read_csv(path);
    std::vector<std::vector<std::string>> rows;
    rows.push_back(raw.header);  // matrix CSVs have no header row
    for (const auto& r : raw.rows) rows.push_back(r);
    const Eigen::Index nrows = static_cast<Eigen::Index>(rows.size());
    const Eigen::Index ncols = static_cast<Eigen::Index>(rows.front().size());
    Eigen::MatrixXd M(nrows, ncols);
    for (Eigen::Index i = 0; i < nrows; ++i) {
        for (Eigen::Index j = 0; j < ncols; ++j) {
            M(i, j) = std::stod(rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
        }
    }
    return M;
}

struct CostCurve {
    std::vector<double> stage;
    std::vector<double> cumulative;
};

CostCurve read_cost_curve(const fs::path& path) {
    const CsvTable table = read_csv(path);
    CostCurve curve;
    for (const auto& row : table.rows) {
        curve.stage.push_back(std::stod(row.at(1)));
        curve.cumulative.push_back(std::stod(row.at(2)));
    }
    if (curve.cumulative.empty()) throw ValidationError("empty cost curve in " + path.string());
    return curve;
}

/// Final (tracking_cumulative, input_cumulative) pair of a components CSV.
std::pair<double, double> read_final_split(const fs::path& path) {
    const CsvTable table = read_csv(path);
    if (table.rows.empty()) {
        throw ValidationError("empty cost components in " + path.string());
    }
    const auto& last = table.rows.back();
    return {std::stod(last.at(3)), std::stod(last.at(4))};
}

}  // namespace

StationarySolution<double> model_solution(const ExperimentConfig& cfg) {
    const Problem p = make_problem(cfg);
    const AugmentedSystem<double> aug = augment(p.sys, p.ref, p.Q);
    NormalSampler sampler(cfg.seed);
    const Eigen::MatrixXd K0 = draw_stabilizing_k0(aug, cfg.gamma, sampler);
    return policy_iteration(aug, p.R, cfg.gamma, K0, cfg.epsilon, kPiMaxSweeps);
}

ClosedLoopEval evaluate_gain(const Eigen::MatrixXd& K, const ExperimentConfig& cfg,
                             double margin) {
    const Problem p = make_problem(cfg);
    const Eigen::Index steps = cfg.resolved_horizon();
    const auto refs = p.ref.sequence(steps + 1);
    auto policy = [&](int t, const Eigen::VectorXd& x) -> Eigen::VectorXd {
        Eigen::VectorXd X(2 * p.sys.n());
        X << x, refs[static_cast<std::size_t>(t)];
        return -(K * X);
    };
    ClosedLoopEval eval;
    eval.trajectory = simulate(p.sys, p.ref, p.x0, policy, steps);
    eval.report = discounted_cost(eval.trajectory, p.Q, p.R, cfg.gamma, steps);
    eval.steps_to_margin = first_step_within(eval.trajectory, margin);
    eval.settled_step = settling_step(eval.trajectory);
    eval.ss_error = steady_state_error(eval.trajectory);
    const std::size_t c500 = std::min<std::size_t>(500, eval.report.cumulative.size());
    eval.cost_500 = eval.report.cumulative[c500 - 1];
    eval.cost_final = eval.report.total;
    eval.tracking = eval.report.tracking;
    eval.input = eval.report.input;
    return eval;
}

FiniteArtifacts run_finite(const ExperimentConfig& cfg) {
    validate(cfg);
    const Problem p = make_problem(cfg);
    const int T = cfg.resolved_horizon();
    const FiniteSolution<double> sol = solve_finite_lqt(p.sys, p.Q, p.R, p.ref, p.x0, 0, T);

    FiniteArtifacts art;
    art.trajectory = sol.trajectory;
    art.total_cost = sol.cost;
    art.steps_to_margin = first_step_within(sol.trajectory, kFiniteMargin);
    // The pre-terminal state: by T-2 the transient is gone but the terminal
    // boundary effects of the backward pass have not kicked in yet.
    const std::size_t idx = sol.trajectory.states.size() >= 3 ? sol.trajectory.states.size() - 3
                                                              : sol.trajectory.states.size() - 1;
    art.converged_x = sol.trajectory.states[idx];
    art.dir = cfg.resolved_out_dir();

    fs::create_directories(art.dir);
    write_manifest(art.dir, cfg);
    write_trajectory_csv(art.dir / "trajectory.csv", art.trajectory);
    write_cost_csv(art.dir / "cost.csv", finite_cost(art.trajectory, p.Q, p.R), 1);

    json summary;
    summary["experiment"] = "finite";
    summary["horizon"] = T;
    summary["margin"] = kFiniteMargin;
    summary["steps_to_margin"] = to_json_optional(art.steps_to_margin);
    summary["converged_x"] = to_json_vector(art.converged_x);
    summary["total_cost"] = art.total_cost;
    write_json(art.dir / "summary.json", summary);

    try_plot([&] {
        plot_csv(art.dir / "trajectory.csv", art.dir / "trajectory.svg",
                 "Finite-horizon tracking", "t", trajectory_series(p.sys.n()),
                 "temperature (degC)");
    });
    return art;
}

InfiniteArtifacts run_infinite(const ExperimentConfig& cfg) {
    validate(cfg);
    const Problem p = make_problem(cfg);
    const AugmentedSystem<double> aug = augment(p.sys, p.ref, p.Q);

    InfiniteArtifacts art;
    art.solution = model_solution(cfg);
    art.are_res = are_residual(aug, p.R, cfg.gamma, art.solution.P);
    art.eval = evaluate_gain(art.solution.K, cfg, kInfiniteMargin);
    art.dir = cfg.resolved_out_dir();

    fs::create_directories(art.dir);
    write_manifest(art.dir, cfg);
    write_trajectory_csv(art.dir / "trajectory.csv", art.eval.trajectory);
    write_cost_csv(art.dir / "cost.csv", art.eval.report, 0);
    write_cost_components_csv(art.dir / "cost_components.csv", art.eval.trajectory, p.Q, p.R,
                              cfg.gamma, cfg.resolved_horizon());
    write_matrix_csv(art.dir / "gain.csv", art.solution.K);

    json summary;
    summary["experiment"] = "infinite";
    summary["gamma"] = cfg.gamma;
    summary["iterations"] = art.solution.iterations;
    summary["are_residual"] = art.are_res;
    summary["margin"] = kInfiniteMargin;
    summary["steps_to_margin"] = to_json_optional(art.eval.steps_to_margin);
    summary["settled_step"] = to_json_optional(art.eval.settled_step);
    summary["steady_state"] = to_json_vector(art.eval.trajectory.states.back());
    summary["ss_error"] = art.eval.ss_error;
    summary["cost_500"] = art.eval.cost_500;
    summary["cost_final"] = art.eval.cost_final;
    summary["tracking_cost"] = art.eval.tracking;
    summary["input_cost"] = art.eval.input;
    write_json(art.dir / "summary.json", summary);

    try_plot([&] {
        plot_csv(art.dir / "trajectory.csv", art.dir / "trajectory.svg",
                 "Infinite-horizon tracking (model-based)", "t", trajectory_series(p.sys.n()),
                 "temperature (degC)");
    });
    return art;
}

QlearnArtifacts run_qlearn(const ExperimentConfig& cfg) {
    validate(cfg);
    const Problem p = make_problem(cfg);
    const AugmentedSystem<double> aug = augment(p.sys, p.ref, p.Q);

    QlearnArtifacts art;
    const TransitionDataset<double> data = generate_training_data(
        p.sys, p.ref, stabilizing_gain<double>(), p.x0, cfg.n_samples, cfg.seed);
    art.learn = learn_kernel(data, aug.Q1, p.R, cfg.gamma, cfg.mu,
                             KernelMatrix<double>::identity(aug.n2(), aug.m()), kKernelTol,
                             kKernelMaxIter);
    art.K_hat = gain_from_kernel(art.learn.H);
    art.K_star = model_solution(cfg).K;
    std::tie(art.frobenius, art.mean_abs) = gain_error(art.K_star, art.K_hat);
    art.eval = evaluate_gain(art.K_hat, cfg, kQlearnMargin);
    art.dir = cfg.resolved_out_dir();

    fs::create_directories(art.dir);
    write_manifest(art.dir, cfg);
    write_dataset_csv(art.dir / "dataset.csv", data);
    write_matrix_csv(art.dir / "kernel.csv", art.learn.H.H);
    write_matrix_csv(art.dir / "gain.csv", art.K_hat);
    write_trajectory_csv(art.dir / "trajectory.csv", art.eval.trajectory);
    write_cost_csv(art.dir / "cost.csv", art.eval.report, 0);
    write_cost_components_csv(art.dir / "cost_components.csv", art.eval.trajectory, p.Q, p.R,
                              cfg.gamma, cfg.resolved_horizon());

    json summary;
    summary["experiment"] = "qlearn";
    summary["gamma"] = cfg.gamma;
    summary["mu"] = cfg.mu;
    summary["seed"] = cfg.seed;
    summary["n_samples"] = cfg.n_samples;
    summary["iterations"] = art.learn.iterations;
    summary["converged"] = art.learn.converged;
    summary["final_delta"] = art.learn.final_delta;
    summary["margin"] = kQlearnMargin;
    summary["steps_to_margin"] = to_json_optional(art.eval.steps_to_margin);
    summary["settled_step"] = to_json_optional(art.eval.settled_step);
    summary["steady_state"] = to_json_vector(art.eval.trajectory.states.back());
    summary["ss_error"] = art.eval.ss_error;
    summary["cost_500"] = art.eval.cost_500;
    summary["cost_final"] = art.eval.cost_final;
    summary["tracking_cost"] = art.eval.tracking;
    summary["input_cost"] = art.eval.input;
    summary["gain_error_frobenius"] = art.frobenius;
    summary["gain_error_mean_abs"] = art.mean_abs;
    write_json(art.dir / "summary.json", summary);

    try_plot([&] {
        plot_csv(art.dir / "trajectory.csv", art.dir / "trajectory.svg",
                 "Q-learning tracking", "t", trajectory_series(p.sys.n()),
                 "temperature (degC)");
    });
    return art;
}

CompareArtifacts run_compare(const ExperimentConfig& cfg) {
    validate(cfg);
    CompareArtifacts art;
    art.dir = cfg.resolved_out_dir();
    fs::create_directories(art.dir);

    ExperimentConfig cfg_inf = cfg;
    cfg_inf.experiment = "infinite";
    cfg_inf.out_dir = (art.dir / "infinite").string();
    ExperimentConfig cfg_ql = cfg;
    cfg_ql.experiment = "qlearn";
    cfg_ql.out_dir = (art.dir / "qlearn").string();

    art.infinite = run_infinite(cfg_inf);
    art.qlearn = run_qlearn(cfg_ql);
    write_manifest(art.dir, cfg);

    // Every verdict below is recomputed from the emitted CSVs so external
    // tooling can re-verify the report without rerunning the solvers.
    const CostCurve model_curve = read_cost_curve(art.infinite.dir / "cost.csv");
    const CostCurve learned_curve = read_cost_curve(art.qlearn.dir / "cost.csv");
    const auto model_split = read_final_split(art.infinite.dir / "cost_components.csv");
    const auto learned_split = read_final_split(art.qlearn.dir / "cost_components.csv");
    const Eigen::MatrixXd K_star = read_matrix_csv(art.infinite.dir / "gain.csv");
    const Eigen::MatrixXd K_hat = read_matrix_csv(art.qlearn.dir / "gain.csv");
    const Trajectory<double> learned_traj = read_trajectory_csv(art.qlearn.dir / "trajectory.csv");

    auto at_500 = [](const CostCurve& c) {
        return c.cumulative[std::min<std::size_t>(500, c.cumulative.size()) - 1];
    };
    const auto [frob, mabs] = gain_error(K_star, K_hat);
    const std::optional<int> margin_step = first_step_within(learned_traj, kQlearnMargin);
    const std::optional<int> settled = settling_step(learned_traj);
    const double ss_err = steady_state_error(learned_traj);

    auto band = [&](const std::string& name, double value, double lo, double hi) {
        art.checks.push_back({name, value, lo, hi, std::isfinite(value) && value >= lo && value <= hi});
    };
    auto band_rel = [&](const std::string& name, double value, double center, double rel) {
        band(name, value, center * (1.0 - rel), center * (1.0 + rel));
    };
    const double nan = std::numeric_limits<double>::quiet_NaN();

    band_rel("model_cost_500", at_500(model_curve), kModelCost500, 0.01);
    band_rel("model_cost_final", model_curve.cumulative.back(), kModelCostFinal, 0.01);
    band_rel("model_tracking_cost", model_split.first, kModelTracking, 0.01);
    band_rel("model_input_cost", model_split.second, kModelInput, 0.01);
    band("learned_cost_500", at_500(learned_curve), kLearnedCostLo, kLearnedCostHi);
    band("learned_cost_final", learned_curve.cumulative.back(), kLearnedCostLo, kLearnedCostHi);
    band_rel("learned_tracking_cost", learned_split.first, kLearnedTracking, 0.03);
    band_rel("learned_input_cost", learned_split.second, kLearnedInput, 0.03);
    band("gain_error_frobenius", frob, 0.0, 1.5);
    band("gain_error_mean_abs", mabs, 0.0, 0.16);
    band("learned_ss_error", ss_err, 0.0, 0.2);
    band("learned_steps_to_margin", margin_step ? *margin_step : nan, 15.0, 25.0);
    band("learned_settled_step", settled ? *settled : nan, 35.0, 51.0);

    art.all_pass = std::all_of(art.checks.begin(), art.checks.end(),
                               [](const BandCheck& c) { return c.pass; });

    // Overlaid cumulative-cost curves.
    CsvTable costs;
    costs.header = {"t", "model_stage", "model_cumulative", "learned_stage",
                    "learned_cumulative"};
    const std::size_t L = std::min(model_curve.stage.size(), learned_curve.stage.size());
    for (std::size_t k = 0; k < L; ++k) {
        costs.rows.push_back({std::to_string(k), format_value(model_curve.stage[k]),
                              format_value(model_curve.cumulative[k]),
                              format_value(learned_curve.stage[k]),
                              format_value(learned_curve.cumulative[k])});
    }
    write_csv(art.dir / "costs.csv", costs);

    CsvTable verdicts;
    verdicts.header = {"name", "value", "lo", "hi", "pass"};
    for (const BandCheck& c : art.checks) {
        verdicts.rows.push_back({c.name, format_value(c.value), format_value(c.lo),
                                 format_value(c.hi), c.pass ? "1" : "0"});
    }
    write_csv(art.dir / "comparison.csv", verdicts);

    json report;
    report["all_pass"] = art.all_pass;
    json checks = json::array();
    for (const BandCheck& c : art.checks) {
        json jc;
        jc["name"] = c.name;
        jc["value"] = std::isfinite(c.value) ? json(c.value) : json(nullptr);
        jc["lo"] = c.lo;
        jc["hi"] = c.hi;
        jc["pass"] = c.pass;
        checks.push_back(jc);
    }
    report["checks"] = checks;
    write_json(art.dir / "report.json", report);

    try_plot([&] {
        plot_csv(art.dir / "costs.csv", art.dir / "costs.svg", "Cumulative discounted cost",
                 "t",
                 {{"model_cumulative", "model-based", false, 0},
                  {"learned_cumulative", "Q-learning", false, 3}},
                 "cumulative cost");
    });
    return art;
}

}  // namespace lqt::harness
