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
#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "harness/experiments.hpp"
#include "lqt/version.hpp"

namespace {

struct CliValues {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    double gamma = 0.0;
    double mu = 0.0;
    int horizon = 0;
    int n_samples = 0;
    bool check = false;
};

void add_common_options(CLI::App* sub, CliValues& v, bool with_check) {
    sub->add_option("--config", v.config_path, "JSON config or a previously written manifest");
    sub->add_option("--seed", v.seed, "64-bit seed for all randomness");
    sub->add_option("--out", v.out_dir, "output directory (default out/<experiment>)");
    sub->add_option("--gamma", v.gamma, "discount factor in (0, 1]");
    sub->add_option("--mu", v.mu, "ridge regularization weight");
    sub->add_option("--horizon", v.horizon, "rollout horizon in steps");
    sub->add_option("--n-samples", v.n_samples, "training tuples to collect");
    if (with_check) {
        sub->add_flag("--check", v.check, "exit 3 if any acceptance band fails");
    }
}

lqt::harness::ExperimentConfig build_config(const CLI::App* sub, const CliValues& v,
                                            const std::string& experiment) {
    lqt::harness::ExperimentConfig cfg;
    if (sub->count("--config") > 0) cfg = lqt::harness::load_config(v.config_path);
    cfg.experiment = experiment;  // the subcommand wins over any manifest field
    if (sub->count("--seed") > 0) cfg.seed = v.seed;
    if (sub->count("--out") > 0) cfg.out_dir = v.out_dir;
    if (sub->count("--gamma") > 0) cfg.gamma = v.gamma;
    if (sub->count("--mu") > 0) cfg.mu = v.mu;
    if (sub->count("--horizon") > 0) cfg.horizon = v.horizon;
    if (sub->count("--n-samples") > 0) cfg.n_samples = v.n_samples;
    cfg.check = v.check;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"LQT experiment runner: finite, infinite, and Q-learning "
                 "temperature tracking on the extruder model"};
    app.set_version_flag("--version", std::string(lqt::kVersion));
    app.require_subcommand(1);

    CliValues v;
    CLI::App* finite = app.add_subcommand("finite", "finite-horizon LQT rollout");
    CLI::App* infinite = app.add_subcommand("infinite", "infinite-horizon discounted LQT");
    CLI::App* qlearn = app.add_subcommand("qlearn", "model-free Q-learning LQT");
    CLI::App* compare = app.add_subcommand("compare", "model-based vs learned comparison");
    add_common_options(finite, v, false);
    add_common_options(infinite, v, false);
    add_common_options(qlearn, v, false);
    add_common_options(compare, v, true);

    CLI11_PARSE(app, argc, argv);

    const CLI::App* sub = app.get_subcommands().front();
    try {
        const lqt::harness::ExperimentConfig cfg = build_config(sub, v, sub->get_name());
        if (cfg.experiment == "finite") {
            const auto art = lqt::harness::run_finite(cfg);
            std::cout << "finite: wrote " << art.dir.string() << " (steps_to_margin="
                      << (art.steps_to_margin ? std::to_string(*art.steps_to_margin) : "none")
                      << ", total_cost=" << art.total_cost << ")\n";
        } else if (cfg.experiment == "infinite") {
            const auto art = lqt::harness::run_infinite(cfg);
            std::cout << "infinite: wrote " << art.dir.string() << " (iterations="
                      << art.solution.iterations << ", are_residual=" << art.are_res
                      << ", cost_500=" << art.eval.cost_500 << ")\n";
        } else if (cfg.experiment == "qlearn") {
            const auto art = lqt::harness::run_qlearn(cfg);
            std::cout << "qlearn: wrote " << art.dir.string() << " (sweeps="
                      << art.learn.iterations << ", gain_error_frobenius=" << art.frobenius
                      << ", cost_500=" << art.eval.cost_500 << ")\n";
        } else {
            const auto art = lqt::harness::run_compare(cfg);
            for (const auto& c : art.checks) {
                std::cout << (c.pass ? "[pass] " : "[FAIL] ") << c.name << " = " << c.value
                          << " (band " << c.lo << " .. " << c.hi << ")\n";
            }
            std::cout << "compare: wrote " << art.dir.string()
                      << (art.all_pass ? " (all bands pass)" : " (band failures)") << "\n";
            if (cfg.check && !art.all_pass) return 3;
        }
    } catch (const lqt::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 1;
    } catch (const lqt::DimensionError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 1;
    } catch (const lqt::Error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
