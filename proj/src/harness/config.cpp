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
#include "harness/config.hpp"

#include <fstream>

#include "harness/csv.hpp"
#include "lqt/qlearning.hpp"
#include "lqt/version.hpp"

namespace lqt::harness {

namespace fs = std::filesystem;
using nlohmann::json;

Eigen::VectorXd ExperimentConfig::x0_vector() const {
    if (x0.empty()) return Eigen::VectorXd::Constant(6, 50.0);
    return Eigen::Map<const Eigen::VectorXd>(x0.data(), static_cast<Eigen::Index>(x0.size()));
}

ReferenceSignal<double> ExperimentConfig::reference_signal() const {
    if (reference.empty()) return baam_reference<double>();
    Eigen::VectorXd r0 =
        Eigen::Map<const Eigen::VectorXd>(reference.data(), static_cast<Eigen::Index>(reference.size()));
    const Eigen::Index n = r0.size();  // read before the move; argument order is unspecified
    return ReferenceSignal<double>(Eigen::MatrixXd::Identity(n, n), std::move(r0));
}

void apply_json(ExperimentConfig& cfg, const json& j) {
    if (!j.is_object()) throw ValidationError("config: top level must be a JSON object");
    try {
        if (j.contains("experiment")) cfg.experiment = j.at("experiment").get<std::string>();
        if (j.contains("horizon")) cfg.horizon = j.at("horizon").get<int>();
        if (j.contains("gamma")) cfg.gamma = j.at("gamma").get<double>();
        if (j.contains("epsilon")) cfg.epsilon = j.at("epsilon").get<double>();
        if (j.contains("mu")) cfg.mu = j.at("mu").get<double>();
        if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("n_samples")) cfg.n_samples = j.at("n_samples").get<int>();
        if (j.contains("x0")) cfg.x0 = j.at("x0").get<std::vector<double>>();
        if (j.contains("reference")) cfg.reference = j.at("reference").get<std::vector<double>>();
    } catch (const json::exception& e) {
        throw ValidationError(std::string("config: ") + e.what());
    }
}

ExperimentConfig load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("config: cannot open " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ValidationError("config: " + path.string() + " is not valid JSON: " + e.what());
    }
    ExperimentConfig cfg;
    apply_json(cfg, j);
    return cfg;
}

void validate(const ExperimentConfig& cfg) {
    std::vector<std::string> bad;
    if (cfg.experiment != "finite" && cfg.experiment != "infinite" && cfg.experiment != "qlearn" &&
        cfg.experiment != "compare") {
        bad.push_back("experiment (must be finite, infinite, qlearn, or compare)");
    }
    if (!(cfg.gamma > 0.0) || cfg.gamma > 1.0) bad.push_back("gamma (must lie in (0, 1])");
    if (!(cfg.epsilon > 0.0)) bad.push_back("epsilon (must be > 0)");
    if (cfg.mu < 0.0) bad.push_back("mu (must be >= 0)");
    if (cfg.horizon == 0 || cfg.horizon < -1) bad.push_back("horizon (must be >= 1, or -1 for the default)");
    if (cfg.n_samples < identifiability_floor(12, 7)) {
        bad.push_back("n_samples (must be >= 190, the identifiability floor)");
    }
    if (!cfg.x0.empty() && cfg.x0.size() != 6) bad.push_back("x0 (must have 6 entries)");
    if (!cfg.reference.empty() && cfg.reference.size() != 6) {
        bad.push_back("reference (must have 6 entries)");
    }
    if (!bad.empty()) {
        std::string msg = "invalid config fields: ";
        for (std::size_t i = 0; i < bad.size(); ++i) {
            if (i) msg += "; ";
            msg += bad[i];
        }
        throw ValidationError(msg);
    }
}

json manifest_json(const ExperimentConfig& cfg) {
    json j;
    j["experiment"] = cfg.experiment;
    j["version"] = kVersion;
    j["horizon"] = cfg.horizon;
    j["gamma"] = cfg.gamma;
    j["epsilon"] = cfg.epsilon;
    j["mu"] = cfg.mu;
    j["seed"] = cfg.seed;
    j["n_samples"] = cfg.n_samples;
    j["x0"] = cfg.x0;
    j["reference"] = cfg.reference;
    return j;
}

void write_manifest(const fs::path& dir, const ExperimentConfig& cfg) {
    write_text_atomic(dir / "manifest.json", manifest_json(cfg).dump(2) + "\n");
}

}  // namespace lqt::harness
