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
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <doctest.h>
#include <json.hpp>

#include "harness/config.hpp"
#include "harness/csv.hpp"
#include "harness/experiments.hpp"
#include "harness/svg.hpp"
#include "lqt/version.hpp"

using namespace lqt;
using namespace lqt::harness;
namespace fs = std::filesystem;

namespace {

/// Fresh scratch directory per test, removed on scope exit.
struct TempDir {
    fs::path path;

    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("lqt_harness_" + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool same_bytes(const fs::path& a, const fs::path& b) { return read_file(a) == read_file(b); }

std::string validation_message(const ExperimentConfig& cfg) {
    try {
        validate(cfg);
    } catch (const ValidationError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("harness: config defaults reproduce the reference setup") {
    ExperimentConfig cfg;
    CHECK(cfg.seed == kDefaultSeed);
    CHECK(cfg.seed == 9);
    CHECK(cfg.gamma == 0.99);
    CHECK(cfg.epsilon == 0.1);
    CHECK(cfg.mu == 0.001);
    CHECK(cfg.n_samples == 2000);
    CHECK_FALSE(cfg.check);

    cfg.experiment = "infinite";
    CHECK(cfg.resolved_horizon() == 1000);
    cfg.experiment = "finite";
    CHECK(cfg.resolved_horizon() == 100);
    cfg.horizon = 25;
    CHECK(cfg.resolved_horizon() == 25);

    CHECK(cfg.resolved_out_dir() == fs::path("out") / "finite");
    cfg.out_dir = "elsewhere/run1";
    CHECK(cfg.resolved_out_dir() == fs::path("elsewhere/run1"));

    const Eigen::VectorXd x0 = cfg.x0_vector();
    REQUIRE(x0.size() == 6);
    CHECK(x0.minCoeff() == 50.0);
    CHECK(x0.maxCoeff() == 50.0);
    cfg.x0 = {1, 2, 3, 4, 5, 6};
    CHECK(cfg.x0_vector()(3) == 4.0);

    const auto ref = cfg.reference_signal();
    REQUIRE(ref.n() == 6);
    CHECK(ref.r0(0) == 155.0);
    CHECK(ref.r0(5) == 190.0);
    CHECK((ref.F - Eigen::MatrixXd::Identity(6, 6)).lpNorm<Eigen::Infinity>() == 0.0);
    cfg.reference = {1, 1, 1, 1, 1, 2};
    CHECK(cfg.reference_signal().r0(5) == 2.0);
}

TEST_CASE("harness: validation names every offending field") {
    ExperimentConfig good;
    good.experiment = "finite";
    CHECK_NOTHROW(validate(good));

    ExperimentConfig cfg = good;
    cfg.experiment = "bogus";
    CHECK(validation_message(cfg).find("experiment") != std::string::npos);

    cfg = good;
    cfg.gamma = 0.0;
    CHECK(validation_message(cfg).find("gamma") != std::string::npos);
    cfg.gamma = 1.2;
    CHECK(validation_message(cfg).find("gamma") != std::string::npos);

    cfg = good;
    cfg.epsilon = 0.0;
    CHECK(validation_message(cfg).find("epsilon") != std::string::npos);

    cfg = good;
    cfg.mu = -1.0;
    CHECK(validation_message(cfg).find("mu") != std::string::npos);

    cfg = good;
    cfg.horizon = 0;
    CHECK(validation_message(cfg).find("horizon") != std::string::npos);
    cfg.horizon = -5;
    CHECK(validation_message(cfg).find("horizon") != std::string::npos);

    cfg = good;
    cfg.n_samples = 189;
    CHECK(validation_message(cfg).find("n_samples") != std::string::npos);

    cfg = good;
    cfg.x0 = {1, 2, 3};
    CHECK(validation_message(cfg).find("x0") != std::string::npos);

    cfg = good;
    cfg.reference = {1, 2};
    CHECK(validation_message(cfg).find("reference") != std::string::npos);

    SUBCASE("all offenders are listed in one message") {
        cfg = good;
        cfg.gamma = 2.0;
        cfg.mu = -1.0;
        const std::string msg = validation_message(cfg);
        CHECK(msg.find("gamma") != std::string::npos);
        CHECK(msg.find("mu") != std::string::npos);
    }
}

TEST_CASE("harness: manifest JSON round-trips the whole config") {
    ExperimentConfig cfg;
    cfg.experiment = "qlearn";
    cfg.horizon = 20;
    cfg.gamma = 0.97;
    cfg.epsilon = 0.05;
    cfg.mu = 1e-4;
    cfg.seed = 123456789012345ULL;
    cfg.n_samples = 500;
    cfg.x0 = {1.5, 2.5, 3.5, 4.5, 5.5, 6.5};
    cfg.reference = {10, 20, 30, 40, 50, 60};
    cfg.out_dir = "should/not/appear";
    cfg.check = true;

    const nlohmann::json j = manifest_json(cfg);
    CHECK(j.at("version").get<std::string>() == std::string(kVersion));
    CHECK_FALSE(j.contains("out_dir"));
    CHECK_FALSE(j.contains("check"));

    TempDir tmp("manifest_roundtrip");
    write_manifest(tmp.path, cfg);
    const ExperimentConfig back = load_config(tmp.path / "manifest.json");
    CHECK(back.experiment == cfg.experiment);
    CHECK(back.horizon == cfg.horizon);
    CHECK(back.gamma == cfg.gamma);
    CHECK(back.epsilon == cfg.epsilon);
    CHECK(back.mu == cfg.mu);
    CHECK(back.seed == cfg.seed);
    CHECK(back.n_samples == cfg.n_samples);
    CHECK(back.x0 == cfg.x0);
    CHECK(back.reference == cfg.reference);
    // Run-local fields are deliberately absent from the manifest.
    CHECK(back.out_dir.empty());
    CHECK_FALSE(back.check);
}

TEST_CASE("harness: config loading is forgiving about unknown keys only") {
    TempDir tmp("config_load");

    SUBCASE("unknown keys are ignored") {
        std::ofstream(tmp.path / "c.json") << R"({"experiment":"finite","flux":1})";
        const ExperimentConfig cfg = load_config(tmp.path / "c.json");
        CHECK(cfg.experiment == "finite");
        CHECK(cfg.seed == kDefaultSeed);
    }

    SUBCASE("wrong field types are rejected") {
        std::ofstream(tmp.path / "c.json") << R"({"gamma":"high"})";
        CHECK_THROWS_AS(load_config(tmp.path / "c.json"), ValidationError);
    }

    SUBCASE("malformed JSON is rejected with the file name") {
        std::ofstream(tmp.path / "c.json") << "{nope";
        try {
            load_config(tmp.path / "c.json");
            FAIL("expected ValidationError");
        } catch (const ValidationError& e) {
            CHECK(std::string(e.what()).find("c.json") != std::string::npos);
        }
    }

    SUBCASE("a missing file is rejected") {
        CHECK_THROWS_AS(load_config(tmp.path / "absent.json"), ValidationError);
    }

    SUBCASE("a non-object top level is rejected") {
        ExperimentConfig cfg;
        CHECK_THROWS_AS(apply_json(cfg, nlohmann::json::array()), ValidationError);
    }
}

TEST_CASE("harness: format_value round-trips doubles exactly") {
    const double values[] = {0.1,       1.0 / 3.0,  2.2250738585072014e-308, 1e-300,
                             1e300,     123456.789, 3.141592653589793,
                             -0.96875,  1.0 + 1e-15};
    for (const double v : values) {
        CHECK(std::stod(format_value(v)) == v);
    }
    CHECK(format_value(5.0) == "5");
    CHECK(format_value(0.5) == "0.5");
    CHECK(format_value(0.0) == "0");
    CHECK(format_value(-2.0) == "-2");
}

TEST_CASE("harness: generic csv write/read round-trip") {
    TempDir tmp("csv_roundtrip");
    CsvTable table;
    table.header = {"a", "b"};
    table.rows = {{"1", "2.5"}, {"x", ""}};
    write_csv(tmp.path / "t.csv", table);
    CHECK(read_file(tmp.path / "t.csv") == "a,b\n1,2.5\nx,\n");

    const CsvTable back = read_csv(tmp.path / "t.csv");
    CHECK(back.header == table.header);
    CHECK(back.rows == table.rows);
}

TEST_CASE("harness: trajectory csv round-trip is exact") {
    Trajectory<double> traj;
    traj.t0 = 3;
    traj.states = {Eigen::Vector2d(0.1, 0.2), Eigen::Vector2d(1.0 / 3.0, 0.4),
                   Eigen::Vector2d(0.5, 0.75)};
    traj.references = {Eigen::Vector2d(1, 2), Eigen::Vector2d(3, 4), Eigen::Vector2d(5, 6)};
    traj.inputs = {Eigen::VectorXd::Constant(1, 7.0), Eigen::VectorXd::Constant(1, 8.5)};

    TempDir tmp("traj_roundtrip");
    write_trajectory_csv(tmp.path / "traj.csv", traj);

    const std::string text = read_file(tmp.path / "traj.csv");
    CHECK(text.substr(0, text.find('\n')) == "t,x1,x2,r1,r2,u1");
    // The terminal row has no input; its cell stays empty.
    CHECK(text.find("5,0.5,0.75,5,6,\n") != std::string::npos);

    const Trajectory<double> back = read_trajectory_csv(tmp.path / "traj.csv");
    CHECK(back.t0 == 3);
    REQUIRE(back.states.size() == 3);
    REQUIRE(back.references.size() == 3);
    REQUIRE(back.inputs.size() == 2);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK((back.states[i] - traj.states[i]).lpNorm<Eigen::Infinity>() == 0.0);
        CHECK((back.references[i] - traj.references[i]).lpNorm<Eigen::Infinity>() == 0.0);
    }
    CHECK(back.inputs[0](0) == 7.0);
    CHECK(back.inputs[1](0) == 8.5);
}

TEST_CASE("harness: dataset csv round-trip is exact") {
    TransitionDataset<double> data;
    data.seed = 77;
    data.X.resize(3, 2);
    data.U.resize(3, 1);
    data.Xnext.resize(3, 2);
    data.X << 1.0, 10.0, 2.0, 10.0, 3.0, 10.0;
    data.U << 0.5, 0.25, 1.0 / 3.0;
    data.Xnext << 2.0, 10.0, 3.0, 10.0, 4.25, 10.0;

    TempDir tmp("dataset_roundtrip");
    write_dataset_csv(tmp.path / "d.csv", data);

    const std::string text = read_file(tmp.path / "d.csv");
    CHECK(text.substr(0, text.find('\n')) == "t,x1,r1,u1");

    const TransitionDataset<double> back = read_dataset_csv(tmp.path / "d.csv");
    CHECK(back.count() == 3);
    CHECK(back.n2() == 2);
    CHECK(back.m() == 1);
    CHECK((back.X - data.X).lpNorm<Eigen::Infinity>() == 0.0);
    CHECK((back.U - data.U).lpNorm<Eigen::Infinity>() == 0.0);
    CHECK((back.Xnext - data.Xnext).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("harness: cost csv layout") {
    CostReport<double> report;
    report.per_step = {1.5, 2.5};
    report.cumulative = {1.5, 4.0};
    TempDir tmp("cost_csv");
    write_cost_csv(tmp.path / "cost.csv", report, 1);
    CHECK(read_file(tmp.path / "cost.csv") == "t,stage_cost,cumulative\n1,1.5,1.5\n2,2.5,4\n");
}

TEST_CASE("harness: run_finite artifacts are byte-stable across runs") {
    TempDir tmp("finite_repro");
    ExperimentConfig cfg;
    cfg.experiment = "finite";
    cfg.horizon = 30;  // short horizon keeps this test fast
    cfg.out_dir = (tmp.path / "a").string();
    run_finite(cfg);

    for (const char* name :
         {"trajectory.csv", "cost.csv", "summary.json", "manifest.json", "trajectory.svg"}) {
        CHECK(fs::exists(tmp.path / "a" / name));
    }
    CHECK(read_file(tmp.path / "a" / "trajectory.svg").find("<svg") != std::string::npos);

    const nlohmann::json summary =
        nlohmann::json::parse(read_file(tmp.path / "a" / "summary.json"));
    CHECK(summary.at("experiment") == "finite");
    CHECK(summary.at("horizon") == 30);
    CHECK(summary.at("converged_x").size() == 6);

    SUBCASE("an identical config writes identical bytes") {
        ExperimentConfig cfg2 = cfg;
        cfg2.out_dir = (tmp.path / "b").string();
        run_finite(cfg2);
        for (const char* name : {"trajectory.csv", "cost.csv", "summary.json", "manifest.json"}) {
            CHECK(same_bytes(tmp.path / "a" / name, tmp.path / "b" / name));
        }
    }

    SUBCASE("re-running from the manifest reproduces the run") {
        ExperimentConfig replay = load_config(tmp.path / "a" / "manifest.json");
        replay.out_dir = (tmp.path / "c").string();
        run_finite(replay);
        for (const char* name : {"trajectory.csv", "cost.csv", "summary.json", "manifest.json"}) {
            CHECK(same_bytes(tmp.path / "a" / name, tmp.path / "c" / name));
        }
    }
}

TEST_CASE("harness: plot_csv renders series and rejects unknown columns") {
    TempDir tmp("plot");
    CsvTable table;
    table.header = {"t", "y"};
    table.rows = {{"0", "1"}, {"1", "3"}, {"2", "2"}};
    write_csv(tmp.path / "data.csv", table);

    plot_csv(tmp.path / "data.csv", tmp.path / "plot.svg", "demo", "t", {{"y", "y", false, -1}},
             "value");
    const std::string svg = read_file(tmp.path / "plot.svg");
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("polyline") != std::string::npos);
    CHECK(svg.find("demo") != std::string::npos);

    CHECK_THROWS_AS(plot_csv(tmp.path / "data.csv", tmp.path / "plot2.svg", "demo", "t",
                             {{"missing", "missing", false, -1}}, "value"),
                    ValidationError);
    CHECK_THROWS_AS(plot_csv(tmp.path / "absent.csv", tmp.path / "plot3.svg", "demo", "t",
                             {{"y", "y", false, -1}}, "value"),
                    Error);
}
