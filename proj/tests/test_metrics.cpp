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
#include <cmath>
#include <vector>

#include <doctest.h>

#include "lqt/metrics.hpp"

using namespace lqt;

namespace {

Eigen::VectorXd scalar(double v) {
    Eigen::VectorXd x(1);
    x << v;
    return x;
}

Trajectory<double> make_traj(const std::vector<double>& states,
                             const std::vector<double>& refs,
                             const std::vector<double>& inputs, int t0 = 0) {
    Trajectory<double> traj;
    traj.t0 = t0;
    for (double v : states) traj.states.push_back(scalar(v));
    for (double v : refs) traj.references.push_back(scalar(v));
    for (double v : inputs) traj.inputs.push_back(scalar(v));
    return traj;
}

const Eigen::MatrixXd kQ1 = Eigen::MatrixXd::Identity(1, 1);
const Eigen::MatrixXd kR1 = Eigen::MatrixXd::Identity(1, 1);

}  // namespace

TEST_CASE("metrics: finite_cost hand-computed sums") {
    SUBCASE("a zero-length trajectory costs nothing") {
        const auto traj = make_traj({4.0}, {}, {});
        const auto rep = finite_cost(traj, kQ1, kR1);
        CHECK(rep.total == 0.0);
        CHECK(rep.per_step.empty());
        CHECK(rep.cumulative.empty());
    }

    SUBCASE("stages pair the arrived state with the producing input") {
        // stage 1: (2-0)^2 + 1^2 = 5, stage 2: (3-0)^2 + 2^2 = 13.
        const auto traj = make_traj({1.0, 2.0, 3.0}, {0.0, 0.0, 0.0}, {1.0, 2.0});
        const auto rep = finite_cost(traj, kQ1, kR1);
        CHECK(rep.total == 18.0);
        CHECK(rep.tracking == 13.0);
        CHECK(rep.input == 5.0);
        REQUIRE(rep.per_step.size() == 2);
        CHECK(rep.per_step[0] == 5.0);
        CHECK(rep.per_step[1] == 13.0);
        CHECK(rep.cumulative[0] == 5.0);
        CHECK(rep.cumulative[1] == 18.0);
        // The initial tracking error (1-0)^2 is deliberately excluded.
    }

    SUBCASE("Q = 0 leaves only the input effort") {
        const auto traj = make_traj({1.0, 2.0, 3.0}, {0.0, 0.0, 0.0}, {1.0, 2.0});
        const auto rep = finite_cost(traj, Eigen::MatrixXd(Eigen::MatrixXd::Zero(1, 1)), kR1);
        CHECK(rep.tracking == 0.0);
        CHECK(rep.total == 5.0);
    }

    SUBCASE("a reference-free trajectory with transitions is rejected") {
        auto traj = make_traj({1.0, 2.0}, {}, {1.0});
        CHECK_THROWS_AS(finite_cost(traj, kQ1, kR1), ValidationError);
    }

    SUBCASE("weight dimensions are validated") {
        const auto traj = make_traj({1.0, 2.0}, {0.0, 0.0}, {1.0});
        CHECK_THROWS_AS(finite_cost(traj, Eigen::MatrixXd(Eigen::MatrixXd::Identity(2, 2)), kR1),
                        DimensionError);
        CHECK_THROWS_AS(finite_cost(traj, kQ1, Eigen::MatrixXd(Eigen::MatrixXd::Identity(2, 2))),
                        DimensionError);
    }
}

TEST_CASE("metrics: discounted_cost hand-computed sums") {
    // k=0: (1-0)^2 + 1^2 = 2; k=1: 0.5 * ((2-0)^2 + 1^2) = 2.5.
    const auto traj = make_traj({1.0, 2.0, 4.0}, {0.0, 0.0, 0.0}, {1.0, 1.0});
    const auto rep = discounted_cost(traj, kQ1, kR1, 0.5, 10);
    CHECK(rep.total == doctest::Approx(4.5).epsilon(1e-15));
    CHECK(rep.tracking == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(rep.input == doctest::Approx(1.5).epsilon(1e-15));
    REQUIRE(rep.per_step.size() == 2);
    CHECK(rep.per_step[0] == 2.0);
    CHECK(rep.per_step[1] == 2.5);

    SUBCASE("the horizon truncates the sum") {
        const auto head = discounted_cost(traj, kQ1, kR1, 0.5, 1);
        CHECK(head.total == 2.0);
        CHECK(discounted_cost(traj, kQ1, kR1, 0.5, 0).total == 0.0);
    }

    SUBCASE("gamma and horizon are validated") {
        CHECK_THROWS_AS(discounted_cost(traj, kQ1, kR1, 0.0, 10), ValidationError);
        CHECK_THROWS_AS(discounted_cost(traj, kQ1, kR1, 1.2, 10), ValidationError);
        CHECK_THROWS_AS(discounted_cost(traj, kQ1, kR1, 0.5, -1), ValidationError);
        CHECK_NOTHROW(discounted_cost(traj, kQ1, kR1, 1.0, 10));
    }
}

TEST_CASE("metrics: discounted tail additivity") {
    // V(t0) = head + gamma^h * V(t0+h) for any split point h.
    const auto traj = make_traj({3.0, 1.0, 0.5, 0.25, 0.125}, {0.0, 0.0, 0.0, 0.0, 0.0},
                                {1.0, -0.5, 0.25, -0.125});
    const double gamma = 0.9;
    const auto full = discounted_cost(traj, kQ1, kR1, gamma, 4);
    for (std::size_t h = 1; h < 4; ++h) {
        const auto head = discounted_cost(traj, kQ1, kR1, gamma, static_cast<Eigen::Index>(h));
        Trajectory<double> tail;
        tail.t0 = traj.t0 + static_cast<int>(h);
        tail.states.assign(traj.states.begin() + static_cast<long>(h), traj.states.end());
        tail.references.assign(traj.references.begin() + static_cast<long>(h),
                               traj.references.end());
        tail.inputs.assign(traj.inputs.begin() + static_cast<long>(h), traj.inputs.end());
        const auto rest = discounted_cost(tail, kQ1, kR1, gamma, 4);
        CHECK(full.total ==
              doctest::Approx(head.total + std::pow(gamma, h) * rest.total).epsilon(1e-9));
    }

    SUBCASE("cumulative is the running sum of per_step") {
        double acc = 0.0;
        for (std::size_t k = 0; k < full.per_step.size(); ++k) {
            acc += full.per_step[k];
            CHECK(full.cumulative[k] == doctest::Approx(acc).epsilon(1e-15));
        }
    }
}

TEST_CASE("metrics: finite and discounted sums agree at gamma = 1 on matched boundaries") {
    // The two conventions differ exactly by err(t0) - err(T); with both zero
    // the totals coincide.
    const auto traj = make_traj({5.0, 2.0, 5.0}, {5.0, 0.0, 5.0}, {1.0, 2.0});
    const auto undiscounted = finite_cost(traj, kQ1, kR1);
    const auto bellman = discounted_cost(traj, kQ1, kR1, 1.0, traj.length());
    CHECK(undiscounted.total == doctest::Approx(9.0).epsilon(1e-15));
    CHECK(bellman.total == doctest::Approx(undiscounted.total).epsilon(1e-15));
}

TEST_CASE("metrics: cost_split returns the decomposition") {
    CostReport<double> rep;
    rep.tracking = 2.5;
    rep.input = 1.5;
    const auto [track, effort] = cost_split(rep);
    CHECK(track == 2.5);
    CHECK(effort == 1.5);
}

TEST_CASE("metrics: gain_error distances") {
    const Eigen::MatrixXd K = Eigen::MatrixXd::Zero(2, 2);
    const auto [f0, m0] = gain_error(K, K);
    CHECK(f0 == 0.0);
    CHECK(m0 == 0.0);

    const Eigen::MatrixXd K2 = Eigen::MatrixXd::Constant(2, 2, 2.0);
    const auto [f2, m2] = gain_error(K, K2);
    CHECK(f2 == doctest::Approx(4.0).epsilon(1e-15));  // sqrt(4 * 2^2)
    CHECK(m2 == doctest::Approx(2.0).epsilon(1e-15));

    CHECK_THROWS_AS(gain_error(K, Eigen::MatrixXd(Eigen::MatrixXd::Zero(2, 3))), DimensionError);
}

TEST_CASE("metrics: first_step_within is 1-based and strict") {
    const auto traj = make_traj({5.0, 1.0, 0.05, 1.0, 0.001}, {0.0, 0.0, 0.0, 0.0, 0.0},
                                {0.0, 0.0, 0.0, 0.0});
    CHECK(first_step_within(traj, 0.1) == 3);  // first hit counts, later excursions do not
    CHECK(first_step_within(traj, 10.0) == 1);
    CHECK(first_step_within(traj, 1e-6) == std::nullopt);

    SUBCASE("an error exactly at the margin does not count") {
        const auto edge = make_traj({1.0, 0.1, 0.05}, {0.0, 0.0, 0.0}, {0.0, 0.0});
        CHECK(first_step_within(edge, 0.1) == 3);
    }

    SUBCASE("a reference-free trajectory is rejected") {
        const auto bare = make_traj({1.0, 2.0}, {}, {0.0});
        CHECK_THROWS_AS(first_step_within(bare, 0.1), ValidationError);
    }
}

TEST_CASE("metrics: settling_step scans backward from the final state") {
    const auto traj = make_traj({5.0, 1.0, 1.0 + 2e-5, 1.0 + 5e-6, 1.0},
                                {0.0, 0.0, 0.0, 0.0, 0.0}, {0.0, 0.0, 0.0, 0.0});
    CHECK(settling_step(traj, 1e-5) == 4);  // sample 3 is 2e-5 away and breaks the run
    CHECK(settling_step(traj, 1e-4) == 2);
    CHECK(settling_step(traj, 1e-9) == 5);

    SUBCASE("a constant trajectory settles immediately") {
        const auto flat = make_traj({2.0, 2.0, 2.0}, {0.0, 0.0, 0.0}, {0.0, 0.0});
        CHECK(settling_step(flat) == 1);
    }

    SUBCASE("a single-sample trajectory settles at its only sample") {
        const auto single = make_traj({2.0}, {}, {});
        CHECK(settling_step(single) == 1);
    }
}

TEST_CASE("metrics: steady_state_error over the tail") {
    const auto traj = make_traj({5.0, 2.0, 0.4, 0.1}, {0.0, 0.0, 0.0, 0.0},
                                {0.0, 0.0, 0.0});
    CHECK(steady_state_error(traj) == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(steady_state_error(traj, 2) == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(steady_state_error(traj, 100) == doctest::Approx(5.0).epsilon(1e-15));

    const auto bare = make_traj({1.0}, {}, {});
    CHECK_THROWS_AS(steady_state_error(bare), ValidationError);
}
