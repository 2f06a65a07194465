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
#ifndef LQT_METRICS_HPP
#define LQT_METRICS_HPP

#include <cmath>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "lqt/state_space.hpp"

namespace lqt {

/**
 * @brief Accumulated performance index with its tracking/input decomposition.
 *
 * per_step holds the (discount-weighted, where applicable) stage costs and
 * cumulative their running sum, ready for cost-curve plots.
 */
template <typename Scalar = double>
struct CostReport {
    Scalar total = 0;
    Scalar tracking = 0;
    Scalar input = 0;
    std::vector<Scalar> per_step;
    std::vector<Scalar> cumulative;
};

namespace detail {

template <typename Scalar>
void require_weights(const Trajectory<Scalar>& traj, const MatrixX<Scalar>& Q,
                     const MatrixX<Scalar>& R) {
    traj.check_consistent();
    if (traj.references.empty() && traj.length() > 0) {
        throw ValidationError("cost: trajectory carries no reference track");
    }
    if (!traj.states.empty()) {
        const Eigen::Index n = traj.states.front().size();
        if (Q.rows() != n || Q.cols() != n) throw DimensionError("cost: Q must be n x n");
    }
    if (!traj.inputs.empty()) {
        const Eigen::Index m = traj.inputs.front().size();
        if (R.rows() != m || R.cols() != m) throw DimensionError("cost: R must be m x m");
    }
}

}  // namespace detail

/**
 * @brief Undiscounted finite-horizon index.
 *
 * Stage t (t0 < t <= t0+L) pairs the arrived-at state with the input that
 * produced it: (x(t)-r(t))' Q (x(t)-r(t)) + u(t-1)' R u(t-1).
 */
template <typename Scalar>
CostReport<Scalar> finite_cost(const Trajectory<Scalar>& traj, const MatrixX<Scalar>& Q,
                               const MatrixX<Scalar>& R) {
    detail::require_weights(traj, Q, R);
    CostReport<Scalar> rep;
    const Eigen::Index L = traj.length();
    rep.per_step.reserve(static_cast<std::size_t>(L));
    rep.cumulative.reserve(static_cast<std::size_t>(L));
    for (Eigen::Index k = 0; k < L; ++k) {
        const VectorX<Scalar> e = traj.states[k + 1] - traj.references[k + 1];
        const Scalar track = e.dot(Q * e);
        const Scalar effort = traj.inputs[k].dot(R * traj.inputs[k]);
        rep.tracking += track;
        rep.input += effort;
        rep.total += track + effort;
        rep.per_step.push_back(track + effort);
        rep.cumulative.push_back(rep.total);
    }
    return rep;
}

/**
 * @brief Discounted index summed from the initial time.
 *
 * Stage k (state x(t0+k), input u(t0+k)) contributes
 * gamma^k [(x-r)' Q (x-r) + u' R u]; the sum runs over the first
 * min(L, horizon) stages. This is the convention under which the value
 * function satisfies V(X(t)) = stage(t) + gamma V(X(t+1)).
 */
template <typename Scalar>
CostReport<Scalar> discounted_cost(const Trajectory<Scalar>& traj, const MatrixX<Scalar>& Q,
                                   const MatrixX<Scalar>& R, Scalar gamma,
                                   Eigen::Index horizon) {
    if (!(gamma > Scalar(0)) || gamma > Scalar(1)) {
        throw ValidationError("discounted_cost: gamma must lie in (0, 1]");
    }
    if (horizon < 0) throw ValidationError("discounted_cost: horizon must be >= 0");
    detail::require_weights(traj, Q, R);
    CostReport<Scalar> rep;
    const Eigen::Index L = std::min(traj.length(), horizon);
    rep.per_step.reserve(static_cast<std::size_t>(L));
    rep.cumulative.reserve(static_cast<std::size_t>(L));
    Scalar discount = 1;
    for (Eigen::Index k = 0; k < L; ++k) {
        const VectorX<Scalar> e = traj.states[k] - traj.references[k];
        const Scalar track = discount * e.dot(Q * e);
        const Scalar effort = discount * traj.inputs[k].dot(R * traj.inputs[k]);
        rep.tracking += track;
        rep.input += effort;
        rep.total += track + effort;
        rep.per_step.push_back(track + effort);
        rep.cumulative.push_back(rep.total);
        discount *= gamma;
    }
    return rep;
}

/// The (tracking, input) decomposition of a report.
template <typename Scalar>
std::pair<Scalar, Scalar> cost_split(const CostReport<Scalar>& rep) {
    return {rep.tracking, rep.input};
}

/// Frobenius and mean-absolute elementwise distance between two gains.
template <typename Scalar>
std::pair<Scalar, Scalar> gain_error(const MatrixX<Scalar>& K_star,
                                     const MatrixX<Scalar>& K_hat) {
    if (K_star.rows() != K_hat.rows() || K_star.cols() != K_hat.cols()) {
        throw DimensionError("gain_error: gain shapes must match");
    }
    const MatrixX<Scalar> d = K_star - K_hat;
    return {d.norm(), d.cwiseAbs().mean()};
}

/**
 * @brief First sample (1-based over states, so x(t0) is sample 1) at which
 * every component of |x - r| is strictly below margin. Empty if never.
 */
template <typename Scalar>
std::optional<int> first_step_within(const Trajectory<Scalar>& traj, Scalar margin) {
    traj.check_consistent();
    if (traj.references.empty()) {
        throw ValidationError("first_step_within: trajectory carries no reference track");
    }
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        if (((traj.states[k] - traj.references[k]).cwiseAbs().array() < margin).all()) {
            return static_cast<int>(k) + 1;
        }
    }
    return std::nullopt;
}

/**
 * @brief First sample (1-based) from which the state never again moves more
 * than tol away from its final value, componentwise. Empty for an empty
 * trajectory.
 */
template <typename Scalar>
std::optional<int> settling_step(const Trajectory<Scalar>& traj, Scalar tol = Scalar(1e-5)) {
    traj.check_consistent();
    if (traj.states.empty()) return std::nullopt;
    const VectorX<Scalar>& final_x = traj.states.back();
    int settled = static_cast<int>(traj.states.size());  // last sample always qualifies
    for (std::size_t k = traj.states.size(); k-- > 0;) {
        if ((traj.states[k] - final_x).template lpNorm<Eigen::Infinity>() <= tol) {
            settled = static_cast<int>(k) + 1;
        } else {
            break;
        }
    }
    return settled;
}

/// Largest componentwise |x - r| over the tail (last `tail` samples).
template <typename Scalar>
Scalar steady_state_error(const Trajectory<Scalar>& traj, std::size_t tail = 1) {
    traj.check_consistent();
    if (traj.references.empty() || traj.states.empty()) {
        throw ValidationError("steady_state_error: trajectory carries no reference track");
    }
    tail = std::min(tail, traj.states.size());
    Scalar worst = 0;
    for (std::size_t k = traj.states.size() - tail; k < traj.states.size(); ++k) {
        worst = std::max(worst,
                         (traj.states[k] - traj.references[k]).cwiseAbs().maxCoeff());
    }
    return worst;
}

}  // namespace lqt

#endif  // LQT_METRICS_HPP
