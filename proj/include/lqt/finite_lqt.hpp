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
#ifndef LQT_FINITE_LQT_HPP
#define LQT_FINITE_LQT_HPP

#include <vector>

#include <Eigen/Cholesky>

#include "lqt/metrics.hpp"
#include "lqt/state_space.hpp"

namespace lqt {

namespace detail {

template <typename Scalar>
void require_psd(const MatrixX<Scalar>& M, const char* name) {
    require_symmetric(M, name, 1e-9);
    Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> es(M, Eigen::EigenvaluesOnly);
    const Scalar floor = -Scalar(1e-9) * (Scalar(1) + M.template lpNorm<Eigen::Infinity>());
    if (es.eigenvalues().minCoeff() < floor) {
        throw ValidationError(std::string(name) + " must be positive semidefinite");
    }
}

template <typename Scalar>
void require_pd(const MatrixX<Scalar>& M, const char* name) {
    require_symmetric(M, name, 1e-9);
    Eigen::LLT<MatrixX<Scalar>> llt(M);
    if (llt.info() != Eigen::Success) {
        throw ValidationError(std::string(name) + " must be positive definite");
    }
}

}  // namespace detail

/**
 * @brief Backward-recursion solution of the finite-horizon tracking problem.
 *
 * Stores S(t) and b(t) for t0 <= t <= T along with the weights, so the
 * time-varying optimal control can be evaluated at any in-range t.
 */
template <typename Scalar = double>
struct GainSchedule {
    int t0 = 0;
    int horizon = 0;  ///< terminal time T
    MatrixX<Scalar> Q;
    MatrixX<Scalar> R;
    std::vector<MatrixX<Scalar>> S;  ///< S[k] = S(t0 + k), k = 0..T-t0
    std::vector<VectorX<Scalar>> b;  ///< b[k] = b(t0 + k)

    const MatrixX<Scalar>& S_at(int t) const {
        if (t < t0 || t > horizon) throw ValidationError("GainSchedule: t outside [t0, T]");
        return S[static_cast<std::size_t>(t - t0)];
    }
    const VectorX<Scalar>& b_at(int t) const {
        if (t < t0 || t > horizon) throw ValidationError("GainSchedule: t outside [t0, T]");
        return b[static_cast<std::size_t>(t - t0)];
    }
};

/**
 * @brief Backward pass over an explicit reference sequence r(t0..T).
 *
 * S(t) = A'{S+ - S+ B (B'S+B + R)^-1 B'S+} A + Q with S(T) = Q, and
 * b(t) = (A' + K B')(b(t+1) - Q r(t+1)) with b(T) = 0, where S+ = S(t+1)
 * and K = -A'S+B (B'S+B + R)^-1. Each S(t) is symmetrized after its update.
 */
template <typename Scalar>
GainSchedule<Scalar> backward_pass(const LinearSystem<Scalar>& sys, const MatrixX<Scalar>& Q,
                                   const MatrixX<Scalar>& R,
                                   const std::vector<VectorX<Scalar>>& r_seq, int t0, int T) {
    if (T <= t0) throw ValidationError("backward_pass: horizon T must exceed t0");
    const Eigen::Index n = sys.n();
    if (Q.rows() != n || Q.cols() != n) throw DimensionError("backward_pass: Q must be n x n");
    if (R.rows() != sys.m() || R.cols() != sys.m()) {
        throw DimensionError("backward_pass: R must be m x m");
    }
    detail::require_psd(Q, "Q");
    detail::require_pd(R, "R");
    const std::size_t len = static_cast<std::size_t>(T - t0) + 1;
    if (r_seq.size() < len) {
        throw DimensionError("backward_pass: reference sequence shorter than horizon");
    }

    GainSchedule<Scalar> sched;
    sched.t0 = t0;
    sched.horizon = T;
    sched.Q = Q;
    sched.R = R;
    sched.S.assign(len, MatrixX<Scalar>());
    sched.b.assign(len, VectorX<Scalar>());
    sched.S.back() = Q;
    sched.b.back() = VectorX<Scalar>::Zero(n);

    for (std::size_t k = len - 1; k-- > 0;) {
        const MatrixX<Scalar>& Sn = sched.S[k + 1];
        const MatrixX<Scalar> G = sys.B.transpose() * Sn * sys.B + R;
        Eigen::LLT<MatrixX<Scalar>> llt(G);
        if (llt.info() != Eigen::Success) {
            throw RankDeficiencyError("backward_pass: B'S(t+1)B + R is not invertible");
        }
        // S+ B G^-1 B' S+, shared by the S and b updates.
        const MatrixX<Scalar> SBGi = Sn * sys.B * llt.solve(MatrixX<Scalar>::Identity(sys.m(), sys.m()));
        MatrixX<Scalar> S = sys.A.transpose() * (Sn - SBGi * sys.B.transpose() * Sn) * sys.A + Q;
        sched.S[k] = ((S + S.transpose()) / Scalar(2)).eval();
        const VectorX<Scalar> rhs = sched.b[k + 1] - Q * r_seq[k + 1];
        sched.b[k] = sys.A.transpose() * (rhs - SBGi * sys.B.transpose() * rhs);
    }
    return sched;
}

/// Backward pass with r materialized from a ReferenceSignal.
template <typename Scalar>
GainSchedule<Scalar> backward_pass(const LinearSystem<Scalar>& sys, const MatrixX<Scalar>& Q,
                                   const MatrixX<Scalar>& R, const ReferenceSignal<Scalar>& ref,
                                   int t0, int T) {
    if (T <= t0) throw ValidationError("backward_pass: horizon T must exceed t0");
    return backward_pass(sys, Q, R, ref.sequence(static_cast<Eigen::Index>(T - t0) + 1), t0, T);
}

/**
 * @brief Optimal control at time t (t0 <= t <= T-1) given the next reference.
 *
 * u*(t) = -(B'S(t+1)B + R)^-1 B' [S(t+1) A x + b(t+1) - Q r(t+1)].
 */
template <typename Scalar>
VectorX<Scalar> control_at(const GainSchedule<Scalar>& sched, const LinearSystem<Scalar>& sys,
                           const VectorX<Scalar>& x, int t, const VectorX<Scalar>& r_next) {
    if (t < sched.t0 || t >= sched.horizon) {
        throw ValidationError("control_at: t outside [t0, T-1]");
    }
    if (x.size() != sys.n()) throw DimensionError("control_at: x size must equal sys.n()");
    if (r_next.size() != sys.n()) throw DimensionError("control_at: r_next size must equal sys.n()");
    const MatrixX<Scalar>& Sn = sched.S_at(t + 1);
    const VectorX<Scalar>& bn = sched.b_at(t + 1);
    const MatrixX<Scalar> G = sys.B.transpose() * Sn * sys.B + sched.R;
    Eigen::LLT<MatrixX<Scalar>> llt(G);
    if (llt.info() != Eigen::Success) {
        throw RankDeficiencyError("control_at: B'S(t+1)B + R is not invertible");
    }
    return -llt.solve(sys.B.transpose() * (Sn * sys.A * x + bn - sched.Q * r_next));
}

template <typename Scalar = double>
struct FiniteSolution {
    Trajectory<Scalar> trajectory;
    GainSchedule<Scalar> schedule;
    Scalar cost = 0;  ///< finite-horizon index of the rollout
};

/// Offline backward pass followed by the closed-loop rollout from x0.
template <typename Scalar>
FiniteSolution<Scalar> solve_finite_lqt(const LinearSystem<Scalar>& sys, const MatrixX<Scalar>& Q,
                                        const MatrixX<Scalar>& R, const ReferenceSignal<Scalar>& ref,
                                        const VectorX<Scalar>& x0, int t0, int T) {
    if (x0.size() != sys.n()) throw DimensionError("solve_finite_lqt: x0 size must equal sys.n()");
    FiniteSolution<Scalar> sol;
    sol.schedule = backward_pass(sys, Q, R, ref, t0, T);
    const std::vector<VectorX<Scalar>> r_seq = ref.sequence(static_cast<Eigen::Index>(T - t0) + 1);
    auto policy = [&](int t, const VectorX<Scalar>& x) {
        return control_at(sol.schedule, sys, x, t, r_seq[static_cast<std::size_t>(t - t0) + 1]);
    };
    sol.trajectory = simulate(sys, ref, x0, policy, static_cast<Eigen::Index>(T - t0), t0);
    sol.cost = finite_cost(sol.trajectory, Q, R).total;
    return sol;
}

}  // namespace lqt

#endif  // LQT_FINITE_LQT_HPP
