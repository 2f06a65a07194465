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
#ifndef LQT_INFINITE_LQT_HPP
#define LQT_INFINITE_LQT_HPP

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include "lqt/finite_lqt.hpp"
#include "lqt/rng.hpp"
#include "lqt/state_space.hpp"

namespace lqt {

namespace detail {

/// Dense Kronecker product A (x) B.
template <typename Scalar>
MatrixX<Scalar> kron(const MatrixX<Scalar>& A, const MatrixX<Scalar>& B) {
    MatrixX<Scalar> out(A.rows() * B.rows(), A.cols() * B.cols());
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
        for (Eigen::Index j = 0; j < A.cols(); ++j) {
            out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
        }
    }
    return out;
}

}  // namespace detail

/**
 * @brief Converged value kernel and stationary gain for the discounted
 * tracking problem on the augmented state.
 */
template <typename Scalar = double>
struct StationarySolution {
    MatrixX<Scalar> P;  ///< 2n x 2n value kernel
    MatrixX<Scalar> K;  ///< m x 2n gain, applied as u = -K X
    Scalar gamma = 1;
    int iterations = 0;  ///< policy-iteration sweeps performed
};

/**
 * @brief Direct solve of the discounted tracking Lyapunov equation
 * P = Q1 + K'RK + gamma M'PM with M = T - B1 K.
 *
 * Vectorizes to (I - gamma M' (x) M') vec(P) = vec(Q1 + K'RK) and solves
 * densely; the result is symmetrized. Requires the policy to be
 * gamma-stabilizing: sqrt(gamma) rho(M) < 1.
 */
template <typename Scalar>
MatrixX<Scalar> solve_lyapunov(const AugmentedSystem<Scalar>& aug, const MatrixX<Scalar>& R,
                               const MatrixX<Scalar>& K, Scalar gamma) {
    const Eigen::Index q = aug.n2();
    if (K.rows() != aug.m() || K.cols() != q) {
        throw DimensionError("solve_lyapunov: K must be m x 2n");
    }
    if (R.rows() != aug.m() || R.cols() != aug.m()) {
        throw DimensionError("solve_lyapunov: R must be m x m");
    }
    if (!(gamma > Scalar(0)) || gamma > Scalar(1)) {
        throw ValidationError("solve_lyapunov: gamma must lie in (0, 1]");
    }

    const MatrixX<Scalar> M = aug.T - aug.B1 * K;
    const Scalar weighted = std::sqrt(gamma) * spectral_radius<Scalar>(M);
    if (!(weighted < Scalar(1))) {
        throw StabilizationError(
            "solve_lyapunov: policy is not gamma-stabilizing, sqrt(gamma)-weighted "
            "spectral radius " + std::to_string(static_cast<double>(weighted)),
            static_cast<double>(weighted));
    }

    const MatrixX<Scalar> Mt = M.transpose();
    const MatrixX<Scalar> lhs =
        MatrixX<Scalar>::Identity(q * q, q * q) - gamma * detail::kron(Mt, Mt);
    const MatrixX<Scalar> rhs_mat = aug.Q1 + K.transpose() * R * K;
    const VectorX<Scalar> rhs = rhs_mat.reshaped();
    const VectorX<Scalar> vec_p = Eigen::PartialPivLU<MatrixX<Scalar>>(lhs).solve(rhs);
    MatrixX<Scalar> P = vec_p.reshaped(q, q);
    return ((P + P.transpose()) / Scalar(2)).eval();
}

/// Greedy gain for a value kernel P: K = (R + gamma B1'PB1)^-1 gamma B1'PT.
template <typename Scalar>
MatrixX<Scalar> gain_from_value(const AugmentedSystem<Scalar>& aug, const MatrixX<Scalar>& R,
                                Scalar gamma, const MatrixX<Scalar>& P) {
    const MatrixX<Scalar> G = R + gamma * aug.B1.transpose() * P * aug.B1;
    Eigen::LLT<MatrixX<Scalar>> llt(G);
    if (llt.info() != Eigen::Success) {
        throw RankDeficiencyError("gain_from_value: R + gamma B1'PB1 is not positive definite");
    }
    return llt.solve(gamma * aug.B1.transpose() * P * aug.T);
}

/// Frobenius norm of the discounted ARE residual
/// Q1 - P + gamma T'PT - gamma^2 T'PB1 (R + gamma B1'PB1)^-1 B1'PT.
template <typename Scalar>
Scalar are_residual(const AugmentedSystem<Scalar>& aug, const MatrixX<Scalar>& R, Scalar gamma,
                    const MatrixX<Scalar>& P) {
    if (P.rows() != aug.n2() || P.cols() != aug.n2()) {
        throw DimensionError("are_residual: P must be 2n x 2n");
    }
    detail::require_symmetric(P, "P", 1e-9);
    const MatrixX<Scalar> G = R + gamma * aug.B1.transpose() * P * aug.B1;
    const MatrixX<Scalar> PB1 = P * aug.B1;
    const MatrixX<Scalar> residual =
        aug.Q1 - P + gamma * aug.T.transpose() * P * aug.T -
        gamma * gamma * aug.T.transpose() * PB1 *
            Eigen::PartialPivLU<MatrixX<Scalar>>(G).solve(PB1.transpose() * aug.T);
    return residual.norm();
}

/**
 * @brief Policy iteration: alternate exact Lyapunov solves with greedy gain
 * updates until the gain moves by at most eps (max-abs, elementwise).
 *
 * After the eps stop, sweeps continue until the ARE residual of P drops
 * below 1e-9 (a handful at most, since the iteration is locally quadratic).
 * eps controls when the gain is considered converged; the polish guarantees
 * the returned P is the fixed-point kernel rather than an eps-coarse iterate.
 *
 * @throws StabilizationError if K0 (or any iterate) fails the
 *         sqrt(gamma)-stability precondition.
 * @throws ConvergenceError if max_iter sweeps cannot meet eps; the error
 *         carries the last gain iterate.
 */
template <typename Scalar>
StationarySolution<Scalar> policy_iteration(const AugmentedSystem<Scalar>& aug,
                                            const MatrixX<Scalar>& R, Scalar gamma,
                                            const MatrixX<Scalar>& K0, Scalar eps,
                                            int max_iter) {
    if (!(eps > Scalar(0))) throw ValidationError("policy_iteration: eps must be > 0");
    if (max_iter < 1) throw ValidationError("policy_iteration: max_iter must be >= 1");
    if (K0.rows() != aug.m() || K0.cols() != aug.n2()) {
        throw DimensionError("policy_iteration: K0 must be m x 2n");
    }

    StationarySolution<Scalar> sol;
    sol.gamma = gamma;
    sol.K = K0;
    Scalar delta = std::numeric_limits<Scalar>::infinity();
    for (int j = 0; j < max_iter; ++j) {
        sol.P = solve_lyapunov(aug, R, sol.K, gamma);
        const MatrixX<Scalar> K_next = gain_from_value(aug, R, gamma, sol.P);
        delta = (K_next - sol.K).template lpNorm<Eigen::Infinity>();
        sol.K = K_next;
        sol.iterations = j + 1;
        if (delta <= eps) break;
    }
    if (delta > eps) {
        throw ConvergenceError("policy_iteration: gain still moving by " +
                                   std::to_string(static_cast<double>(delta)) + " after " +
                                   std::to_string(max_iter) + " sweeps",
                               sol.iterations, static_cast<double>(delta), sol.K);
    }

    constexpr int kPolishCap = 10;
    Scalar residual = are_residual(aug, R, gamma, sol.P);
    for (int j = 0; j < kPolishCap && !(residual < Scalar(1e-9)); ++j) {
        sol.P = solve_lyapunov(aug, R, sol.K, gamma);
        sol.K = gain_from_value(aug, R, gamma, sol.P);
        ++sol.iterations;
        residual = are_residual(aug, R, gamma, sol.P);
    }
    if (!(residual < Scalar(1e-6))) {
        throw ConvergenceError("policy_iteration: ARE residual stuck at " +
                                   std::to_string(static_cast<double>(residual)),
                               sol.iterations, static_cast<double>(residual), sol.K);
    }
    return sol;
}

/**
 * @brief Draw a gamma-stabilizing initial gain.
 *
 * Entries are sampled iid normal with standard deviation `scale`; each failed
 * candidate halves the scale. If the budget runs out, the zero gain is used
 * when the open loop is itself gamma-stable.
 */
template <typename Scalar>
MatrixX<Scalar> draw_stabilizing_k0(const AugmentedSystem<Scalar>& aug, Scalar gamma,
                                    NormalSampler& sampler, Scalar scale = Scalar(10),
                                    int max_attempts = 100) {
    const Scalar root_gamma = std::sqrt(gamma);
    MatrixX<Scalar> K(aug.m(), aug.n2());
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        for (Eigen::Index i = 0; i < K.rows(); ++i) {
            for (Eigen::Index j = 0; j < K.cols(); ++j) {
                K(i, j) = scale * static_cast<Scalar>(sampler.normal());
            }
        }
        if (root_gamma * spectral_radius<Scalar>(MatrixX<Scalar>(aug.T - aug.B1 * K)) <
            Scalar(1)) {
            return K;
        }
        scale *= Scalar(0.5);
    }
    const Scalar open_loop = root_gamma * spectral_radius<Scalar>(aug.T);
    if (open_loop < Scalar(1)) return MatrixX<Scalar>::Zero(aug.m(), aug.n2());
    throw StabilizationError(
        "draw_stabilizing_k0: no stabilizing gain found and the open loop has "
        "sqrt(gamma)-weighted spectral radius " +
            std::to_string(static_cast<double>(open_loop)),
        static_cast<double>(open_loop));
}

/// Stationary policy u = -K X as a (t, X) callable for simulate().
template <typename Scalar>
auto controller_from(const StationarySolution<Scalar>& sol) {
    return [K = sol.K](int, const VectorX<Scalar>& X) -> VectorX<Scalar> { return -K * X; };
}

}  // namespace lqt

#endif  // LQT_INFINITE_LQT_HPP
