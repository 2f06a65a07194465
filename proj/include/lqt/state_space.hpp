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
#ifndef LQT_STATE_SPACE_HPP
#define LQT_STATE_SPACE_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "lqt/errors.hpp"

namespace lqt {

template <typename Scalar = double>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar = double>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

namespace detail {

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& m, const char* name) {
    if (!m.allFinite()) {
        throw ValidationError(std::string(name) + " contains a non-finite entry");
    }
}

template <typename Derived>
void require_symmetric(const Eigen::MatrixBase<Derived>& m, const char* name,
                       double tol = 1e-12) {
    if (m.rows() != m.cols()) {
        throw DimensionError(std::string(name) + " must be square");
    }
    const double asym = (m - m.transpose()).template lpNorm<Eigen::Infinity>();
    const double scale = 1.0 + m.template lpNorm<Eigen::Infinity>();
    if (asym > tol * scale) {
        throw ValidationError(std::string(name) + " is not symmetric (asymmetry " +
                              std::to_string(asym) + ")");
    }
}

}  // namespace detail

/// Spectral radius of a square matrix (largest eigenvalue modulus).
template <typename Scalar>
Scalar spectral_radius(const MatrixX<Scalar>& M) {
    if (M.rows() != M.cols()) throw DimensionError("spectral_radius: matrix must be square");
    Eigen::EigenSolver<MatrixX<Scalar>> es(M, /*computeEigenvectors=*/false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

/**
 * @brief Discrete-time linear plant x(t+1) = A x(t) + B u(t).
 */
template <typename Scalar = double>
struct LinearSystem {
    MatrixX<Scalar> A;  ///< n x n state matrix
    MatrixX<Scalar> B;  ///< n x m input matrix

    LinearSystem(MatrixX<Scalar> A_in, MatrixX<Scalar> B_in)
        : A(std::move(A_in)), B(std::move(B_in)) {
        if (A.rows() == 0 || B.cols() == 0) {
            throw ValidationError("LinearSystem: A and B must be non-empty");
        }
        if (A.rows() != A.cols()) throw DimensionError("LinearSystem: A must be square");
        if (B.rows() != A.rows()) {
            throw DimensionError("LinearSystem: B must have as many rows as A");
        }
        detail::require_finite(A, "A");
        detail::require_finite(B, "B");
    }

    Eigen::Index n() const { return A.rows(); }
    Eigen::Index m() const { return B.cols(); }
};

/**
 * @brief Reference generator r(t+1) = F r(t), seeded at r(t0) = r0.
 */
template <typename Scalar = double>
struct ReferenceSignal {
    MatrixX<Scalar> F;   ///< n x n generator
    VectorX<Scalar> r0;  ///< initial reference

    ReferenceSignal(MatrixX<Scalar> F_in, VectorX<Scalar> r0_in)
        : F(std::move(F_in)), r0(std::move(r0_in)) {
        if (F.rows() != F.cols()) throw DimensionError("ReferenceSignal: F must be square");
        if (r0.size() != F.rows()) {
            throw DimensionError("ReferenceSignal: r0 size must match F");
        }
        detail::require_finite(F, "F");
        detail::require_finite(r0, "r0");
    }

    Eigen::Index n() const { return F.rows(); }

    /// r at offset k >= 0 from t0, i.e. F^k r0.
    VectorX<Scalar> at(Eigen::Index k) const {
        if (k < 0) throw ValidationError("ReferenceSignal::at: offset must be >= 0");
        VectorX<Scalar> r = r0;
        for (Eigen::Index i = 0; i < k; ++i) r = F * r;
        return r;
    }

    /// r(0..count-1) materialized in one forward sweep.
    std::vector<VectorX<Scalar>> sequence(Eigen::Index count) const {
        if (count < 0) throw ValidationError("ReferenceSignal::sequence: count must be >= 0");
        std::vector<VectorX<Scalar>> out;
        out.reserve(static_cast<std::size_t>(count));
        VectorX<Scalar> r = r0;
        for (Eigen::Index i = 0; i < count; ++i) {
            out.push_back(r);
            r = F * r;
        }
        return out;
    }
};

/**
 * @brief Augmented tracking system over X = [x; r].
 *
 * T = diag(A, F), B1 = [B; 0], Q1 = [[Q, -Q], [-Q, Q]] so that
 * X' Q1 X = (x - r)' Q (x - r).
 */
template <typename Scalar = double>
struct AugmentedSystem {
    MatrixX<Scalar> T;   ///< 2n x 2n block-diagonal dynamics
    MatrixX<Scalar> B1;  ///< 2n x m input map, bottom n rows exactly zero
    MatrixX<Scalar> Q1;  ///< 2n x 2n tracking-error weight

    Eigen::Index n() const { return T.rows() / 2; }
    Eigen::Index n2() const { return T.rows(); }
    Eigen::Index m() const { return B1.cols(); }
};

/**
 * @brief Rollout record: states x(t0..t0+L), references r(t0..t0+L),
 * inputs u(t0..t0+L-1).
 *
 * references may be empty when the rollout has no tracking target.
 */
template <typename Scalar = double>
struct Trajectory {
    int t0 = 0;
    std::vector<VectorX<Scalar>> states;
    std::vector<VectorX<Scalar>> references;
    std::vector<VectorX<Scalar>> inputs;

    /// Number of recorded transitions L (states holds L + 1 entries).
    Eigen::Index length() const { return static_cast<Eigen::Index>(inputs.size()); }

    void check_consistent() const {
        if (states.size() != inputs.size() + 1) {
            throw ValidationError("Trajectory: states must hold exactly one more entry than inputs");
        }
        if (!references.empty() && references.size() != states.size()) {
            throw ValidationError("Trajectory: references must be empty or match states in length");
        }
    }
};

/// One plant step: A x + B u.
template <typename Scalar>
VectorX<Scalar> step(const LinearSystem<Scalar>& sys, const VectorX<Scalar>& x,
                     const VectorX<Scalar>& u) {
    if (x.size() != sys.n()) throw DimensionError("step: x size must equal sys.n()");
    if (u.size() != sys.m()) throw DimensionError("step: u size must equal sys.m()");
    return sys.A * x + sys.B * u;
}

/**
 * @brief Roll the plant forward under a feedback policy.
 *
 * @param policy callable (t, x) -> u, evaluated at t = t0, t0+1, ...
 * @return trajectory with states[0] = x0 and no reference track.
 */
template <typename Scalar, typename Policy>
Trajectory<Scalar> simulate(const LinearSystem<Scalar>& sys, const VectorX<Scalar>& x0,
                            Policy&& policy, Eigen::Index steps, int t0 = 0) {
    if (steps < 0) throw ValidationError("simulate: steps must be >= 0");
    if (x0.size() != sys.n()) throw DimensionError("simulate: x0 size must equal sys.n()");
    Trajectory<Scalar> traj;
    traj.t0 = t0;
    traj.states.reserve(static_cast<std::size_t>(steps) + 1);
    traj.inputs.reserve(static_cast<std::size_t>(steps));
    traj.states.push_back(x0);
    for (Eigen::Index k = 0; k < steps; ++k) {
        const VectorX<Scalar> u = policy(t0 + static_cast<int>(k), traj.states.back());
        if (u.size() != sys.m()) {
            throw DimensionError("simulate: policy returned a vector of size " +
                                 std::to_string(u.size()) + ", expected " +
                                 std::to_string(sys.m()));
        }
        traj.inputs.push_back(u);
        traj.states.push_back(step(sys, traj.states.back(), u));
    }
    return traj;
}

/// simulate() with the reference track materialized from ref alongside states.
template <typename Scalar, typename Policy>
Trajectory<Scalar> simulate(const LinearSystem<Scalar>& sys, const ReferenceSignal<Scalar>& ref,
                            const VectorX<Scalar>& x0, Policy&& policy, Eigen::Index steps,
                            int t0 = 0) {
    if (ref.n() != sys.n()) throw DimensionError("simulate: reference dimension must match plant");
    Trajectory<Scalar> traj = simulate(sys, x0, std::forward<Policy>(policy), steps, t0);
    traj.references = ref.sequence(steps + 1);
    return traj;
}

/// Build the augmented tracking system; Q must be symmetric.
template <typename Scalar>
AugmentedSystem<Scalar> augment(const LinearSystem<Scalar>& sys, const ReferenceSignal<Scalar>& ref,
                                const MatrixX<Scalar>& Q) {
    const Eigen::Index n = sys.n();
    if (ref.n() != n) throw DimensionError("augment: reference dimension must match plant");
    if (Q.rows() != n || Q.cols() != n) throw DimensionError("augment: Q must be n x n");
    detail::require_symmetric(Q, "Q");

    AugmentedSystem<Scalar> aug;
    aug.T = MatrixX<Scalar>::Zero(2 * n, 2 * n);
    aug.T.topLeftCorner(n, n) = sys.A;
    aug.T.bottomRightCorner(n, n) = ref.F;
    aug.B1 = MatrixX<Scalar>::Zero(2 * n, sys.m());
    aug.B1.topRows(n) = sys.B;
    aug.Q1.resize(2 * n, 2 * n);
    aug.Q1.topLeftCorner(n, n) = Q;
    aug.Q1.topRightCorner(n, n) = -Q;
    aug.Q1.bottomLeftCorner(n, n) = -Q;
    aug.Q1.bottomRightCorner(n, n) = Q;
    return aug;
}

/// Identified 6-state, 7-input extruder model (six barrel/nozzle heater zones
/// plus a shared screw drive input).
template <typename Scalar = double>
LinearSystem<Scalar> baam_model() {
    MatrixX<Scalar> A(6, 6);
    A << 0.992, 0.0018, 0.0, 0.0, 0.0, 0.0,
         0.0023, 0.9919, 0.0043, 0.0, 0.0, 0.0,
         0.0, -0.0042, 1.0009, 0.0024, 0.0, 0.0,
         0.0, 0.0, 0.0013, 0.9979, 0.0, 0.0,
         0.0, 0.0, 0.0, 0.0, 0.9972, 0.0,
         0.0, 0.0, 0.0, 0.0, 0.0, 0.9953;
    MatrixX<Scalar> B(6, 7);
    B << 1.0033, 0.0, 0.0, 0.0, 0.0, 0.0, -0.2175,
         0.0, 1.0460, 0.0, 0.0, 0.0, 0.0, -0.0788,
         0.0, 0.0, 1.0326, 0.0, 0.0, 0.0, -0.0020,
         0.0, 0.0, 0.0, 0.4798, 0.0, 0.0, -0.0669,
         0.0, 0.0, 0.0, 0.0, 0.8882, 0.0, 0.1273,
         0.0, 0.0, 0.0, 0.0, 0.0, 1.1699, -0.1792;
    return LinearSystem<Scalar>(std::move(A), std::move(B));
}

/// Constant zone-temperature setpoints (155, 160, 165, 170, 180, 190) degC
/// held by the identity generator F = I.
template <typename Scalar = double>
ReferenceSignal<Scalar> baam_reference() {
    MatrixX<Scalar> F = MatrixX<Scalar>::Identity(6, 6);
    VectorX<Scalar> r0(6);
    r0 << 155.0, 160.0, 165.0, 170.0, 180.0, 190.0;
    return ReferenceSignal<Scalar>(std::move(F), std::move(r0));
}

}  // namespace lqt

#endif  // LQT_STATE_SPACE_HPP
