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
#ifndef LQT_QLEARNING_HPP
#define LQT_QLEARNING_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include "lqt/infinite_lqt.hpp"
#include "lqt/rng.hpp"
#include "lqt/state_space.hpp"

namespace lqt {

/// Minimum tuple count that makes the symmetric kernel identifiable:
/// (2n+m)(2n+m+1)/2 free parameters.
constexpr Eigen::Index identifiability_floor(Eigen::Index n2, Eigen::Index m) {
    return (n2 + m) * (n2 + m + 1) / 2;
}

/**
 * @brief Symmetric Q-function kernel over Z = [X; u], with block views.
 *
 * Q(X, u) = Z' H Z, H = [[H_XX, H_Xu], [H_uX, H_uu]]. Construction checks
 * symmetry to 1e-9 (relative) and then makes it exact.
 */
template <typename Scalar = double>
struct KernelMatrix {
    MatrixX<Scalar> H;
    Eigen::Index n2 = 0;  ///< augmented-state dimension 2n
    Eigen::Index m = 0;   ///< input dimension

    KernelMatrix() = default;

    KernelMatrix(MatrixX<Scalar> H_in, Eigen::Index n2_in, Eigen::Index m_in)
        : H(std::move(H_in)), n2(n2_in), m(m_in) {
        if (n2 < 1 || m < 1) throw ValidationError("KernelMatrix: dimensions must be positive");
        if (H.rows() != n2 + m || H.cols() != n2 + m) {
            throw DimensionError("KernelMatrix: H must be (2n+m) x (2n+m)");
        }
        const Scalar asym = (H - H.transpose()).template lpNorm<Eigen::Infinity>();
        if (asym > Scalar(1e-9) * (Scalar(1) + H.template lpNorm<Eigen::Infinity>())) {
            throw ValidationError("KernelMatrix: H is not symmetric (asymmetry " +
                                  std::to_string(static_cast<double>(asym)) + ")");
        }
        H = ((H + H.transpose()) / Scalar(2)).eval();
    }

    static KernelMatrix identity(Eigen::Index n2, Eigen::Index m) {
        return KernelMatrix(MatrixX<Scalar>::Identity(n2 + m, n2 + m), n2, m);
    }

    Eigen::Index q() const { return n2 + m; }

    auto XX() const { return H.topLeftCorner(n2, n2); }
    auto Xu() const { return H.topRightCorner(n2, m); }
    auto uX() const { return H.bottomLeftCorner(m, n2); }
    auto uu() const { return H.bottomRightCorner(m, m); }
};

/**
 * @brief Ordered (X(t), u(t), X(t+1)) tuples stored row-wise.
 *
 * Rows of X and Xnext are augmented states [x; r]. A dataset produced by
 * generate_training_data is one rollout, so Xnext.row(t) == X.row(t+1).
 */
template <typename Scalar = double>
struct TransitionDataset {
    MatrixX<Scalar> X;      ///< N x 2n
    MatrixX<Scalar> U;      ///< N x m
    MatrixX<Scalar> Xnext;  ///< N x 2n
    std::uint64_t seed = 0;

    Eigen::Index count() const { return X.rows(); }
    Eigen::Index n2() const { return X.cols(); }
    Eigen::Index m() const { return U.cols(); }

    void check_consistent() const {
        if (X.rows() != U.rows() || X.rows() != Xnext.rows() || X.cols() != Xnext.cols()) {
            throw DimensionError("TransitionDataset: X, U, Xnext row/column counts disagree");
        }
    }
};

/// Probing-signal parameters: amplitudes and base frequency of the seven
/// sinusoids plus the variance parameter of the constant offset omega1.
template <typename Scalar = double>
struct ProbingNoiseConfig {
    Scalar sigma = Scalar(0.5);  ///< omega1 ~ N(0, sqrt(sigma)) per component
    std::array<Scalar, 7> amplitudes{Scalar(10), Scalar(8),  Scalar(7), Scalar(6),
                                     Scalar(4),  Scalar(3), Scalar(0.5)};
    Scalar base_frequency = Scalar(M_PI / 5.0);
};

/// The eight random vectors behind the probing signal; omega[0] is the
/// constant offset, omega[1..7] the per-sinusoid frequency vectors.
template <typename Scalar = double>
struct NoiseBasis {
    std::array<VectorX<Scalar>, 8> omega;
};

/// Draw the probing-noise basis for an m-input plant. Same seed, same basis.
template <typename Scalar = double>
NoiseBasis<Scalar> draw_noise_basis(std::uint64_t seed, Eigen::Index m = 7,
                                    const ProbingNoiseConfig<Scalar>& cfg = {}) {
    if (m < 1) throw ValidationError("draw_noise_basis: m must be >= 1");
    if (cfg.sigma < Scalar(0)) throw ValidationError("draw_noise_basis: sigma must be >= 0");
    NormalSampler sampler(seed);
    NoiseBasis<Scalar> basis;
    const Scalar sd = std::sqrt(cfg.sigma);
    basis.omega[0] = (sd * sampler.normal_vector(m)).template cast<Scalar>();
    for (std::size_t j = 1; j < 8; ++j) {
        basis.omega[j] = sampler.normal_vector(m).template cast<Scalar>();
    }
    return basis;
}

/// Probing signal omega1 + sum_j amp_j sin(j omega_{j+1} (pi/5) t), sin
/// applied elementwise.
template <typename Scalar>
VectorX<Scalar> probing_noise(const NoiseBasis<Scalar>& basis, int t,
                              const ProbingNoiseConfig<Scalar>& cfg = {}) {
    VectorX<Scalar> w = basis.omega[0];
    for (std::size_t j = 1; j < 8; ++j) {
        const Scalar phase = static_cast<Scalar>(j) * cfg.base_frequency * static_cast<Scalar>(t);
        w += cfg.amplitudes[j - 1] * (phase * basis.omega[j]).array().sin().matrix();
    }
    return w;
}

/// Fixed stabilizing plant gain used to collect training data (applied as
/// u = -K x + noise).
template <typename Scalar = double>
MatrixX<Scalar> stabilizing_gain() {
    MatrixX<Scalar> K(7, 6);
    K << 0.7395, -0.0076, -0.0003, -0.0264, 0.0194, -0.0170,
         -0.0076, 0.7430, 0.0031, -0.0093, 0.0068, -0.0060,
         -0.0003, -0.0033, 0.7599, 0.0021, 0.0002, -0.0002,
         -0.0126, -0.0042, 0.0016, 1.0971, 0.0092, -0.0079,
         0.0171, 0.0058, 0.0002, 0.0170, 0.8179, 0.0108,
         -0.0198, -0.0067, -0.0002, -0.0193, 0.0143, 0.6823,
         -0.1525, -0.0519, -0.0018, -0.1412, 0.1091, -0.0977;
    return K;
}

/**
 * @brief Roll the plant under u(t) = -K x(t) + probing noise (u at the first
 * step is omega1 alone) and record N consecutive transition tuples.
 *
 * @throws ValidationError if N is below the identifiability floor.
 * @throws StabilizationError if K does not stabilize (A, B).
 * @throws DivergenceError if the state leaves the 1e9 overflow guard.
 */
template <typename Scalar>
TransitionDataset<Scalar> generate_training_data(const LinearSystem<Scalar>& sys,
                                                 const ReferenceSignal<Scalar>& ref,
                                                 const MatrixX<Scalar>& K,
                                                 const VectorX<Scalar>& x0, Eigen::Index N,
                                                 std::uint64_t seed,
                                                 const ProbingNoiseConfig<Scalar>& cfg = {}) {
    const Eigen::Index n = sys.n();
    const Eigen::Index m = sys.m();
    if (ref.n() != n) throw DimensionError("generate_training_data: reference dimension mismatch");
    if (K.rows() != m || K.cols() != n) {
        throw DimensionError("generate_training_data: K must be m x n");
    }
    if (x0.size() != n) throw DimensionError("generate_training_data: x0 size must equal n");
    const Eigen::Index floor = identifiability_floor(2 * n, m);
    if (N < floor) {
        throw ValidationError("generate_training_data: N = " + std::to_string(N) +
                              " is below the identifiability floor " + std::to_string(floor));
    }
    const Scalar rho = spectral_radius<Scalar>(MatrixX<Scalar>(sys.A - sys.B * K));
    if (!(rho < Scalar(1))) {
        throw StabilizationError("generate_training_data: K does not stabilize the plant, "
                                 "spectral radius " + std::to_string(static_cast<double>(rho)),
                                 static_cast<double>(rho));
    }

    const NoiseBasis<Scalar> basis = draw_noise_basis(seed, m, cfg);
    const std::vector<VectorX<Scalar>> r_seq = ref.sequence(N + 1);

    TransitionDataset<Scalar> data;
    data.seed = seed;
    data.X.resize(N, 2 * n);
    data.U.resize(N, m);
    data.Xnext.resize(N, 2 * n);

    VectorX<Scalar> x = x0;
    for (Eigen::Index t = 0; t < N; ++t) {
        if (x.template lpNorm<Eigen::Infinity>() > Scalar(1e9)) {
            throw DivergenceError("generate_training_data: state exceeded the 1e9 guard at t = " +
                                  std::to_string(t));
        }
        const VectorX<Scalar> u =
            (t == 0) ? basis.omega[0]
                     : VectorX<Scalar>(-K * x + probing_noise(basis, static_cast<int>(t), cfg));
        data.X.row(t) << x.transpose(), r_seq[static_cast<std::size_t>(t)].transpose();
        data.U.row(t) = u.transpose();
        x = step(sys, x, u);
        data.Xnext.row(t) << x.transpose(), r_seq[static_cast<std::size_t>(t) + 1].transpose();
    }
    return data;
}

/// Row Z' (x) Z' such that kron_row(Z) . vec(H) = Z'HZ (column-major vec).
template <typename Scalar>
Eigen::Matrix<Scalar, 1, Eigen::Dynamic> kron_row(const VectorX<Scalar>& Z) {
    const Eigen::Index q = Z.size();
    Eigen::Matrix<Scalar, 1, Eigen::Dynamic> out(q * q);
    for (Eigen::Index i = 0; i < q; ++i) {
        out.segment(i * q, q) = Z(i) * Z.transpose();
    }
    return out;
}

namespace detail {

/**
 * @brief Shared least-squares state for value iteration on one dataset.
 *
 * The regressor matrix, stage costs, and the factorization of
 * (sum K_Z'K_Z + mu I) depend only on the data and weights, so they are
 * built once and reused by every iteration.
 */
template <typename Scalar>
struct QRegression {
    MatrixX<Scalar> Kz;     ///< N x q^2 rows kron_row(Z(t))
    VectorX<Scalar> stage;  ///< X'Q1X + u'Ru per tuple
    MatrixX<Scalar> Xn;     ///< successor augmented states, N x 2n
    Eigen::LDLT<MatrixX<Scalar>> ldlt;
    Eigen::FullPivLU<MatrixX<Scalar>> lu;
    bool use_ldlt = false;
    Eigen::Index n2 = 0, m = 0;

    QRegression(const TransitionDataset<Scalar>& data, const MatrixX<Scalar>& Q1,
                const MatrixX<Scalar>& R, Scalar mu) {
        data.check_consistent();
        n2 = data.n2();
        m = data.m();
        Xn = data.Xnext;
        const Eigen::Index N = data.count();
        const Eigen::Index q = n2 + m;
        if (N < 1) throw ValidationError("value iteration: dataset is empty");
        if (Q1.rows() != n2 || Q1.cols() != n2) {
            throw DimensionError("value iteration: Q1 must be 2n x 2n");
        }
        if (R.rows() != m || R.cols() != m) throw DimensionError("value iteration: R must be m x m");
        if (mu < Scalar(0)) throw ValidationError("value iteration: mu must be >= 0");

        Kz.resize(N, q * q);
        stage.resize(N);
        VectorX<Scalar> Z(q);
        for (Eigen::Index t = 0; t < N; ++t) {
            const VectorX<Scalar> x = data.X.row(t).transpose();
            const VectorX<Scalar> u = data.U.row(t).transpose();
            Z << x, u;
            Kz.row(t) = kron_row(Z);
            stage(t) = x.dot(Q1 * x) + u.dot(R * u);
        }

        MatrixX<Scalar> L = Kz.transpose() * Kz;
        L.diagonal().array() += mu;
        if (mu > Scalar(0)) {
            use_ldlt = true;
            ldlt.compute(L);
            if (ldlt.info() != Eigen::Success) {
                throw RankDeficiencyError("value iteration: normal equations not factorizable");
            }
        } else {
            lu.compute(L);
            if (!lu.isInvertible()) {
                throw RankDeficiencyError(
                    "value iteration: normal equations are rank deficient (rank " +
                    std::to_string(lu.rank()) + " of " + std::to_string(q * q) +
                    "); the symmetric kernel needs N >= " + std::to_string(q * (q + 1) / 2) +
                    " rich tuples, and mu > 0 is required to absorb the symmetry null space");
            }
        }
    }

    KernelMatrix<Scalar> step(const KernelMatrix<Scalar>& Hi, Scalar gamma) const {
        if (Hi.n2 != n2 || Hi.m != m) {
            throw DimensionError("value iteration: kernel dimensions do not match dataset");
        }
        Eigen::FullPivLU<MatrixX<Scalar>> huu(MatrixX<Scalar>(Hi.uu()));
        if (!huu.isInvertible()) {
            throw ExtractionError("value iteration: uu-block of the current kernel is singular");
        }
        // Greedy next actions, row-stacked: Un(t,:) = -(Huu^-1 HuX X(t+1))'.
        const MatrixX<Scalar> Un =
            -(huu.solve(MatrixX<Scalar>(Hi.uX()) * Xn.transpose())).transpose();
        MatrixX<Scalar> Zn(Xn.rows(), n2 + m);
        Zn << Xn, Un;
        const VectorX<Scalar> boot = ((Zn * Hi.H).cwiseProduct(Zn)).rowwise().sum();
        const VectorX<Scalar> target = stage + gamma * boot;
        const VectorX<Scalar> rhs = Kz.transpose() * target;
        const VectorX<Scalar> vec_h =
            use_ldlt ? VectorX<Scalar>(ldlt.solve(rhs)) : VectorX<Scalar>(lu.solve(rhs));
        MatrixX<Scalar> H = vec_h.reshaped(n2 + m, n2 + m);
        H = ((H + H.transpose()) / Scalar(2)).eval();
        if (H.template lpNorm<Eigen::Infinity>() == Scalar(0)) {
            throw RankDeficiencyError(
                "value iteration: degenerate solve produced an all-zero kernel "
                "(is the dataset identically zero?)");
        }
        return KernelMatrix<Scalar>(std::move(H), n2, m);
    }
};

}  // namespace detail

/**
 * @brief One regularized least-squares backup of the kernel estimate.
 *
 * Greedy actions at the successor states come from H_i; the regression
 * target is stage cost plus the discounted bootstrapped Q-value; the normal
 * equations (sum K_Z'K_Z + mu I) vec(H) = sum K_Z' target are solved over
 * the full 361-parameter vec(H) and the result symmetrized.
 */
template <typename Scalar>
KernelMatrix<Scalar> value_iteration_step(const TransitionDataset<Scalar>& data,
                                          const KernelMatrix<Scalar>& Hi,
                                          const MatrixX<Scalar>& Q1, const MatrixX<Scalar>& R,
                                          Scalar gamma, Scalar mu) {
    if (!(gamma > Scalar(0)) || gamma > Scalar(1)) {
        throw ValidationError("value_iteration_step: gamma must lie in (0, 1]");
    }
    detail::QRegression<Scalar> reg(data, Q1, R, mu);
    return reg.step(Hi, gamma);
}

/// Outcome of learn_kernel: the estimate, sweep count, and which stop
/// condition fired (tolerance met vs. iteration cap).
template <typename Scalar = double>
struct LearnResult {
    KernelMatrix<Scalar> H;
    int iterations = 0;
    bool converged = false;
    Scalar final_delta = 0;  ///< last max-abs kernel change
};

/**
 * @brief Iterate value_iteration_step from H0 until the kernel moves by at
 * most tol (max-abs) or max_iter sweeps have run.
 *
 * @throws DivergenceError if the kernel norm exceeds 1e12.
 */
template <typename Scalar>
LearnResult<Scalar> learn_kernel(const TransitionDataset<Scalar>& data, const MatrixX<Scalar>& Q1,
                                 const MatrixX<Scalar>& R, Scalar gamma, Scalar mu,
                                 const KernelMatrix<Scalar>& H0, Scalar tol, int max_iter) {
    if (!(tol > Scalar(0))) throw ValidationError("learn_kernel: tol must be > 0");
    if (max_iter < 1) throw ValidationError("learn_kernel: max_iter must be >= 1");
    if (!(gamma > Scalar(0)) || gamma > Scalar(1)) {
        throw ValidationError("learn_kernel: gamma must lie in (0, 1]");
    }

    detail::QRegression<Scalar> reg(data, Q1, R, mu);

    LearnResult<Scalar> result;
    result.H = H0;
    for (int i = 0; i < max_iter; ++i) {
        KernelMatrix<Scalar> H_next = reg.step(result.H, gamma);
        result.final_delta = (H_next.H - result.H.H).template lpNorm<Eigen::Infinity>();
        result.H = std::move(H_next);
        result.iterations = i + 1;
        if (result.H.H.template lpNorm<Eigen::Infinity>() > Scalar(1e12)) {
            throw DivergenceError("learn_kernel: kernel norm exceeded 1e12 at sweep " +
                                  std::to_string(result.iterations));
        }
        if (result.final_delta <= tol) {
            result.converged = true;
            break;
        }
    }
    return result;
}

/// Greedy gain K = H_uu^-1 H_uX, applied as u = -K X.
template <typename Scalar>
MatrixX<Scalar> gain_from_kernel(const KernelMatrix<Scalar>& H) {
    Eigen::FullPivLU<MatrixX<Scalar>> huu(MatrixX<Scalar>(H.uu()));
    if (!huu.isInvertible()) {
        throw ExtractionError("gain_from_kernel: uu-block is singular");
    }
    return huu.solve(MatrixX<Scalar>(H.uX()));
}

/// Model-based kernel assembled from a value kernel P:
/// H = [[Q1 + g T'PT, g T'PB1], [g B1'PT, R + g B1'PB1]].
template <typename Scalar>
KernelMatrix<Scalar> kernel_from(const AugmentedSystem<Scalar>& aug, const MatrixX<Scalar>& R,
                                 Scalar gamma, const MatrixX<Scalar>& P) {
    if (P.rows() != aug.n2() || P.cols() != aug.n2()) {
        throw DimensionError("kernel_from: P must be 2n x 2n");
    }
    const Eigen::Index q = aug.n2() + aug.m();
    MatrixX<Scalar> H(q, q);
    H.topLeftCorner(aug.n2(), aug.n2()) = aug.Q1 + gamma * aug.T.transpose() * P * aug.T;
    H.topRightCorner(aug.n2(), aug.m()) = gamma * aug.T.transpose() * P * aug.B1;
    H.bottomLeftCorner(aug.m(), aug.n2()) = gamma * aug.B1.transpose() * P * aug.T;
    H.bottomRightCorner(aug.m(), aug.m()) = R + gamma * aug.B1.transpose() * P * aug.B1;
    H = ((H + H.transpose()) / Scalar(2)).eval();
    return KernelMatrix<Scalar>(std::move(H), aug.n2(), aug.m());
}

}  // namespace lqt

#endif  // LQT_QLEARNING_HPP
