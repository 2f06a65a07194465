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
#ifndef LQT_RNG_HPP
#define LQT_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace lqt {

/**
 * @brief Deterministic standard-normal sampler.
 *
 * std::normal_distribution is implementation defined, so results would not
 * reproduce across standard libraries. This sampler pins the whole chain:
 * mt19937_64 raw draws, a fixed uniform mapping, and Box-Muller. The same
 * seed yields bit-identical streams on every conforming platform.
 */
class NormalSampler {
public:
    explicit NormalSampler(std::uint64_t seed) : gen_(seed) {}

    /// Uniform draw in (0, 1] with 53-bit resolution. Never returns 0, so
    /// log() in Box-Muller is always finite.
    double uniform() {
        return static_cast<double>((gen_() >> 11) + 1) * 0x1p-53;
    }

    /// One standard-normal draw (Box-Muller, sine spare cached).
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * M_PI * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    /// Vector of iid standard-normal draws.
    Eigen::VectorXd normal_vector(Eigen::Index size) {
        Eigen::VectorXd v(size);
        for (Eigen::Index i = 0; i < size; ++i) v(i) = normal();
        return v;
    }

    std::mt19937_64& engine() { return gen_; }

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace lqt

#endif  // LQT_RNG_HPP
