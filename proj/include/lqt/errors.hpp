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
#ifndef LQT_ERRORS_HPP
#define LQT_ERRORS_HPP

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace lqt {

/// Base class for all lqt exceptions.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid argument values: empty matrices, non-finite entries, bad ranges.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& msg) : Error(msg) {}
};

/// Inconsistent matrix or vector dimensions.
class DimensionError : public Error {
public:
    explicit DimensionError(const std::string& msg) : Error(msg) {}
};

/// A gain fails the (discounted) closed-loop stability precondition.
class StabilizationError : public Error {
public:
    StabilizationError(const std::string& msg, double spectral_radius)
        : Error(msg), spectral_radius(spectral_radius) {}

    double spectral_radius;  ///< offending sqrt(gamma)-weighted radius
};

/// An iteration hit its cap without meeting its tolerance.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& msg, int iterations, double last_delta,
                     Eigen::MatrixXd last_iterate = {})
        : Error(msg),
          iterations(iterations),
          last_delta(last_delta),
          last_iterate(std::move(last_iterate)) {}

    int iterations;
    double last_delta;
    Eigen::MatrixXd last_iterate;  ///< best available estimate, for diagnosis
};

/// A least-squares or linear solve is rank deficient (or fully degenerate).
class RankDeficiencyError : public Error {
public:
    explicit RankDeficiencyError(const std::string& msg) : Error(msg) {}
};

/// A kernel block that must be inverted for gain extraction is singular.
class ExtractionError : public Error {
public:
    explicit ExtractionError(const std::string& msg) : Error(msg) {}
};

/// A simulated state or an iterate left the representable regime.
class DivergenceError : public Error {
public:
    explicit DivergenceError(const std::string& msg) : Error(msg) {}
};

}  // namespace lqt

#endif  // LQT_ERRORS_HPP
