/*
 * Copyright 2026 The gbbm Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef GBBM_ERRORS_HPP
#define GBBM_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gbbm {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller-supplied argument violates a precondition.
class InvalidArgumentError : public Error {
public:
    using Error::Error;
};

/// A Gaussian state failed a numerical validity check (e.g. the reduced
/// covariance is not positive definite).
class StateInvalidError : public Error {
public:
    using Error::Error;
};

/// An operator string exceeds the configured locality cutoff.
class LocalityCutoffError : public Error {
public:
    using Error::Error;
};

/// A request exceeds a configured resource limit (e.g. sampler mode count).
class ResourceLimitError : public Error {
public:
    using Error::Error;
};

/// A numerical result is inconsistent beyond tolerated floating-point noise
/// (e.g. a probability more negative than the cancellation tolerance).
class NumericalConsistencyError : public Error {
public:
    using Error::Error;
};

/// Training produced a non-finite loss or gradient.
class TrainingDivergedError : public Error {
public:
    using Error::Error;
};

/// A dataset has no pairwise spread, so the median heuristic is undefined.
class ZeroDistanceError : public Error {
public:
    using Error::Error;
};

/// A text input failed to parse; carries the 1-based offending line.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// An experiment configuration is malformed or internally inconsistent.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace gbbm

#endif
