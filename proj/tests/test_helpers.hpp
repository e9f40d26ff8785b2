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

#ifndef GBBM_TESTS_TEST_HELPERS_HPP
#define GBBM_TESTS_TEST_HELPERS_HPP

#include <filesystem>
#include <string>

#include "gbbm/ansatz.hpp"
#include "gbbm/gaussian.hpp"
#include "gbbm/rng.hpp"

namespace gbbm::testing {

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

inline double max_abs_diff(const Vector& a, const Vector& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

/// Random parameters with squeezing/displacement amplitudes bounded by
/// `amplitude` (angles stay uniform), keeping Fock-oracle cutoffs small.
inline ModelParams bounded_random_params(const CircuitSpec& spec, double amplitude,
                                         RngEngine& rng) {
    const LayerBlockLayout layout = layer_layout(spec);
    ModelParams params;
    params.values.resize(total_param_count(spec));
    for (int k = 0; k < spec.layers; ++k) {
        const long base = k * layout.per_layer;
        for (long i = 0; i < layout.d; ++i) {
            params.values[base + layout.alpha_offset + i] =
                amplitude * (2.0 * uniform_double(rng) - 1.0);
            params.values[base + layout.r_offset + i] =
                amplitude * (2.0 * uniform_double(rng) - 1.0);
        }
        for (long i = 0; i < layout.interferometer_size; ++i) {
            params.values[base + layout.theta1_offset + i] = uniform_angle(rng);
            params.values[base + layout.theta2_offset + i] = uniform_angle(rng);
        }
    }
    return params;
}

/// A generic pure Gaussian state from a random two-layer Clements circuit.
inline GaussianState random_state(int d, double amplitude, RngEngine& rng) {
    const CircuitSpec spec = CircuitSpec::clements(d, 2);
    return forward(spec, bounded_random_params(spec, amplitude, rng));
}

/// Unique scratch directory under the system temp dir; removed on demand by
/// the caller (tests leave it for post-mortem unless they clean up).
inline std::filesystem::path scratch_dir(const std::string& tag) {
    auto path = std::filesystem::temp_directory_path() /
                ("gbbm_test_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::create_directories(path);
    return path;
}

}  // namespace gbbm::testing

#endif
