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

#ifndef GBBM_CHECKPOINT_HPP
#define GBBM_CHECKPOINT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "gbbm/ansatz.hpp"
#include "gbbm/observables.hpp"
#include "gbbm/training.hpp"

namespace gbbm {

/// Versioned binary container: a JSON header (spec, episode, rng state)
/// followed by little-endian 64-bit floats for the parameters and optimizer
/// moments. Round-trips bit-exactly.
struct Checkpoint {
    std::uint32_t version = 1;
    CircuitSpec spec;
    DetectionKind kind = DetectionKind::Parity;
    std::vector<double> bandwidths;
    ModelParams params;
    AdamState opt;
    std::string rng_state;
    long episode = 0;
    std::string config_hash;
};

void save_checkpoint(const Checkpoint& checkpoint, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

/// Human-readable one-screen summary (used by the `inspect` subcommand).
std::string describe_checkpoint(const Checkpoint& checkpoint);

}  // namespace gbbm

#endif
