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

// Shared JSON helpers for checkpoint/config serialization. Internal.

#ifndef GBBM_SRC_JSON_UTIL_HPP
#define GBBM_SRC_JSON_UTIL_HPP

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

#include "gbbm/ansatz.hpp"
#include "gbbm/observables.hpp"

namespace gbbm::detail {

using Json = nlohmann::json;

Json spec_to_json(const CircuitSpec& spec);
CircuitSpec spec_from_json(const Json& j);

std::string kind_to_string(DetectionKind kind);
DetectionKind kind_from_string(const std::string& name);

/// FNV-1a over the canonical dump; stable provenance tag for output files.
std::string fnv1a_hex(const std::string& text);

}  // namespace gbbm::detail

#endif
