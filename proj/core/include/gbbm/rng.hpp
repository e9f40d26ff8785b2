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

#ifndef GBBM_RNG_HPP
#define GBBM_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>

namespace gbbm {

// All randomness flows through mt19937_64 plus the stateless helpers below,
// so a serialized engine state is enough to resume any run bit-exactly.
// (std::normal_distribution and friends carry hidden state and are avoided.)
using RngEngine = std::mt19937_64;

inline RngEngine seeded_rng(std::uint64_t seed) { return RngEngine(seed); }

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform_double(RngEngine& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform double in [0, 2*pi).
inline double uniform_angle(RngEngine& rng) {
    return uniform_double(rng) * 6.283185307179586476925286766559;
}

/// Uniform integer in [0, n) via rejection (unbiased).
inline std::uint64_t uniform_index(RngEngine& rng, std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

/// One normal draw by Box-Muller; consumes exactly two engine outputs.
inline double normal_sample(RngEngine& rng, double mean = 0.0, double sd = 1.0) {
    // u1 in (0, 1] so the log is finite.
    const double u1 = 1.0 - uniform_double(rng);
    const double u2 = uniform_double(rng);
    const double z = std::sqrt(-2.0 * std::log(u1)) *
                     std::cos(6.283185307179586476925286766559 * u2);
    return mean + sd * z;
}

inline bool bernoulli(RngEngine& rng, double p) { return uniform_double(rng) < p; }

inline std::string serialize_rng(const RngEngine& rng) {
    std::ostringstream out;
    out << rng;
    return out.str();
}

inline RngEngine deserialize_rng(const std::string& text) {
    RngEngine rng;
    std::istringstream in(text);
    in >> rng;
    return rng;
}

}  // namespace gbbm

#endif
