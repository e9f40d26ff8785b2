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

#ifndef GBBM_SAMPLER_HPP
#define GBBM_SAMPLER_HPP

#include <vector>

#include "gbbm/datasets.hpp"
#include "gbbm/gaussian.hpp"
#include "gbbm/observables.hpp"
#include "gbbm/rng.hpp"

namespace gbbm {

/// Exact tables hold 2^d entries; this caps d (roughly 10^6 entries).
inline constexpr int kDefaultSamplerModeLimit = 20;

/// Full joint outcome distribution, indexed by bitstring with mode i at
/// bit i. Entries are clipped to zero within -1e-12; anything more negative
/// raises NumericalConsistencyError.
struct OutcomeTable {
    int modes = 0;
    DetectionKind kind = DetectionKind::Parity;
    std::vector<double> probabilities;  // length 2^modes
};

/// Vacuum-detection probability on the given modes, p0({}) = 1.
double vacuum_probability(const GaussianState& state, const std::vector<int>& modes);

/// All parity-detection outcome probabilities: subset parities via the
/// closed form, then a scaled fast Walsh-Hadamard transform.
OutcomeTable parity_probs(const GaussianState& state,
                          int mode_limit = kDefaultSamplerModeLimit);

/// All threshold-detection outcome probabilities by inclusion-exclusion
/// over vacuum overlaps.
OutcomeTable threshold_probs(const GaussianState& state,
                             int mode_limit = kDefaultSamplerModeLimit);

/// Exact mode-by-mode chain sampling of parity detection; subset parities
/// are cached across samples.
BitDataset sample_parity(const GaussianState& state, long n_samples, RngEngine& rng,
                         int mode_limit = kDefaultSamplerModeLimit);

/// Exact mode-by-mode chain sampling of threshold detection with memoized
/// vacuum overlaps.
BitDataset sample_threshold(const GaussianState& state, long n_samples, RngEngine& rng,
                            int mode_limit = kDefaultSamplerModeLimit);

}  // namespace gbbm

#endif
