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

#ifndef GBBM_OBSERVABLES_HPP
#define GBBM_OBSERVABLES_HPP

#include <vector>

#include "gbbm/datasets.hpp"
#include "gbbm/gaussian.hpp"
#include "gbbm/rng.hpp"

namespace gbbm {

enum class DetectionKind { Parity, Threshold };

/// Operator string O_A: a sorted mode subset with a detection kind. The
/// empty string is the identity and has expectation 1.
struct OperatorString {
    std::vector<int> modes;
    DetectionKind kind = DetectionKind::Parity;
};

/// Threshold strings longer than this are rejected by default; the training
/// loop resamples them.
inline constexpr int kDefaultLocalityCutoff = 7;

/// Per-mode inclusion probability p_sigma = (1 - e^{-1/(2 sigma)}) / 2 of
/// the kernel-induced subset distribution.
double subset_probability(double sigma);

/// Kernel bandwidths together with their subset probabilities. Every
/// bandwidth must be positive; the induced probabilities sit in (0, 1/2).
struct KernelConfig {
    std::vector<double> bandwidths;

    static KernelConfig validated(std::vector<double> bandwidths);
    std::vector<double> subset_probabilities() const;
};

/// Draws a subset with each mode included independently with probability
/// p_sigma; returned indices are sorted.
std::vector<int> sample_subset(double sigma, int d, RngEngine& rng);

/// Closed-form parity expectation exp(-mu_A^T Sigma_A^{-1} mu_A) /
/// sqrt(det Sigma_A), evaluated in the log domain through a Cholesky
/// factorization; O(|A|^3).
double parity_expval(const GaussianState& state, const std::vector<int>& modes);

/// Threshold expectation by inclusion-exclusion over vacuum overlaps of the
/// Husimi-reduced state; O(|A|^3 2^{|A|}). Throws LocalityCutoffError when
/// |A| exceeds the cutoff.
double threshold_expval(const GaussianState& state, const std::vector<int>& modes,
                        int locality_cutoff = kDefaultLocalityCutoff);

double string_expval(const GaussianState& state, const OperatorString& op,
                     int locality_cutoff = kDefaultLocalityCutoff);

/// Sample mean of (-1)^{|x_A|}; exact integer accumulation, so the result
/// is independent of row order. Serves both detection kinds.
double empirical_expval(const BitDataset& dataset, const std::vector<int>& modes);

/// First and second moments of the coarse-grained bit distribution of a
/// state, from single- and two-mode string expectations.
struct BitMoments {
    Vector mean;           // E[x_i]
    Matrix second_moment;  // E[x_i x_j], diagonal E[x_i]
    Matrix covariance;     // E[x_i x_j] - E[x_i] E[x_j]
};

BitMoments bit_moments(const GaussianState& state, DetectionKind kind,
                       int locality_cutoff = kDefaultLocalityCutoff);

}  // namespace gbbm

#endif
