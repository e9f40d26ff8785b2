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

#include "gbbm/sampler.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "gbbm/detail/walsh_hadamard.hpp"
#include "gbbm/errors.hpp"

namespace gbbm {

namespace {

constexpr double kNegativeTolerance = 1e-12;

void check_mode_limit(const GaussianState& state, int mode_limit, const char* who) {
    if (state.modes > mode_limit) {
        throw ResourceLimitError(std::string(who) + ": " + std::to_string(state.modes) +
                                 " modes exceeds the exact-sampler limit of " +
                                 std::to_string(mode_limit));
    }
}

std::vector<int> modes_from_mask(std::uint32_t mask) {
    std::vector<int> modes;
    while (mask != 0) {
        const int i = std::countr_zero(mask);
        modes.push_back(i);
        mask &= mask - 1;
    }
    return modes;
}

/// Memoized per-subset statistics keyed by mode bitmask.
class SubsetCache {
public:
    SubsetCache(const GaussianState& state, double (*fn)(const GaussianState&,
                                                         const std::vector<int>&))
        : state_(state),
          fn_(fn),
          values_(std::size_t{1} << state.modes,
                  std::numeric_limits<double>::quiet_NaN()) {
        values_[0] = 1.0;
    }

    double operator()(std::uint32_t mask) {
        double& slot = values_[mask];
        if (std::isnan(slot)) {
            slot = fn_(state_, modes_from_mask(mask));
        }
        return slot;
    }

private:
    const GaussianState& state_;
    double (*fn_)(const GaussianState&, const std::vector<int>&);
    std::vector<double> values_;
};

double parity_fn(const GaussianState& state, const std::vector<int>& modes) {
    return parity_expval(state, modes);
}

double clip_probability(double p, const char* who) {
    if (p < -kNegativeTolerance) {
        throw NumericalConsistencyError(std::string(who) + ": probability " +
                                        std::to_string(p) +
                                        " is negative beyond the cancellation tolerance");
    }
    return std::max(p, 0.0);
}

}  // namespace

double vacuum_probability(const GaussianState& state, const std::vector<int>& modes) {
    if (modes.empty()) {
        return 1.0;
    }
    const GaussianState red = reduce(state, modes);
    const Matrix q = husimi(red);
    Eigen::LLT<Matrix> llt(q);
    if (llt.info() != Eigen::Success) {
        throw StateInvalidError("vacuum_probability: Husimi matrix not positive definite");
    }
    const double quad = red.mean.dot(llt.solve(red.mean));
    const double logdet = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
    return std::exp(-0.5 * quad - 0.5 * logdet);
}

OutcomeTable parity_probs(const GaussianState& state, int mode_limit) {
    check_mode_limit(state, mode_limit, "parity_probs");
    const int d = state.modes;
    OutcomeTable table;
    table.modes = d;
    table.kind = DetectionKind::Parity;
    table.probabilities.resize(std::size_t{1} << d);
    for (std::uint32_t mask = 0; mask < table.probabilities.size(); ++mask) {
        table.probabilities[mask] = parity_expval(state, modes_from_mask(mask));
    }
    detail::fwht_in_place(table.probabilities);
    const double scale = std::ldexp(1.0, -d);
    for (double& p : table.probabilities) {
        p = clip_probability(p * scale, "parity_probs");
    }
    return table;
}

OutcomeTable threshold_probs(const GaussianState& state, int mode_limit) {
    check_mode_limit(state, mode_limit, "threshold_probs");
    const int d = state.modes;
    SubsetCache p0(state, vacuum_probability);
    OutcomeTable table;
    table.modes = d;
    table.kind = DetectionKind::Threshold;
    table.probabilities.resize(std::size_t{1} << d);
    const std::uint32_t full = static_cast<std::uint32_t>(table.probabilities.size() - 1);
    for (std::uint32_t x = 0; x < table.probabilities.size(); ++x) {
        const std::uint32_t clicks = x;
        const std::uint32_t zeros = full & ~x;
        double p = 0.0;
        // Inclusion-exclusion over which click modes also read vacuum.
        std::uint32_t s = clicks;
        for (;;) {
            const double sign = (std::popcount(s) % 2 == 0) ? 1.0 : -1.0;
            p += sign * p0(zeros | s);
            if (s == 0) {
                break;
            }
            s = (s - 1) & clicks;
        }
        table.probabilities[x] = clip_probability(p, "threshold_probs");
    }
    return table;
}

BitDataset sample_parity(const GaussianState& state, long n_samples, RngEngine& rng,
                         int mode_limit) {
    check_mode_limit(state, mode_limit, "sample_parity");
    const int d = state.modes;
    SubsetCache parity(state, parity_fn);
    BitDataset dataset(d);
    for (long sample = 0; sample < n_samples; ++sample) {
        double prefix_mass = 1.0;
        std::uint32_t outcome = 0;
        const long row = dataset.append_row();
        for (int n = 1; n <= d; ++n) {
            // Marginal over the first n modes with x_n = 0:
            // 2^{-n} sum_{S subset [n]} (-1)^{|x_S|} <Pi_S>.
            double sum = 0.0;
            for (std::uint32_t s = 0; s < (std::uint32_t{1} << n); ++s) {
                const double sign = (std::popcount(s & outcome) % 2 == 0) ? 1.0 : -1.0;
                sum += sign * parity(s);
            }
            const double p_zero = std::ldexp(sum, -n);
            double conditional = prefix_mass > 0.0 ? p_zero / prefix_mass : 1.0;
            conditional = std::clamp(conditional, 0.0, 1.0);
            if (uniform_double(rng) < conditional) {
                prefix_mass = p_zero;
            } else {
                outcome |= std::uint32_t{1} << (n - 1);
                dataset.set(row, n - 1, true);
                prefix_mass -= p_zero;
            }
        }
    }
    return dataset;
}

BitDataset sample_threshold(const GaussianState& state, long n_samples, RngEngine& rng,
                            int mode_limit) {
    check_mode_limit(state, mode_limit, "sample_threshold");
    const int d = state.modes;
    SubsetCache p0(state, vacuum_probability);
    BitDataset dataset(d);
    for (long sample = 0; sample < n_samples; ++sample) {
        double prefix_mass = 1.0;
        std::uint32_t clicks = 0;
        const long row = dataset.append_row();
        std::uint32_t zeros = 0;
        for (int n = 1; n <= d; ++n) {
            const std::uint32_t mode_bit = std::uint32_t{1} << (n - 1);
            // Marginal of the prefix extended by a no-click on mode n.
            double p_zero = 0.0;
            std::uint32_t s = clicks;
            for (;;) {
                const double sign = (std::popcount(s) % 2 == 0) ? 1.0 : -1.0;
                p_zero += sign * p0(zeros | mode_bit | s);
                if (s == 0) {
                    break;
                }
                s = (s - 1) & clicks;
            }
            double conditional = prefix_mass > 0.0 ? p_zero / prefix_mass : 1.0;
            conditional = std::clamp(conditional, 0.0, 1.0);
            if (uniform_double(rng) < conditional) {
                zeros |= mode_bit;
                prefix_mass = p_zero;
            } else {
                clicks |= mode_bit;
                dataset.set(row, n - 1, true);
                prefix_mass -= p_zero;
            }
        }
    }
    return dataset;
}

}  // namespace gbbm
