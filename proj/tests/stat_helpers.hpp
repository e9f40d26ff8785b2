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

#ifndef GBBM_TESTS_STAT_HELPERS_HPP
#define GBBM_TESTS_STAT_HELPERS_HPP

#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "gbbm/datasets.hpp"

namespace gbbm::testing {

/// Pearson chi-square p-value of observed counts against expected
/// probabilities; cells with expected count below 5 are pooled into one.
inline double chi_square_p_value(const std::vector<long>& counts,
                                 const std::vector<double>& probabilities, long n) {
    double statistic = 0.0;
    int cells = 0;
    double pooled_expected = 0.0;
    long pooled_observed = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const double expected = probabilities[i] * static_cast<double>(n);
        if (expected < 5.0) {
            pooled_expected += expected;
            pooled_observed += counts[i];
            continue;
        }
        const double diff = static_cast<double>(counts[i]) - expected;
        statistic += diff * diff / expected;
        ++cells;
    }
    if (pooled_expected > 0.0) {
        const double diff = static_cast<double>(pooled_observed) - pooled_expected;
        statistic += diff * diff / pooled_expected;
        ++cells;
    }
    if (cells < 2) {
        return 1.0;
    }
    const boost::math::chi_squared dist(cells - 1);
    return boost::math::cdf(boost::math::complement(dist, statistic));
}

/// Outcome histogram of a dataset with width <= 20 (bit i = mode i).
inline std::vector<long> outcome_counts(const BitDataset& dataset) {
    std::vector<long> counts(std::size_t{1} << dataset.width(), 0);
    for (long row = 0; row < dataset.rows(); ++row) {
        ++counts[dataset.word(row, 0)];
    }
    return counts;
}

}  // namespace gbbm::testing

#endif
