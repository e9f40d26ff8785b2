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

#include <cmath>

#include <doctest.h>

#include "fock_oracle.hpp"
#include "gbbm/errors.hpp"
#include "gbbm/observables.hpp"
#include "gbbm/sampler.hpp"
#include "test_helpers.hpp"

using namespace gbbm;
using gbbm::testing::FockOracle;

namespace {

BitDataset from_rows(const std::vector<std::vector<std::uint8_t>>& rows) {
    BitDataset dataset(static_cast<int>(rows.front().size()));
    for (const auto& row : rows) {
        dataset.append_row(row);
    }
    return dataset;
}

}  // namespace

TEST_SUITE_BEGIN("observables");

TEST_CASE("subset probability follows the kernel formula") {
    CHECK(subset_probability(0.5) == doctest::Approx((1.0 - std::exp(-1.0)) / 2.0));
    CHECK(subset_probability(0.5) == doctest::Approx(0.31606).epsilon(1e-4));
    CHECK_THROWS_AS(subset_probability(0.0), InvalidArgumentError);
    CHECK_THROWS_AS(subset_probability(-1.0), InvalidArgumentError);
    // 0 < p < 1/2 for every finite positive sigma.
    const KernelConfig config = KernelConfig::validated({0.05, 0.1, 1.0, 100.0});
    for (double p : config.subset_probabilities()) {
        CHECK(p > 0.0);
        CHECK(p < 0.5);
    }
    CHECK_THROWS_AS(KernelConfig::validated({1.0, -2.0}), InvalidArgumentError);
    CHECK_THROWS_AS(KernelConfig::validated({}), InvalidArgumentError);
}

TEST_CASE("subset sampling matches its binomial law") {
    RngEngine rng = seeded_rng(7);

    // Huge sigma: inclusion probability ~ 1/(4 sigma), so draws are empty.
    for (int i = 0; i < 100; ++i) {
        CHECK(sample_subset(1e12, 12, rng).empty());
    }

    const double sigma = 0.5;
    const int d = 10;
    const double p = subset_probability(sigma);
    long total = 0;
    const long draws = 100000;
    for (long i = 0; i < draws; ++i) {
        total += static_cast<long>(sample_subset(sigma, d, rng).size());
    }
    const double mean = static_cast<double>(total) / static_cast<double>(draws);
    const double se = std::sqrt(d * p * (1.0 - p) / static_cast<double>(draws));
    CHECK(std::abs(mean - d * p) <= 3.0 * se);
}

TEST_CASE("parity expectation closed form against the Fock oracle") {
    const GaussianState vacuum = GaussianState::vacuum(3);
    CHECK(parity_expval(vacuum, {0}) == 1.0);
    CHECK(parity_expval(vacuum, {0, 2}) == 1.0);
    CHECK(parity_expval(vacuum, {}) == 1.0);

    // Coherent state, alpha = 0.5.
    Vector alpha(1);
    alpha << 0.5;
    const GaussianState coherent = apply(GaussianState::vacuum(1), displacement(alpha));
    CHECK(parity_expval(coherent, {0}) == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
    FockOracle oracle(1, 24);
    oracle.displacement(0.5, 0);
    CHECK(oracle.truncation_tail() < 1e-10);
    CHECK(parity_expval(coherent, {0}) ==
          doctest::Approx(oracle.parity({0})).epsilon(1e-9));

    // Any pure centered state has unit parity over all modes.
    RngEngine rng = seeded_rng(3);
    const CircuitSpec spec = CircuitSpec::clements(2, 1);
    ModelParams params = gbbm::testing::bounded_random_params(spec, 0.5, rng);
    const LayerBlockLayout layout = layer_layout(spec);
    params.values.segment(layout.alpha_offset, 2).setZero();  // centered
    const GaussianState centered = forward(spec, params);
    CHECK(parity_expval(centered, {0, 1}) == doctest::Approx(1.0).epsilon(1e-9));
    FockOracle cross(2, 20);
    cross.apply_circuit(spec, params);
    CHECK(cross.truncation_tail() < 1e-8);
    CHECK(cross.parity({0, 1}) == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("parity expectation stays in (0, 1] and respects reduction") {
    RngEngine rng = seeded_rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        const GaussianState state = gbbm::testing::random_state(4, 0.7, rng);
        const std::vector<int> subset = sample_subset(0.6, 4, rng);
        const double value = parity_expval(state, subset);
        CHECK(value > 0.0);
        CHECK(value <= 1.0 + 1e-12);
        if (!subset.empty()) {
            std::vector<int> full(subset.size());
            for (std::size_t i = 0; i < subset.size(); ++i) {
                full[i] = static_cast<int>(i);
            }
            CHECK(parity_expval(reduce(state, subset), full) ==
                  doctest::Approx(value).epsilon(1e-12));
        }
    }
}

TEST_CASE("threshold expectation matches coherent and squeezed closed forms") {
    const GaussianState vacuum = GaussianState::vacuum(2);
    CHECK(threshold_expval(vacuum, {0}) == doctest::Approx(1.0));
    CHECK(threshold_expval(vacuum, {0, 1}) == doctest::Approx(1.0));

    // Coherent state with mean photon number 0.25.
    Vector alpha(1);
    alpha << 0.5;
    const GaussianState coherent = apply(GaussianState::vacuum(1), displacement(alpha));
    CHECK(threshold_expval(coherent, {0}) ==
          doctest::Approx(2.0 * std::exp(-0.25) - 1.0).epsilon(1e-12));
    CHECK(threshold_expval(coherent, {0}) == doctest::Approx(0.55760).epsilon(1e-4));

    // Squeezed vacuum: 2 / cosh(r) - 1, cross-checked against the Fock
    // overlap.
    const double r_val = 0.6;
    Vector r(1);
    r << r_val;
    const GaussianState squeezed = apply(GaussianState::vacuum(1), squeezer(r));
    CHECK(threshold_expval(squeezed, {0}) ==
          doctest::Approx(2.0 / std::cosh(r_val) - 1.0).epsilon(1e-12));
    FockOracle oracle(1, 28);
    oracle.squeezer(r_val, 0);
    CHECK(threshold_expval(squeezed, {0}) ==
          doctest::Approx(oracle.threshold({0})).epsilon(1e-9));

    CHECK_THROWS_AS(threshold_expval(GaussianState::vacuum(10),
                                     {0, 1, 2, 3, 4, 5, 6, 7}, 7),
                    LocalityCutoffError);
}

TEST_CASE("both kinds give unity on photonless modes") {
    // Photons live on mode 1 only; strings on mode 0 see vacuum.
    Vector alpha(2), r(2);
    alpha << 0.0, 0.6;
    r << 0.0, 0.4;
    GaussianState state = GaussianState::vacuum(2);
    apply_in_place(state, squeezer(r));
    apply_in_place(state, displacement(alpha));
    CHECK(parity_expval(state, {0}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(threshold_expval(state, {0}) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("both expectations agree with the Fock oracle on random circuits") {
    RngEngine rng = seeded_rng(2024);
    for (int trial = 0; trial < 6; ++trial) {
        const int d = 1 + static_cast<int>(uniform_index(rng, 3));
        const int layers = 1 + static_cast<int>(uniform_index(rng, 2));
        const CircuitSpec spec = CircuitSpec::clements(d, layers);
        const ModelParams params = gbbm::testing::bounded_random_params(spec, 0.6, rng);
        const GaussianState state = forward(spec, params);
        const FockOracle oracle = gbbm::testing::run_circuit_oracle(spec, params, 1e-8);

        for (std::uint32_t mask = 0; mask < (1U << d); ++mask) {
            std::vector<int> modes;
            for (int m = 0; m < d; ++m) {
                if (mask & (1U << m)) {
                    modes.push_back(m);
                }
            }
            CHECK(parity_expval(state, modes) ==
                  doctest::Approx(oracle.parity(modes)).epsilon(1e-6));
            CHECK(threshold_expval(state, modes) ==
                  doctest::Approx(oracle.threshold(modes)).epsilon(1e-6));
        }
    }
}

TEST_CASE("empirical expectation is the exact signed mean") {
    const BitDataset zeros = from_rows({{0, 0, 0}, {0, 0, 0}});
    CHECK(empirical_expval(zeros, {0, 1}) == 1.0);
    CHECK(empirical_expval(zeros, {}) == 1.0);

    const BitDataset single = from_rows({{1, 0}});
    CHECK(empirical_expval(single, {0}) == -1.0);

    const BitDataset pair = from_rows({{0, 0}, {1, 1}});
    CHECK(empirical_expval(pair, {0, 1}) == 1.0);
    CHECK(empirical_expval(pair, {0}) == 0.0);

    BitDataset empty(3);
    CHECK_THROWS_AS(empirical_expval(empty, {0}), InvalidArgumentError);
}

TEST_CASE("empirical estimates converge to model values at Hoeffding rate") {
    RngEngine rng = seeded_rng(31);
    const GaussianState state = gbbm::testing::random_state(4, 0.5, rng);
    const long n = 20000;
    const BitDataset samples = sample_parity(state, n, rng);
    // 4 sigma of the +-1 estimator.
    const double bound = 4.0 / std::sqrt(static_cast<double>(n));
    for (const std::vector<int>& modes :
         {std::vector<int>{0}, {1, 3}, {0, 1, 2}, {0, 1, 2, 3}}) {
        CHECK(std::abs(empirical_expval(samples, modes) - parity_expval(state, modes)) <=
              bound);
    }
}

TEST_CASE("bit moments from string expectations") {
    const BitMoments vac = bit_moments(GaussianState::vacuum(3), DetectionKind::Parity);
    CHECK(vac.mean.isZero(1e-14));
    CHECK(vac.covariance.isZero(1e-14));

    Vector alpha(1);
    alpha << 0.45;
    const GaussianState coherent = apply(GaussianState::vacuum(1), displacement(alpha));
    const BitMoments moments = bit_moments(coherent, DetectionKind::Parity);
    CHECK(moments.mean[0] ==
          doctest::Approx((1.0 - std::exp(-2.0 * 0.45 * 0.45)) / 2.0).epsilon(1e-12));

    CHECK_THROWS_AS(bit_moments(coherent, DetectionKind::Threshold, 1),
                    InvalidArgumentError);
}

TEST_CASE("bit covariance matches a large sampling run") {
    RngEngine rng = seeded_rng(1234);
    const GaussianState state = gbbm::testing::random_state(4, 0.5, rng);
    const BitMoments moments = bit_moments(state, DetectionKind::Parity);
    const long n = 1000000;
    const BitDataset samples = sample_parity(state, n, rng);
    const Matrix empirical = empirical_bit_covariance(samples);
    // Covariance entries are means of products of bounded variables; their
    // standard error is below 1/sqrt(n) up to a small constant.
    const double tolerance = 3.0 / std::sqrt(static_cast<double>(n));
    CHECK(gbbm::testing::max_abs_diff(moments.covariance, empirical) <= tolerance);
}

TEST_SUITE_END();
