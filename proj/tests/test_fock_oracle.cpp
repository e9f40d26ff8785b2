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

// Self-checks of the Fock oracle against textbook closed forms, so the
// oracle itself is trustworthy before it judges the phase-space engine.

#include <cmath>

#include <doctest.h>

#include "fock_oracle.hpp"

using gbbm::testing::FockOracle;

TEST_SUITE_BEGIN("fock_oracle");

TEST_CASE("coherent state statistics match closed forms") {
    const double alpha = 0.5;
    FockOracle oracle(1, 24);
    oracle.displacement(alpha, 0);
    CHECK(oracle.truncation_tail() < 1e-10);

    const double nbar = alpha * alpha;
    CHECK(oracle.parity({0}) == doctest::Approx(std::exp(-2.0 * nbar)).epsilon(1e-9));
    CHECK(oracle.vacuum_probability({0}) == doctest::Approx(std::exp(-nbar)).epsilon(1e-9));
    CHECK(oracle.threshold({0}) ==
          doctest::Approx(2.0 * std::exp(-nbar) - 1.0).epsilon(1e-9));
}

TEST_CASE("squeezed vacuum has even photon content and 1/cosh(r) overlap") {
    const double r = 0.55;
    FockOracle oracle(1, 28);
    oracle.squeezer(r, 0);
    CHECK(oracle.truncation_tail() < 1e-10);
    CHECK(oracle.parity({0}) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(oracle.vacuum_probability({0}) ==
          doctest::Approx(1.0 / std::cosh(r)).epsilon(1e-9));
    CHECK(oracle.threshold({0}) ==
          doctest::Approx(2.0 / std::cosh(r) - 1.0).epsilon(1e-9));
}

TEST_CASE("phase shifter leaves photon statistics alone") {
    FockOracle oracle(1, 20);
    oracle.displacement(0.4, 0);
    const double before = oracle.parity({0});
    oracle.phase_shifter(1.234, 0);
    CHECK(oracle.parity({0}) == doctest::Approx(before).epsilon(1e-12));
    CHECK(oracle.truncation_tail() < 1e-10);
}

TEST_CASE("beamsplitter conserves total photon parity") {
    FockOracle oracle(2, 18);
    oracle.displacement(0.5, 0);
    oracle.squeezer(0.3, 1);
    const double before = oracle.parity({0, 1});
    oracle.beamsplitter(0.77, 0.31, 0, 1);
    CHECK(oracle.parity({0, 1}) == doctest::Approx(before).epsilon(1e-10));
    CHECK(oracle.truncation_tail() < 1e-9);
}

TEST_CASE("displacement inverts cleanly") {
    FockOracle oracle(1, 24);
    oracle.displacement(0.6, 0);
    oracle.displacement(-0.6, 0);
    CHECK(oracle.vacuum_probability({0}) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("outcome tables are normalized distributions") {
    FockOracle oracle(2, 18);
    oracle.squeezer(0.4, 0);
    oracle.beamsplitter(0.9, 0.2, 0, 1);
    for (const auto kind : {gbbm::DetectionKind::Parity, gbbm::DetectionKind::Threshold}) {
        const std::vector<double> probs = oracle.outcome_probs(kind);
        double total = 0.0;
        for (double p : probs) {
            CHECK(p >= 0.0);
            total += p;
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_SUITE_END();
