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
#include <set>

#include <doctest.h>

#include "gbbm/ansatz.hpp"
#include "gbbm/errors.hpp"
#include "test_helpers.hpp"

using namespace gbbm;
using gbbm::testing::max_abs_diff;

TEST_SUITE_BEGIN("ansatz");

TEST_CASE("layer parameter count goldens") {
    CHECK(layer_param_count(CircuitSpec::clements(108, 1)) == 23544);
    CHECK(total_param_count(CircuitSpec::clements(805, 1)) == 1297660);

    // Tree graph with 107 edges at d=108.
    std::vector<Edge> tree;
    for (int i = 1; i < 108; ++i) {
        tree.push_back({i - 1, i});
    }
    CHECK(layer_param_count(CircuitSpec::graph(108, 1, tree)) == 860);

    // Complete graph at d=256 over three layers.
    const CircuitSpec complete =
        CircuitSpec::graph(256, 3, complete_graph_edges(256, 9));
    CHECK(layer_param_count(complete) == 131584);
    CHECK(total_param_count(complete) == 394752);
}

TEST_CASE("parameter count formula matches the gates actually placed") {
    RngEngine rng = seeded_rng(5);
    for (int d = 2; d <= 64; ++d) {
        const CircuitSpec spec = CircuitSpec::clements(d, 1);
        const long units = static_cast<long>(interferometer_units(spec).size());
        CHECK(units == static_cast<long>(d) * (d - 1) / 2);
        CHECK(layer_param_count(spec) == 2 * d + 2 * (2 * units + d));
        CHECK(layer_param_count(spec) == 2L * d * d + 2 * d);

        const CircuitSpec graph = CircuitSpec::graph(d, 1, complete_graph_edges(d, rng()));
        const long edges = static_cast<long>(interferometer_units(graph).size());
        CHECK(layer_param_count(graph) == 2 * d + 2 * (2 * edges + d));
    }
}

TEST_CASE("complete graph edges cover every pair in a seeded order") {
    const std::vector<Edge> edges = complete_graph_edges(6, 123);
    CHECK(edges.size() == 15);
    std::set<std::pair<int, int>> seen;
    for (const Edge& e : edges) {
        seen.insert({std::min(e.a, e.b), std::max(e.a, e.b)});
    }
    CHECK(seen.size() == 15);
    CHECK(complete_graph_edges(6, 123) == edges);      // reproducible
    CHECK(complete_graph_edges(6, 124) != edges);      // seed-sensitive
}

TEST_CASE("init_params is deterministic with the stated distributions") {
    const CircuitSpec spec = CircuitSpec::clements(6, 2);
    const ModelParams a = init_params(spec, 99);
    const ModelParams b = init_params(spec, 99);
    CHECK(a.values == b.values);
    CHECK(init_params(spec, 100).values != a.values);

    const LayerBlockLayout layout = layer_layout(spec);
    for (int k = 0; k < spec.layers; ++k) {
        const long base = k * layout.per_layer;
        for (long i = 0; i < layout.interferometer_size; ++i) {
            const double angle1 = a.values[base + layout.theta1_offset + i];
            const double angle2 = a.values[base + layout.theta2_offset + i];
            CHECK(angle1 >= 0.0);
            CHECK(angle1 < 2.0 * M_PI);
            CHECK(angle2 >= 0.0);
            CHECK(angle2 < 2.0 * M_PI);
        }
    }

    // Empirical sd of 1e5 squeezing amplitudes; a no-edge graph layout makes
    // the r block dominate so the draw count stays manageable.
    const CircuitSpec thin = CircuitSpec::graph(1000, 25, {});
    const LayerBlockLayout thin_layout = layer_layout(thin);
    double sum = 0.0, sum_sq = 0.0;
    long count = 0;
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const ModelParams params = init_params(thin, seed);
        for (int k = 0; k < thin.layers; ++k) {
            const long base = k * thin_layout.per_layer;
            for (long i = 0; i < thin_layout.d; ++i) {
                const double r = params.values[base + thin_layout.r_offset + i];
                sum += r;
                sum_sq += r * r;
                ++count;
            }
        }
    }
    CHECK(count == 100000);
    const double mean = sum / static_cast<double>(count);
    const double sd = std::sqrt(sum_sq / static_cast<double>(count) - mean * mean);
    CHECK(sd >= 0.095);
    CHECK(sd <= 0.105);
}

TEST_CASE("zero parameters give the identity layer and vacuum output") {
    for (const CircuitSpec& spec :
         {CircuitSpec::clements(4, 2), CircuitSpec::graph(4, 2, complete_graph_edges(4, 3))}) {
        ModelParams zero;
        zero.values = Vector::Zero(total_param_count(spec));
        const AffineSymplectic layer =
            layer_to_affine(spec, zero.values.head(layer_param_count(spec)));
        CHECK(max_abs_diff(layer.linear, Matrix::Identity(8, 8)) < 1e-14);
        CHECK(layer.shift.isZero(0.0));

        const GaussianState out = forward(spec, zero);
        CHECK(out.mean.isZero(0.0));
        CHECK(max_abs_diff(out.covariance, Matrix::Identity(8, 8)) < 1e-14);
    }
}

TEST_CASE("single-mode layer reduces to rotated squeezed vacuum") {
    const CircuitSpec spec = CircuitSpec::clements(1, 1);
    CHECK(layer_param_count(spec) == 4);  // alpha, gamma1, r, gamma2
    ModelParams params;
    params.values.resize(4);
    const double alpha = 0.31, gamma1 = 0.77, r = 0.42, gamma2 = 1.23;
    const LayerBlockLayout layout = layer_layout(spec);
    params.values[layout.alpha_offset] = alpha;
    params.values[layout.theta1_offset] = gamma1;
    params.values[layout.r_offset] = r;
    params.values[layout.theta2_offset] = gamma2;

    const GaussianState out = forward(spec, params);

    // 2x2 algebra done independently: the first phase acts on vacuum
    // trivially, so sigma = R diag(e^{-2r}, e^{2r}) R^T with R the phase
    // shifter image, and mu = (sqrt(2) alpha, 0).
    const Matrix rot = phase_shifter(gamma2, 0, 1).linear;
    Matrix diag = Matrix::Zero(2, 2);
    diag(0, 0) = std::exp(-2.0 * r);
    diag(1, 1) = std::exp(2.0 * r);
    CHECK(max_abs_diff(out.covariance, rot * diag * rot.transpose()) < 1e-12);
    CHECK(out.mean[0] == doctest::Approx(std::sqrt(2.0) * alpha));
    CHECK(out.mean[1] == doctest::Approx(0.0));
}

TEST_CASE("identity interferometers leave squeeze and displacement blocks") {
    const CircuitSpec spec = CircuitSpec::clements(3, 1);
    const LayerBlockLayout layout = layer_layout(spec);
    ModelParams params;
    params.values = Vector::Zero(total_param_count(spec));
    Vector r(3), alpha(3);
    r << 0.2, -0.4, 0.1;
    alpha << 0.5, 0.0, -0.3;
    for (int i = 0; i < 3; ++i) {
        params.values[layout.alpha_offset + i] = alpha[i];
        params.values[layout.r_offset + i] = r[i];
    }
    const GaussianState out = forward(spec, params);
    for (int i = 0; i < 3; ++i) {
        CHECK(out.covariance(i, i) == doctest::Approx(std::exp(-2.0 * r[i])));
        CHECK(out.covariance(i + 3, i + 3) == doctest::Approx(std::exp(2.0 * r[i])));
        CHECK(out.mean[i] == doctest::Approx(std::sqrt(2.0) * alpha[i]));
        CHECK(out.mean[i + 3] == doctest::Approx(0.0));
    }
}

TEST_CASE("interferometer unitary is unitary and symplectic image checks out") {
    RngEngine rng = seeded_rng(77);
    for (const CircuitSpec& spec :
         {CircuitSpec::clements(5, 1), CircuitSpec::graph(5, 1, complete_graph_edges(5, 2))}) {
        const LayerBlockLayout layout = layer_layout(spec);
        Vector block(layout.interferometer_size);
        for (long i = 0; i < block.size(); ++i) {
            block[i] = uniform_angle(rng);
        }
        const ComplexMatrix u = interferometer_unitary(spec, block);
        CHECK((u.adjoint() * u - ComplexMatrix::Identity(5, 5)).cwiseAbs().maxCoeff() <
              1e-12);
        CHECK(symplectic_defect(interferometer_symplectic(u)) <= 1e-10);
    }
}

TEST_CASE("forward equals the composed layer affines") {
    RngEngine rng = seeded_rng(88);
    const CircuitSpec spec = CircuitSpec::clements(4, 2);
    const ModelParams params = gbbm::testing::bounded_random_params(spec, 0.5, rng);
    const long per_layer = layer_param_count(spec);

    const AffineSymplectic layer1 = layer_to_affine(spec, params.values.head(per_layer));
    const AffineSymplectic layer2 = layer_to_affine(spec, params.values.tail(per_layer));
    const GaussianState expected =
        apply(GaussianState::vacuum(4), compose(layer2, layer1));
    const GaussianState actual = forward(spec, params);
    CHECK(max_abs_diff(actual.covariance, expected.covariance) < 1e-11);
    CHECK(max_abs_diff(actual.mean, expected.mean) < 1e-12);

    CHECK(std::abs(actual.covariance.determinant() - 1.0) <= 1e-9);

    // Determinism.
    const GaussianState again = forward(spec, params);
    CHECK(max_abs_diff(again.covariance, actual.covariance) == 0.0);
}

TEST_CASE("parameter size mismatches are rejected") {
    const CircuitSpec spec = CircuitSpec::clements(3, 2);
    ModelParams bad;
    bad.values = Vector::Zero(layer_param_count(spec));  // one layer only
    CHECK_THROWS_AS(forward(spec, bad), InvalidArgumentError);
    CHECK_THROWS_AS(layer_to_affine(spec, bad.values.head(5)), InvalidArgumentError);
    CHECK_THROWS_AS(CircuitSpec::graph(3, 1, {{0, 3}}), InvalidArgumentError);
    CHECK_THROWS_AS(CircuitSpec::graph(3, 1, {{1, 1}}), InvalidArgumentError);
    CHECK_THROWS_AS(CircuitSpec::clements(0, 1), InvalidArgumentError);
}

TEST_SUITE_END();
