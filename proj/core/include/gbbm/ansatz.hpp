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

#ifndef GBBM_ANSATZ_HPP
#define GBBM_ANSATZ_HPP

#include <cstdint>
#include <vector>

#include "gbbm/gaussian.hpp"

namespace gbbm {

enum class Layout { Clements, Graph };

struct Edge {
    int a = 0;
    int b = 0;
    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Ansatz layout: mode count, layer count and interferometer wiring.
/// For Graph layouts the edge order is significant (beamsplitters do not
/// commute) and is preserved exactly as given.
struct CircuitSpec {
    int modes = 0;
    int layers = 1;
    Layout layout = Layout::Clements;
    std::vector<Edge> edges;  // Graph layouts only, ordered

    static CircuitSpec clements(int d, int num_layers);
    static CircuitSpec graph(int d, int num_layers, std::vector<Edge> ordered_edges);

    friend bool operator==(const CircuitSpec&, const CircuitSpec&) = default;
};

/// All unordered pairs of [0, d), shuffled with the given seed. Used for
/// complete-graph layouts so the edge ordering is reproducible.
std::vector<Edge> complete_graph_edges(int d, std::uint64_t shuffle_seed);

/// Flat trainable parameter vector. Per layer the blocks are, in order:
///   alpha (d) | interferometer 1 | r (d) | interferometer 2
/// and each interferometer block is (theta, phi) per two-mode unit in mesh
/// or edge order followed by d terminal phases.
struct ModelParams {
    Vector values;
};

/// Byte offsets of the per-layer parameter blocks.
struct LayerBlockLayout {
    int d = 0;
    long units = 0;  // two-mode units per interferometer
    long alpha_offset = 0;
    long theta1_offset = 0;
    long r_offset = 0;
    long theta2_offset = 0;
    long interferometer_size = 0;  // 2*units + d
    long per_layer = 0;
};

LayerBlockLayout layer_layout(const CircuitSpec& spec);
long layer_param_count(const CircuitSpec& spec);
long total_param_count(const CircuitSpec& spec);

/// The ordered two-mode unit placements of one interferometer (Clements
/// rectangular mesh or the graph's edge list).
std::vector<Edge> interferometer_units(const CircuitSpec& spec);

/// Angles uniform in [0, 2*pi); displacement and squeezing amplitudes
/// normal with mean 0 and sd 0.1. Deterministic for a fixed seed.
ModelParams init_params(const CircuitSpec& spec, std::uint64_t seed);

/// One parameterized two-mode unit: for Clements layouts a phase shifter
/// (phi) on arm `a` followed by a beamsplitter (theta); for Graph layouts a
/// (theta, phi) beamsplitter.
struct TwoModeUnit {
    int a = 0;
    int b = 0;
    double theta = 0.0;
    double phi = 0.0;
};

struct InterferometerPlan {
    std::vector<TwoModeUnit> units;
    Vector terminal_phases;  // length d
};

/// Decode an interferometer parameter block into placed units and phases.
InterferometerPlan interferometer_plan(const CircuitSpec& spec,
                                       Eigen::Ref<const Vector> block);

/// The d x d mode unitary realized by an interferometer block.
ComplexMatrix interferometer_unitary(const CircuitSpec& spec,
                                     Eigen::Ref<const Vector> block);

/// The affine transformation of one layer: S(U2) * S(squeeze) * S(U1) with
/// the displacement applied after the linear part.
AffineSymplectic layer_to_affine(const CircuitSpec& spec,
                                 Eigen::Ref<const Vector> layer_params);

/// Vacuum evolved through all layers. O(L d^3) time, O(d^2) memory.
GaussianState forward(const CircuitSpec& spec, const ModelParams& params);

/// Throws InvalidArgumentError unless params.values matches the spec.
void check_params(const CircuitSpec& spec, const ModelParams& params);

}  // namespace gbbm

#endif
