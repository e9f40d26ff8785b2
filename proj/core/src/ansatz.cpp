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

#include "gbbm/ansatz.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "gbbm/detail/forward_pass.hpp"
#include "gbbm/errors.hpp"
#include "gbbm/rng.hpp"

namespace gbbm {

CircuitSpec CircuitSpec::clements(int d, int num_layers) {
    if (d < 1 || num_layers < 1) {
        throw InvalidArgumentError("CircuitSpec: need d >= 1 and layers >= 1");
    }
    CircuitSpec spec;
    spec.modes = d;
    spec.layers = num_layers;
    spec.layout = Layout::Clements;
    return spec;
}

CircuitSpec CircuitSpec::graph(int d, int num_layers, std::vector<Edge> ordered_edges) {
    if (d < 1 || num_layers < 1) {
        throw InvalidArgumentError("CircuitSpec: need d >= 1 and layers >= 1");
    }
    for (const Edge& e : ordered_edges) {
        if (e.a < 0 || e.a >= d || e.b < 0 || e.b >= d || e.a == e.b) {
            throw InvalidArgumentError("CircuitSpec: edge (" + std::to_string(e.a) + "," +
                                       std::to_string(e.b) + ") invalid for d=" +
                                       std::to_string(d));
        }
    }
    CircuitSpec spec;
    spec.modes = d;
    spec.layers = num_layers;
    spec.layout = Layout::Graph;
    spec.edges = std::move(ordered_edges);
    return spec;
}

std::vector<Edge> complete_graph_edges(int d, std::uint64_t shuffle_seed) {
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(d) * (d - 1) / 2);
    for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j) {
            edges.push_back({i, j});
        }
    }
    RngEngine rng = seeded_rng(shuffle_seed);
    for (std::size_t i = edges.size(); i > 1; --i) {
        std::swap(edges[i - 1], edges[uniform_index(rng, i)]);
    }
    return edges;
}

std::vector<Edge> interferometer_units(const CircuitSpec& spec) {
    if (spec.layout == Layout::Graph) {
        return spec.edges;
    }
    // Clements rectangular mesh: d columns alternating between even and odd
    // nearest-neighbour pairs, d(d-1)/2 units total.
    std::vector<Edge> units;
    const int d = spec.modes;
    units.reserve(static_cast<std::size_t>(d) * (d - 1) / 2);
    for (int col = 0; col < d; ++col) {
        for (int i = col % 2; i + 1 < d; i += 2) {
            units.push_back({i, i + 1});
        }
    }
    return units;
}

LayerBlockLayout layer_layout(const CircuitSpec& spec) {
    LayerBlockLayout layout;
    layout.d = spec.modes;
    layout.units = spec.layout == Layout::Clements
                       ? static_cast<long>(spec.modes) * (spec.modes - 1) / 2
                       : static_cast<long>(spec.edges.size());
    layout.interferometer_size = 2 * layout.units + spec.modes;
    layout.alpha_offset = 0;
    layout.theta1_offset = spec.modes;
    layout.r_offset = layout.theta1_offset + layout.interferometer_size;
    layout.theta2_offset = layout.r_offset + spec.modes;
    layout.per_layer = layout.theta2_offset + layout.interferometer_size;
    return layout;
}

long layer_param_count(const CircuitSpec& spec) { return layer_layout(spec).per_layer; }

long total_param_count(const CircuitSpec& spec) {
    return layer_param_count(spec) * spec.layers;
}

ModelParams init_params(const CircuitSpec& spec, std::uint64_t seed) {
    const LayerBlockLayout layout = layer_layout(spec);
    ModelParams params;
    params.values.resize(total_param_count(spec));
    RngEngine rng = seeded_rng(seed);
    for (int k = 0; k < spec.layers; ++k) {
        const long base = k * layout.per_layer;
        for (long i = 0; i < layout.d; ++i) {
            params.values[base + layout.alpha_offset + i] = normal_sample(rng, 0.0, 0.1);
        }
        for (long i = 0; i < layout.interferometer_size; ++i) {
            params.values[base + layout.theta1_offset + i] = uniform_angle(rng);
        }
        for (long i = 0; i < layout.d; ++i) {
            params.values[base + layout.r_offset + i] = normal_sample(rng, 0.0, 0.1);
        }
        for (long i = 0; i < layout.interferometer_size; ++i) {
            params.values[base + layout.theta2_offset + i] = uniform_angle(rng);
        }
    }
    return params;
}

InterferometerPlan interferometer_plan(const CircuitSpec& spec,
                                       Eigen::Ref<const Vector> block) {
    const LayerBlockLayout layout = layer_layout(spec);
    if (block.size() != layout.interferometer_size) {
        throw InvalidArgumentError("interferometer block has " + std::to_string(block.size()) +
                                   " entries, expected " +
                                   std::to_string(layout.interferometer_size));
    }
    InterferometerPlan plan;
    const std::vector<Edge> units = interferometer_units(spec);
    plan.units.resize(units.size());
    for (std::size_t t = 0; t < units.size(); ++t) {
        plan.units[t] = {units[t].a, units[t].b, block[2 * static_cast<long>(t)],
                         block[2 * static_cast<long>(t) + 1]};
    }
    plan.terminal_phases = block.tail(spec.modes);
    return plan;
}

ComplexMatrix interferometer_unitary(const CircuitSpec& spec,
                                     Eigen::Ref<const Vector> block) {
    const InterferometerPlan plan = interferometer_plan(spec, block);
    ComplexMatrix u = ComplexMatrix::Identity(spec.modes, spec.modes);
    detail::apply_interferometer_units(u, plan, spec.layout);
    return u;
}

void check_params(const CircuitSpec& spec, const ModelParams& params) {
    const long expected = total_param_count(spec);
    if (params.values.size() != expected) {
        throw InvalidArgumentError("parameter vector has " +
                                   std::to_string(params.values.size()) + " entries, spec needs " +
                                   std::to_string(expected));
    }
}

AffineSymplectic layer_to_affine(const CircuitSpec& spec,
                                 Eigen::Ref<const Vector> layer_params) {
    const LayerBlockLayout layout = layer_layout(spec);
    if (layer_params.size() != layout.per_layer) {
        throw InvalidArgumentError("layer block has " + std::to_string(layer_params.size()) +
                                   " entries, expected " + std::to_string(layout.per_layer));
    }
    const int d = spec.modes;
    const ComplexMatrix u1 = interferometer_unitary(
        spec, layer_params.segment(layout.theta1_offset, layout.interferometer_size));
    const ComplexMatrix u2 = interferometer_unitary(
        spec, layer_params.segment(layout.theta2_offset, layout.interferometer_size));
    const Vector r = layer_params.segment(layout.r_offset, d);
    const Vector alpha = layer_params.segment(layout.alpha_offset, d);

    AffineSymplectic op;
    op.linear = interferometer_symplectic(u2) * squeezer(r).linear *
                interferometer_symplectic(u1);
    op.shift = displacement(alpha).shift;
    return op;
}

GaussianState forward(const CircuitSpec& spec, const ModelParams& params) {
    check_params(spec, params);
    return detail::run_forward(spec, params, nullptr);
}

}  // namespace gbbm
