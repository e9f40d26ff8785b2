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

// Internal reverse-mode machinery behind forward() and loss_and_gradient().
// Not part of the stable API.

#ifndef GBBM_DETAIL_FORWARD_PASS_HPP
#define GBBM_DETAIL_FORWARD_PASS_HPP

#include <vector>

#include "gbbm/gaussian.hpp"

namespace gbbm {

struct CircuitSpec;
struct ModelParams;
struct InterferometerPlan;
enum class Layout;

namespace detail {

/// 2x2 mode-space matrix of one parameterized unit.
Eigen::Matrix2cd unit_cell(Layout layout, double theta, double phi);

/// Left-multiplies `u` by every unit in order, then by the terminal phases.
void apply_interferometer_units(ComplexMatrix& u, const InterferometerPlan& plan,
                                Layout layout);

/// Stage-boundary moments recorded while evolving one layer, plus the built
/// operators; everything the backward sweep needs.
struct LayerTape {
    Vector mu_in;
    Matrix sigma_in;
    Vector mu_after_u1;
    Matrix sigma_after_u1;
    Vector mu_after_sq;
    Matrix sigma_after_sq;
    ComplexMatrix u1;
    ComplexMatrix u2;
    Matrix s1;
    Matrix s2;
    Vector squeeze_scale;  // (e^{-r}, e^{r}), length 2d
};

struct ForwardTape {
    std::vector<LayerTape> layers;
};

/// Evolves vacuum through all layers; records stage tapes when `tape` is
/// non-null.
GaussianState run_forward(const CircuitSpec& spec, const ModelParams& params,
                          ForwardTape* tape);

/// Reverse-mode sweep: adjoints of the final (mean, covariance) in, flat
/// parameter gradient out. `sigma_bar` entries are treated as independent
/// (callers scatter symmetric adjoints, which is consistent).
Vector backward_params(const CircuitSpec& spec, const ModelParams& params,
                       const ForwardTape& tape, Vector mu_bar, Matrix sigma_bar);

/// Adjoint of one interferometer block: given the built unitary and its
/// adjoint, reconstructs unit inputs in reverse (units are unitary, so no
/// per-unit intermediates are stored) and emits the (theta, phi, terminal
/// phase) gradient in block layout.
Vector interferometer_backward(const CircuitSpec& spec, const InterferometerPlan& plan,
                               const ComplexMatrix& u_final, const ComplexMatrix& u_bar);

/// Value and reduced-moment adjoints of one operator-string expectation.
struct ExpvalGrad {
    double value = 1.0;
    Vector dmu;     // 2|A|
    Matrix dsigma;  // 2|A| x 2|A|
};

ExpvalGrad parity_expval_grad(const GaussianState& state, const std::vector<int>& modes);
ExpvalGrad threshold_expval_grad(const GaussianState& state, const std::vector<int>& modes,
                                 int locality_cutoff);

/// Accumulates weight * (reduced adjoints) into the full-state adjoints.
void scatter_expval_grad(const ExpvalGrad& grad, const std::vector<int>& modes,
                         double weight, int d, Vector& mu_bar, Matrix& sigma_bar);

}  // namespace detail
}  // namespace gbbm

#endif
