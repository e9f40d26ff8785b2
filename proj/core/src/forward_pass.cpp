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

#include "gbbm/detail/forward_pass.hpp"

#include <cmath>
#include <complex>

#include "gbbm/ansatz.hpp"

namespace gbbm::detail {

namespace {

using Eigen::Matrix2cd;
using Complex = std::complex<double>;

constexpr Complex kImag(0.0, 1.0);

Matrix2cd clements_cell(double theta, double phi) {
    // Phase shifter on the first arm, then a phi=0 beamsplitter.
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const Complex e = std::exp(-kImag * phi);
    Matrix2cd b;
    b << c * e, -s, s * e, c;
    return b;
}

Matrix2cd graph_cell(double theta, double phi) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const Complex e = std::exp(kImag * phi);
    Matrix2cd b;
    b << c, -std::conj(e) * s, e * s, c;
    return b;
}

Matrix2cd cell_dtheta(Layout layout, double theta, double phi) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    Matrix2cd b;
    if (layout == Layout::Clements) {
        const Complex e = std::exp(-kImag * phi);
        b << -s * e, -c, c * e, -s;
    } else {
        const Complex e = std::exp(kImag * phi);
        b << -s, -std::conj(e) * c, e * c, -s;
    }
    return b;
}

Matrix2cd cell_dphi(Layout layout, double theta, double phi) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    Matrix2cd b;
    if (layout == Layout::Clements) {
        const Complex e = std::exp(-kImag * phi);
        b << -kImag * c * e, 0.0, -kImag * s * e, 0.0;
    } else {
        const Complex e = std::exp(kImag * phi);
        b << 0.0, kImag * std::conj(e) * s, kImag * e * s, 0.0;
    }
    return b;
}

void left_multiply_rows(ComplexMatrix& m, int a, int b, const Matrix2cd& cell) {
    const Eigen::RowVectorXcd ra = m.row(a);
    const Eigen::RowVectorXcd rb = m.row(b);
    m.row(a) = cell(0, 0) * ra + cell(0, 1) * rb;
    m.row(b) = cell(1, 0) * ra + cell(1, 1) * rb;
}

}  // namespace

Matrix2cd unit_cell(Layout layout, double theta, double phi) {
    return layout == Layout::Clements ? clements_cell(theta, phi) : graph_cell(theta, phi);
}

void apply_interferometer_units(ComplexMatrix& u, const InterferometerPlan& plan,
                                Layout layout) {
    for (const TwoModeUnit& unit : plan.units) {
        left_multiply_rows(u, unit.a, unit.b, unit_cell(layout, unit.theta, unit.phi));
    }
    for (int k = 0; k < plan.terminal_phases.size(); ++k) {
        u.row(k) *= std::exp(-kImag * plan.terminal_phases[k]);
    }
}

GaussianState run_forward(const CircuitSpec& spec, const ModelParams& params,
                          ForwardTape* tape) {
    const LayerBlockLayout layout = layer_layout(spec);
    const int d = spec.modes;
    GaussianState state = GaussianState::vacuum(d);
    if (tape != nullptr) {
        tape->layers.clear();
        tape->layers.resize(spec.layers);
    }

    for (int k = 0; k < spec.layers; ++k) {
        const auto block = params.values.segment(static_cast<long>(k) * layout.per_layer,
                                                 layout.per_layer);
        LayerTape scratch;
        LayerTape& rec = tape != nullptr ? tape->layers[k] : scratch;

        ComplexMatrix u1 = ComplexMatrix::Identity(d, d);
        apply_interferometer_units(
            u1, interferometer_plan(spec, block.segment(layout.theta1_offset,
                                                        layout.interferometer_size)),
            spec.layout);
        const Matrix s1 = interferometer_symplectic(u1);
        if (tape != nullptr) {
            rec.mu_in = state.mean;
            rec.sigma_in = state.covariance;
        }
        state.mean = s1 * state.mean;
        state.covariance = s1 * state.covariance * s1.transpose();
        if (tape != nullptr) {
            rec.mu_after_u1 = state.mean;
            rec.sigma_after_u1 = state.covariance;
        }

        Vector scale(2 * d);
        const auto r = block.segment(layout.r_offset, d);
        for (int j = 0; j < d; ++j) {
            scale[j] = std::exp(-r[j]);
            scale[j + d] = std::exp(r[j]);
        }
        state.mean.array() *= scale.array();
        state.covariance = scale.asDiagonal() * state.covariance * scale.asDiagonal();
        if (tape != nullptr) {
            rec.mu_after_sq = state.mean;
            rec.sigma_after_sq = state.covariance;
        }

        ComplexMatrix u2 = ComplexMatrix::Identity(d, d);
        apply_interferometer_units(
            u2, interferometer_plan(spec, block.segment(layout.theta2_offset,
                                                        layout.interferometer_size)),
            spec.layout);
        const Matrix s2 = interferometer_symplectic(u2);
        state.mean = s2 * state.mean;
        state.covariance = s2 * state.covariance * s2.transpose();

        state.mean.head(d) += std::sqrt(2.0) * block.segment(layout.alpha_offset, d);

        if (tape != nullptr) {
            rec.u1 = std::move(u1);
            rec.u2 = std::move(u2);
            rec.s1 = s1;
            rec.s2 = s2;
            rec.squeeze_scale = std::move(scale);
        }
    }
    return state;
}

Vector interferometer_backward(const CircuitSpec& spec, const InterferometerPlan& plan,
                               const ComplexMatrix& u_final, const ComplexMatrix& u_bar) {
    const int d = spec.modes;
    const long num_units = static_cast<long>(plan.units.size());
    Vector grad = Vector::Zero(2 * num_units + d);

    // Peel off the terminal phase layer: U = P V with P = diag(e^{-i g_k}),
    // so V and the adjoint both pick up the conjugate phase per row, and
    // gamma_bar_k = Re[conj(P_bar_kk) * d/dgamma e^{-i gamma_k}].
    ComplexMatrix v = u_final;
    ComplexMatrix v_bar = u_bar;
    for (int k = 0; k < d; ++k) {
        const Complex phase = std::exp(-kImag * plan.terminal_phases[k]);
        v.row(k) *= std::conj(phase);
        v_bar.row(k) *= std::conj(phase);
        const Complex p_bar = u_bar.row(k).cwiseProduct(v.row(k).conjugate()).sum();
        grad[2 * num_units + k] = (std::conj(p_bar) * (-kImag * phase)).real();
    }

    // Reverse sweep: reconstruct each unit's input with the conjugate
    // transpose and accumulate the 2x2 cell adjoint.
    for (long t = num_units - 1; t >= 0; --t) {
        const TwoModeUnit& unit = plan.units[t];
        const Matrix2cd cell = unit_cell(spec.layout, unit.theta, unit.phi);
        const Matrix2cd cell_dag = cell.adjoint();
        left_multiply_rows(v, unit.a, unit.b, cell_dag);  // v is now the unit input

        Matrix2cd cell_bar;
        cell_bar(0, 0) = v_bar.row(unit.a).cwiseProduct(v.row(unit.a).conjugate()).sum();
        cell_bar(0, 1) = v_bar.row(unit.a).cwiseProduct(v.row(unit.b).conjugate()).sum();
        cell_bar(1, 0) = v_bar.row(unit.b).cwiseProduct(v.row(unit.a).conjugate()).sum();
        cell_bar(1, 1) = v_bar.row(unit.b).cwiseProduct(v.row(unit.b).conjugate()).sum();

        const Matrix2cd dtheta = cell_dtheta(spec.layout, unit.theta, unit.phi);
        const Matrix2cd dphi = cell_dphi(spec.layout, unit.theta, unit.phi);
        grad[2 * t] = cell_bar.conjugate().cwiseProduct(dtheta).sum().real();
        grad[2 * t + 1] = cell_bar.conjugate().cwiseProduct(dphi).sum().real();

        left_multiply_rows(v_bar, unit.a, unit.b, cell_dag);
    }
    return grad;
}

Vector backward_params(const CircuitSpec& spec, const ModelParams& params,
                       const ForwardTape& tape, Vector mu_bar, Matrix sigma_bar) {
    const LayerBlockLayout layout = layer_layout(spec);
    const int d = spec.modes;
    Vector grad = Vector::Zero(total_param_count(spec));

    for (int k = spec.layers - 1; k >= 0; --k) {
        const LayerTape& rec = tape.layers[k];
        const auto block = params.values.segment(static_cast<long>(k) * layout.per_layer,
                                                 layout.per_layer);
        auto layer_grad = grad.segment(static_cast<long>(k) * layout.per_layer,
                                       layout.per_layer);

        // Displacement (applied last): alpha_bar = sqrt(2) * mu_bar_x.
        layer_grad.segment(layout.alpha_offset, d) = std::sqrt(2.0) * mu_bar.head(d);

        // Second interferometer stage.
        {
            const Matrix sym = sigma_bar + sigma_bar.transpose();
            Matrix s_bar = sym * (rec.s2 * rec.sigma_after_sq);
            s_bar.noalias() += mu_bar * rec.mu_after_sq.transpose();
            const ComplexMatrix u_bar =
                (s_bar.topLeftCorner(d, d) + s_bar.bottomRightCorner(d, d)).cast<Complex>() +
                kImag * (s_bar.bottomLeftCorner(d, d) - s_bar.topRightCorner(d, d))
                            .cast<Complex>();
            const InterferometerPlan plan = interferometer_plan(
                spec, block.segment(layout.theta2_offset, layout.interferometer_size));
            layer_grad.segment(layout.theta2_offset, layout.interferometer_size) =
                interferometer_backward(spec, plan, rec.u2, u_bar);
            sigma_bar = rec.s2.transpose() * sigma_bar * rec.s2;
            mu_bar = rec.s2.transpose() * mu_bar;
        }

        // Squeezer stage (diagonal scale z).
        {
            const Vector& z = rec.squeeze_scale;
            Vector z_bar(2 * d);
            for (int i = 0; i < 2 * d; ++i) {
                double acc = mu_bar[i] * rec.mu_after_u1[i];
                for (int j = 0; j < 2 * d; ++j) {
                    acc += (sigma_bar(i, j) + sigma_bar(j, i)) * z[j] * rec.sigma_after_u1(j, i);
                }
                z_bar[i] = acc;
            }
            for (int j = 0; j < d; ++j) {
                layer_grad[layout.r_offset + j] = -z[j] * z_bar[j] + z[j + d] * z_bar[j + d];
            }
            sigma_bar = z.asDiagonal() * sigma_bar * z.asDiagonal();
            mu_bar.array() *= z.array();
        }

        // First interferometer stage.
        {
            const Matrix sym = sigma_bar + sigma_bar.transpose();
            Matrix s_bar = sym * (rec.s1 * rec.sigma_in);
            s_bar.noalias() += mu_bar * rec.mu_in.transpose();
            const ComplexMatrix u_bar =
                (s_bar.topLeftCorner(d, d) + s_bar.bottomRightCorner(d, d)).cast<Complex>() +
                kImag * (s_bar.bottomLeftCorner(d, d) - s_bar.topRightCorner(d, d))
                            .cast<Complex>();
            const InterferometerPlan plan = interferometer_plan(
                spec, block.segment(layout.theta1_offset, layout.interferometer_size));
            layer_grad.segment(layout.theta1_offset, layout.interferometer_size) =
                interferometer_backward(spec, plan, rec.u1, u_bar);
            sigma_bar = rec.s1.transpose() * sigma_bar * rec.s1;
            mu_bar = rec.s1.transpose() * mu_bar;
        }
    }
    return grad;
}

}  // namespace gbbm::detail
