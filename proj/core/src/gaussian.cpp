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

#include "gbbm/gaussian.hpp"

#include <cmath>
#include <string>

#include "gbbm/errors.hpp"

namespace gbbm {

GaussianState GaussianState::vacuum(int d) {
    if (d < 1) {
        throw InvalidArgumentError("vacuum: mode count must be >= 1, got " + std::to_string(d));
    }
    GaussianState state;
    state.modes = d;
    state.mean = Vector::Zero(2 * d);
    state.covariance = Matrix::Identity(2 * d, 2 * d);
    return state;
}

AffineSymplectic AffineSymplectic::identity(int d) {
    return {Matrix::Identity(2 * d, 2 * d), Vector::Zero(2 * d)};
}

Matrix symplectic_form(int d) {
    Matrix omega = Matrix::Zero(2 * d, 2 * d);
    omega.topRightCorner(d, d) = Matrix::Identity(d, d);
    omega.bottomLeftCorner(d, d) = -Matrix::Identity(d, d);
    return omega;
}

double symplectic_defect(const Matrix& s) {
    const int d = static_cast<int>(s.rows()) / 2;
    const Matrix omega = symplectic_form(d);
    return (s * omega * s.transpose() - omega).cwiseAbs().maxCoeff();
}

Matrix interferometer_symplectic(const ComplexMatrix& u) {
    const int d = static_cast<int>(u.rows());
    Matrix s(2 * d, 2 * d);
    s.topLeftCorner(d, d) = u.real();
    s.topRightCorner(d, d) = -u.imag();
    s.bottomLeftCorner(d, d) = u.imag();
    s.bottomRightCorner(d, d) = u.real();
    return s;
}

namespace {

void check_mode(int mode, int d, const char* who) {
    if (mode < 0 || mode >= d) {
        throw InvalidArgumentError(std::string(who) + ": mode " + std::to_string(mode) +
                                   " out of range for d=" + std::to_string(d));
    }
}

void check_finite(const Vector& v, const char* who) {
    if (!v.allFinite()) {
        throw InvalidArgumentError(std::string(who) + ": non-finite entries");
    }
}

}  // namespace

AffineSymplectic phase_shifter(double theta, int mode, int d) {
    check_mode(mode, d, "phase_shifter");
    AffineSymplectic op = AffineSymplectic::identity(d);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    // x -> c x + s p, p -> -s x + c p on the target mode.
    op.linear(mode, mode) = c;
    op.linear(mode, mode + d) = s;
    op.linear(mode + d, mode) = -s;
    op.linear(mode + d, mode + d) = c;
    return op;
}

AffineSymplectic beamsplitter(double theta, double phi, int mode_a, int mode_b, int d) {
    check_mode(mode_a, d, "beamsplitter");
    check_mode(mode_b, d, "beamsplitter");
    if (mode_a == mode_b) {
        throw InvalidArgumentError("beamsplitter: modes must be distinct");
    }
    // Mode unitary [[cos t, -e^{-i phi} sin t], [e^{i phi} sin t, cos t]].
    const std::complex<double> ephi(std::cos(phi), std::sin(phi));
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    ComplexMatrix u = ComplexMatrix::Identity(d, d);
    u(mode_a, mode_a) = c;
    u(mode_a, mode_b) = -std::conj(ephi) * s;
    u(mode_b, mode_a) = ephi * s;
    u(mode_b, mode_b) = c;
    return {interferometer_symplectic(u), Vector::Zero(2 * d)};
}

AffineSymplectic squeezer(const Vector& r) {
    check_finite(r, "squeezer");
    const int d = static_cast<int>(r.size());
    AffineSymplectic op = AffineSymplectic::identity(d);
    for (int j = 0; j < d; ++j) {
        op.linear(j, j) = std::exp(-r[j]);
        op.linear(j + d, j + d) = std::exp(r[j]);
    }
    return op;
}

AffineSymplectic displacement(const Vector& alpha) {
    check_finite(alpha, "displacement");
    const int d = static_cast<int>(alpha.size());
    AffineSymplectic op = AffineSymplectic::identity(d);
    op.shift.head(d) = std::sqrt(2.0) * alpha;
    return op;
}

AffineSymplectic compose(const AffineSymplectic& second, const AffineSymplectic& first) {
    if (second.modes() != first.modes()) {
        throw InvalidArgumentError("compose: mode count mismatch");
    }
    return {second.linear * first.linear, second.linear * first.shift + second.shift};
}

GaussianState apply(const GaussianState& state, const AffineSymplectic& op) {
    GaussianState out = state;
    apply_in_place(out, op);
    return out;
}

void apply_in_place(GaussianState& state, const AffineSymplectic& op) {
    if (op.modes() != state.modes) {
        throw InvalidArgumentError("apply: operation acts on " + std::to_string(op.modes()) +
                                   " modes but state has " + std::to_string(state.modes));
    }
    state.mean = op.linear * state.mean + op.shift;
    state.covariance = op.linear * state.covariance * op.linear.transpose();
}

void check_mode_subset(const std::vector<int>& modes, int d) {
    if (modes.empty()) {
        throw InvalidArgumentError("mode subset must be nonempty");
    }
    int prev = -1;
    for (int m : modes) {
        if (m < 0 || m >= d) {
            throw InvalidArgumentError("mode index " + std::to_string(m) +
                                       " out of range for d=" + std::to_string(d));
        }
        if (m <= prev) {
            throw InvalidArgumentError("mode subset must be strictly increasing");
        }
        prev = m;
    }
}

GaussianState reduce(const GaussianState& state, const std::vector<int>& modes) {
    check_mode_subset(modes, state.modes);
    const int d = state.modes;
    const int k = static_cast<int>(modes.size());
    GaussianState out;
    out.modes = k;
    out.mean.resize(2 * k);
    out.covariance.resize(2 * k, 2 * k);
    for (int i = 0; i < k; ++i) {
        out.mean[i] = state.mean[modes[i]];
        out.mean[i + k] = state.mean[modes[i] + d];
    }
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            out.covariance(i, j) = state.covariance(modes[i], modes[j]);
            out.covariance(i, j + k) = state.covariance(modes[i], modes[j] + d);
            out.covariance(i + k, j) = state.covariance(modes[i] + d, modes[j]);
            out.covariance(i + k, j + k) = state.covariance(modes[i] + d, modes[j] + d);
        }
    }
    return out;
}

Matrix husimi(const GaussianState& state) {
    const int n = static_cast<int>(state.covariance.rows());
    return 0.5 * (state.covariance + Matrix::Identity(n, n));
}

}  // namespace gbbm
