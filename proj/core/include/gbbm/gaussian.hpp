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

#ifndef GBBM_GAUSSIAN_HPP
#define GBBM_GAUSSIAN_HPP

#include <vector>

#include <Eigen/Dense>

namespace gbbm {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;

// Phase-space conventions used throughout the engine:
//   * quadratures are ordered (x_1..x_d, p_1..p_d);
//   * the vacuum has mean 0 and covariance equal to the identity;
//   * a displacement by alpha shifts x by sqrt(2)*alpha, so a single-mode
//     coherent state has mean photon number alpha^2;
//   * a squeezer with r > 0 squeezes x (covariance e^{-2r}) and stretches p.

/// A d-mode Gaussian state held as its first and second quadrature moments.
struct GaussianState {
    int modes = 0;
    Vector mean;        // length 2d
    Matrix covariance;  // 2d x 2d, symmetric

    static GaussianState vacuum(int d);
};

/// One Gaussian transformation: mean -> linear*mean + shift,
/// covariance -> linear*covariance*linear^T.
struct AffineSymplectic {
    Matrix linear;  // 2d x 2d real symplectic
    Vector shift;   // length 2d

    int modes() const { return static_cast<int>(shift.size()) / 2; }
    static AffineSymplectic identity(int d);
};

/// Canonical symplectic form [[0, I], [-I, 0]] for d modes.
Matrix symplectic_form(int d);

/// max |S Omega S^T - Omega| over entries; 0 for an exact symplectic matrix.
double symplectic_defect(const Matrix& s);

/// Real symplectic image of a d x d mode unitary U = X + iY, block form
/// [[X, -Y], [Y, X]].
Matrix interferometer_symplectic(const ComplexMatrix& u);

AffineSymplectic phase_shifter(double theta, int mode, int d);
AffineSymplectic beamsplitter(double theta, double phi, int mode_a, int mode_b, int d);
AffineSymplectic squeezer(const Vector& r);
AffineSymplectic displacement(const Vector& alpha);

/// Composition second after first: (S2 S1, S2 t1 + t2).
AffineSymplectic compose(const AffineSymplectic& second, const AffineSymplectic& first);

GaussianState apply(const GaussianState& state, const AffineSymplectic& op);
void apply_in_place(GaussianState& state, const AffineSymplectic& op);

/// Restriction of the state to the sorted mode subset, preserving the
/// (x..., p...) ordering.
GaussianState reduce(const GaussianState& state, const std::vector<int>& modes);

/// Husimi covariance Q = (Sigma + I) / 2.
Matrix husimi(const GaussianState& state);

/// Throws InvalidArgumentError unless `modes` is nonempty, strictly
/// increasing and within [0, d).
void check_mode_subset(const std::vector<int>& modes, int d);

}  // namespace gbbm

#endif
