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

#include "fock_oracle.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

namespace gbbm::testing {

namespace {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;

constexpr Complex kI(0.0, 1.0);

RMatrix annihilation(int cutoff) {
    RMatrix a = RMatrix::Zero(cutoff, cutoff);
    for (int n = 1; n < cutoff; ++n) {
        a(n - 1, n) = std::sqrt(static_cast<double>(n));
    }
    return a;
}

int digit(long index, long stride, int cutoff) {
    return static_cast<int>((index / stride) % cutoff);
}

}  // namespace

FockOracle::FockOracle(int modes, int cutoff) : modes_(modes), cutoff_(cutoff) {
    if (modes < 1 || modes > 3) {
        throw std::invalid_argument("FockOracle: supports 1 to 3 modes");
    }
    if (cutoff < 2) {
        throw std::invalid_argument("FockOracle: cutoff too small");
    }
    dim_ = 1;
    for (int m = 0; m < modes; ++m) {
        dim_ *= cutoff;
    }
    reset();
}

void FockOracle::reset() {
    state_ = Eigen::VectorXcd::Zero(dim_);
    state_[0] = 1.0;
}

long FockOracle::stride(int mode) const {
    long s = 1;
    for (int m = 0; m < mode; ++m) {
        s *= cutoff_;
    }
    return s;
}

void FockOracle::apply_single(const CMatrix& u, int mode) {
    const long s = stride(mode);
    Eigen::VectorXcd scratch(cutoff_);
    for (long base = 0; base < dim_; ++base) {
        if (digit(base, s, cutoff_) != 0) {
            continue;
        }
        for (int n = 0; n < cutoff_; ++n) {
            scratch[n] = state_[base + n * s];
        }
        const Eigen::VectorXcd out = u * scratch;
        for (int n = 0; n < cutoff_; ++n) {
            state_[base + n * s] = out[n];
        }
    }
}

void FockOracle::phase_shifter(double theta, int mode) {
    CMatrix u = CMatrix::Zero(cutoff_, cutoff_);
    for (int n = 0; n < cutoff_; ++n) {
        u(n, n) = std::exp(-kI * (theta * static_cast<double>(n)));
    }
    apply_single(u, mode);
}

void FockOracle::squeezer(double r, int mode) {
    // exp(r (a^2 - a^dag^2) / 2) maps a -> cosh(r) a - sinh(r) a^dag,
    // squeezing x for r > 0.
    const RMatrix a = annihilation(cutoff_);
    const RMatrix generator = 0.5 * r * (a * a - (a * a).transpose());
    apply_single(generator.exp().cast<Complex>(), mode);
}

void FockOracle::displacement(double alpha, int mode) {
    // exp(alpha (a^dag - a)) shifts x by sqrt(2) alpha for real alpha.
    const RMatrix a = annihilation(cutoff_);
    const RMatrix generator = alpha * (a.transpose() - a);
    apply_single(generator.exp().cast<Complex>(), mode);
}

void FockOracle::beamsplitter(double theta, double phi, int mode_a, int mode_b) {
    // exp(zeta a^dag b - zeta* a b^dag) with zeta = -theta e^{-i phi}
    // realizes the target mode map. The generator preserves the total
    // photon number, so each block is exponentiated separately; this keeps
    // large cutoffs affordable.
    const Complex zeta = -theta * std::exp(-kI * phi);
    const long sa = stride(mode_a);
    const long sb = stride(mode_b);
    for (int total = 1; total <= 2 * (cutoff_ - 1); ++total) {
        const int lo = std::max(0, total - cutoff_ + 1);
        const int hi = std::min(total, cutoff_ - 1);
        const int size = hi - lo + 1;
        if (size < 2) {
            continue;
        }
        CMatrix generator = CMatrix::Zero(size, size);
        for (int i = 0; i + 1 < size; ++i) {
            const int na = lo + i;
            const int nb = total - na;
            // a^dag on slot a, a on slot b: (na, nb) -> (na + 1, nb - 1).
            const double amp = std::sqrt(static_cast<double>(na + 1)) *
                               std::sqrt(static_cast<double>(nb));
            generator(i + 1, i) = zeta * amp;
            generator(i, i + 1) = -std::conj(zeta) * amp;
        }
        const CMatrix block = generator.exp();
        Eigen::VectorXcd scratch(size);
        for (long base = 0; base < dim_; ++base) {
            if (digit(base, sa, cutoff_) != 0 || digit(base, sb, cutoff_) != 0) {
                continue;
            }
            for (int i = 0; i < size; ++i) {
                scratch[i] = state_[base + (lo + i) * sa + (total - lo - i) * sb];
            }
            const Eigen::VectorXcd out = block * scratch;
            for (int i = 0; i < size; ++i) {
                state_[base + (lo + i) * sa + (total - lo - i) * sb] = out[i];
            }
        }
    }
}

void FockOracle::apply_circuit(const CircuitSpec& spec, const ModelParams& params) {
    check_params(spec, params);
    const LayerBlockLayout layout = layer_layout(spec);
    for (int k = 0; k < spec.layers; ++k) {
        const auto block = params.values.segment(static_cast<long>(k) * layout.per_layer,
                                                 layout.per_layer);
        const auto run_interferometer = [&](long offset) {
            const InterferometerPlan plan =
                interferometer_plan(spec, block.segment(offset, layout.interferometer_size));
            for (const TwoModeUnit& unit : plan.units) {
                if (spec.layout == Layout::Clements) {
                    phase_shifter(unit.phi, unit.a);
                    beamsplitter(unit.theta, 0.0, unit.a, unit.b);
                } else {
                    beamsplitter(unit.theta, unit.phi, unit.a, unit.b);
                }
            }
            for (int m = 0; m < spec.modes; ++m) {
                phase_shifter(plan.terminal_phases[m], m);
            }
        };
        run_interferometer(layout.theta1_offset);
        for (int m = 0; m < spec.modes; ++m) {
            squeezer(block[layout.r_offset + m], m);
        }
        run_interferometer(layout.theta2_offset);
        for (int m = 0; m < spec.modes; ++m) {
            displacement(block[layout.alpha_offset + m], m);
        }
    }
}

double FockOracle::parity(const std::vector<int>& modes) const {
    double value = 0.0;
    for (long idx = 0; idx < dim_; ++idx) {
        int total = 0;
        for (int m : modes) {
            total += digit(idx, stride(m), cutoff_);
        }
        const double weight = std::norm(state_[idx]);
        value += (total % 2 == 0) ? weight : -weight;
    }
    return value;
}

double FockOracle::threshold(const std::vector<int>& modes) const {
    double value = 0.0;
    for (long idx = 0; idx < dim_; ++idx) {
        int clicks = 0;
        for (int m : modes) {
            clicks += digit(idx, stride(m), cutoff_) > 0 ? 1 : 0;
        }
        const double weight = std::norm(state_[idx]);
        value += (clicks % 2 == 0) ? weight : -weight;
    }
    return value;
}

double FockOracle::vacuum_probability(const std::vector<int>& modes) const {
    double value = 0.0;
    for (long idx = 0; idx < dim_; ++idx) {
        bool vacuum = true;
        for (int m : modes) {
            if (digit(idx, stride(m), cutoff_) != 0) {
                vacuum = false;
                break;
            }
        }
        if (vacuum) {
            value += std::norm(state_[idx]);
        }
    }
    return value;
}

std::vector<double> FockOracle::outcome_probs(gbbm::DetectionKind kind) const {
    std::vector<double> probs(std::size_t{1} << modes_, 0.0);
    for (long idx = 0; idx < dim_; ++idx) {
        std::size_t pattern = 0;
        for (int m = 0; m < modes_; ++m) {
            const int n = digit(idx, stride(m), cutoff_);
            const bool bit = kind == gbbm::DetectionKind::Parity ? (n % 2 == 1) : (n > 0);
            if (bit) {
                pattern |= std::size_t{1} << m;
            }
        }
        probs[pattern] += std::norm(state_[idx]);
    }
    return probs;
}

double FockOracle::truncation_tail() const {
    double boundary = 0.0;
    for (long idx = 0; idx < dim_; ++idx) {
        for (int m = 0; m < modes_; ++m) {
            if (digit(idx, stride(m), cutoff_) == cutoff_ - 1) {
                boundary += std::norm(state_[idx]);
                break;
            }
        }
    }
    const double norm_drift = std::abs(1.0 - state_.squaredNorm());
    return boundary + norm_drift;
}

FockOracle run_circuit_oracle(const CircuitSpec& spec, const ModelParams& params,
                              double tail_tol, int max_cutoff) {
    for (int cutoff = 32; cutoff <= max_cutoff; cutoff = cutoff * 3 / 2) {
        FockOracle oracle(spec.modes, cutoff);
        oracle.apply_circuit(spec, params);
        if (oracle.truncation_tail() < tail_tol) {
            return oracle;
        }
    }
    throw std::runtime_error("run_circuit_oracle: cutoff limit reached before the tail bound");
}

}  // namespace gbbm::testing
