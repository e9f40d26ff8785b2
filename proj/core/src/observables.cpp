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

#include "gbbm/observables.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "gbbm/detail/forward_pass.hpp"
#include "gbbm/errors.hpp"

namespace gbbm {

namespace {

/// Cholesky of a symmetric positive definite block; throws StateInvalidError
/// when the factorization fails.
Eigen::LLT<Matrix> checked_llt(const Matrix& m, const char* who) {
    Eigen::LLT<Matrix> llt(m);
    if (llt.info() != Eigen::Success) {
        throw StateInvalidError(std::string(who) +
                                ": reduced covariance is not positive definite");
    }
    return llt;
}

double log_det_from_llt(const Eigen::LLT<Matrix>& llt) {
    return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

/// Rows/cols of `full` (2k x 2k, (x...,p...) blocks) for the local index
/// subset, preserving the block ordering.
void select_block(const Matrix& full, const Vector& mean, const std::vector<int>& local,
                  int k, Matrix& sub, Vector& sub_mean) {
    const int m = static_cast<int>(local.size());
    sub.resize(2 * m, 2 * m);
    sub_mean.resize(2 * m);
    for (int i = 0; i < m; ++i) {
        sub_mean[i] = mean[local[i]];
        sub_mean[i + m] = mean[local[i] + k];
    }
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            sub(i, j) = full(local[i], local[j]);
            sub(i, j + m) = full(local[i], local[j] + k);
            sub(i + m, j) = full(local[i] + k, local[j]);
            sub(i + m, j + m) = full(local[i] + k, local[j] + k);
        }
    }
}

}  // namespace

double subset_probability(double sigma) {
    if (sigma <= 0.0) {
        throw InvalidArgumentError("subset_probability: sigma must be positive");
    }
    return 0.5 * (1.0 - std::exp(-1.0 / (2.0 * sigma)));
}

KernelConfig KernelConfig::validated(std::vector<double> bandwidths) {
    if (bandwidths.empty()) {
        throw InvalidArgumentError("KernelConfig: need at least one bandwidth");
    }
    for (double sigma : bandwidths) {
        subset_probability(sigma);  // validates sigma > 0
    }
    return {std::move(bandwidths)};
}

std::vector<double> KernelConfig::subset_probabilities() const {
    std::vector<double> probabilities(bandwidths.size());
    for (std::size_t i = 0; i < bandwidths.size(); ++i) {
        probabilities[i] = subset_probability(bandwidths[i]);
    }
    return probabilities;
}

std::vector<int> sample_subset(double sigma, int d, RngEngine& rng) {
    const double p = subset_probability(sigma);
    std::vector<int> subset;
    for (int i = 0; i < d; ++i) {
        if (bernoulli(rng, p)) {
            subset.push_back(i);
        }
    }
    return subset;
}

double parity_expval(const GaussianState& state, const std::vector<int>& modes) {
    if (modes.empty()) {
        return 1.0;
    }
    const GaussianState red = reduce(state, modes);
    const auto llt = checked_llt(red.covariance, "parity_expval");
    const Vector v = llt.solve(red.mean);
    const double quad = red.mean.dot(v);
    return std::exp(-quad - 0.5 * log_det_from_llt(llt));
}

double threshold_expval(const GaussianState& state, const std::vector<int>& modes,
                        int locality_cutoff) {
    if (modes.empty()) {
        return 1.0;
    }
    const int ell = static_cast<int>(modes.size());
    if (ell > locality_cutoff) {
        throw LocalityCutoffError("threshold_expval: string length " + std::to_string(ell) +
                                  " exceeds cutoff " + std::to_string(locality_cutoff));
    }
    const GaussianState red = reduce(state, modes);
    const Matrix q = husimi(red);

    double sum = 1.0;  // S = {} contributes (-2)^0 * p0({}) = 1
    std::vector<int> local;
    Matrix sub;
    Vector sub_mean;
    for (unsigned mask = 1; mask < (1U << ell); ++mask) {
        local.clear();
        for (int i = 0; i < ell; ++i) {
            if (mask & (1U << i)) {
                local.push_back(i);
            }
        }
        select_block(q, red.mean, local, ell, sub, sub_mean);
        const auto llt = checked_llt(sub, "threshold_expval");
        const double quad = sub_mean.dot(llt.solve(sub_mean));
        const double p0 = std::exp(-0.5 * quad - 0.5 * log_det_from_llt(llt));
        const double coeff = (local.size() % 2 == 0) ? 1.0 : -1.0;
        sum += coeff * std::ldexp(p0, static_cast<int>(local.size()));
    }
    return (ell % 2 == 0 ? 1.0 : -1.0) * sum;
}

double string_expval(const GaussianState& state, const OperatorString& op,
                     int locality_cutoff) {
    return op.kind == DetectionKind::Parity
               ? parity_expval(state, op.modes)
               : threshold_expval(state, op.modes, locality_cutoff);
}

double empirical_expval(const BitDataset& dataset, const std::vector<int>& modes) {
    if (dataset.rows() == 0) {
        throw InvalidArgumentError("empirical_expval: empty dataset");
    }
    if (modes.empty()) {
        return 1.0;
    }
    check_mode_subset(modes, dataset.width());
    std::vector<std::uint64_t> mask(dataset.words_per_row(), 0);
    for (int m : modes) {
        mask[m / 64] |= std::uint64_t{1} << (m % 64);
    }
    long odd = 0;
    for (long row = 0; row < dataset.rows(); ++row) {
        int parity = 0;
        for (std::size_t w = 0; w < mask.size(); ++w) {
            parity ^= std::popcount(dataset.word(row, w) & mask[w]) & 1;
        }
        odd += parity;
    }
    return static_cast<double>(dataset.rows() - 2 * odd) / static_cast<double>(dataset.rows());
}

BitMoments bit_moments(const GaussianState& state, DetectionKind kind,
                       int locality_cutoff) {
    if (kind == DetectionKind::Threshold && locality_cutoff < 2) {
        throw InvalidArgumentError("bit_moments: threshold kind needs cutoff >= 2");
    }
    const int d = state.modes;
    BitMoments moments;
    moments.mean.resize(d);
    moments.second_moment.resize(d, d);
    Vector singles(d);
    for (int i = 0; i < d; ++i) {
        singles[i] = string_expval(state, {{i}, kind}, locality_cutoff);
        moments.mean[i] = 0.5 * (1.0 - singles[i]);
        moments.second_moment(i, i) = moments.mean[i];
    }
    for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j) {
            const double pair = string_expval(state, {{i, j}, kind}, locality_cutoff);
            const double expected = 0.25 * (1.0 - singles[i] - singles[j] + pair);
            moments.second_moment(i, j) = expected;
            moments.second_moment(j, i) = expected;
        }
    }
    moments.covariance = moments.second_moment - moments.mean * moments.mean.transpose();
    for (int i = 0; i < d; ++i) {
        moments.covariance(i, i) = moments.mean[i] * (1.0 - moments.mean[i]);
    }
    return moments;
}

namespace detail {

ExpvalGrad parity_expval_grad(const GaussianState& state, const std::vector<int>& modes) {
    ExpvalGrad grad;
    if (modes.empty()) {
        return grad;
    }
    const GaussianState red = reduce(state, modes);
    const int n = static_cast<int>(red.mean.size());
    const auto llt = checked_llt(red.covariance, "parity_expval");
    const Vector v = llt.solve(red.mean);
    const double quad = red.mean.dot(v);
    grad.value = std::exp(-quad - 0.5 * log_det_from_llt(llt));
    const Matrix inv = llt.solve(Matrix::Identity(n, n));
    grad.dmu = grad.value * (-2.0) * v;
    grad.dsigma = grad.value * (v * v.transpose() - 0.5 * inv);
    return grad;
}

ExpvalGrad threshold_expval_grad(const GaussianState& state, const std::vector<int>& modes,
                                 int locality_cutoff) {
    ExpvalGrad grad;
    if (modes.empty()) {
        return grad;
    }
    const int ell = static_cast<int>(modes.size());
    if (ell > locality_cutoff) {
        throw LocalityCutoffError("threshold_expval: string length " + std::to_string(ell) +
                                  " exceeds cutoff " + std::to_string(locality_cutoff));
    }
    const GaussianState red = reduce(state, modes);
    const Matrix q = husimi(red);
    const double outer_sign = (ell % 2 == 0) ? 1.0 : -1.0;

    double sum = 1.0;
    Vector dmu = Vector::Zero(2 * ell);
    Matrix dq = Matrix::Zero(2 * ell, 2 * ell);
    std::vector<int> local;
    Matrix sub;
    Vector sub_mean;
    for (unsigned mask = 1; mask < (1U << ell); ++mask) {
        local.clear();
        for (int i = 0; i < ell; ++i) {
            if (mask & (1U << i)) {
                local.push_back(i);
            }
        }
        const int m = static_cast<int>(local.size());
        select_block(q, red.mean, local, ell, sub, sub_mean);
        const auto llt = checked_llt(sub, "threshold_expval");
        const Vector w = llt.solve(sub_mean);
        const double quad = sub_mean.dot(w);
        const double p0 = std::exp(-0.5 * quad - 0.5 * log_det_from_llt(llt));
        const double coeff =
            ((m % 2 == 0) ? 1.0 : -1.0) * std::ldexp(1.0, m);  // (-2)^{|S|}
        sum += coeff * p0;

        const Matrix inv = llt.solve(Matrix::Identity(2 * m, 2 * m));
        const Vector dmu_s = coeff * p0 * (-w);
        const Matrix dq_s = coeff * p0 * 0.5 * (w * w.transpose() - inv);
        for (int i = 0; i < m; ++i) {
            dmu[local[i]] += dmu_s[i];
            dmu[local[i] + ell] += dmu_s[i + m];
            for (int j = 0; j < m; ++j) {
                dq(local[i], local[j]) += dq_s(i, j);
                dq(local[i], local[j] + ell) += dq_s(i, j + m);
                dq(local[i] + ell, local[j]) += dq_s(i + m, j);
                dq(local[i] + ell, local[j] + ell) += dq_s(i + m, j + m);
            }
        }
    }
    grad.value = outer_sign * sum;
    grad.dmu = outer_sign * dmu;
    grad.dsigma = outer_sign * 0.5 * dq;  // dQ/dSigma = 1/2 entrywise
    return grad;
}

void scatter_expval_grad(const ExpvalGrad& grad, const std::vector<int>& modes,
                         double weight, int d, Vector& mu_bar, Matrix& sigma_bar) {
    const int ell = static_cast<int>(modes.size());
    if (ell == 0) {
        return;
    }
    for (int i = 0; i < ell; ++i) {
        mu_bar[modes[i]] += weight * grad.dmu[i];
        mu_bar[modes[i] + d] += weight * grad.dmu[i + ell];
        for (int j = 0; j < ell; ++j) {
            sigma_bar(modes[i], modes[j]) += weight * grad.dsigma(i, j);
            sigma_bar(modes[i], modes[j] + d) += weight * grad.dsigma(i, j + ell);
            sigma_bar(modes[i] + d, modes[j]) += weight * grad.dsigma(i + ell, j);
            sigma_bar(modes[i] + d, modes[j] + d) += weight * grad.dsigma(i + ell, j + ell);
        }
    }
}

}  // namespace detail

}  // namespace gbbm
