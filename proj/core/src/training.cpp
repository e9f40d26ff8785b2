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

#include "gbbm/training.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <numbers>
#include <ostream>
#include <thread>

#include "gbbm/detail/forward_pass.hpp"
#include "gbbm/detail/walsh_hadamard.hpp"
#include "gbbm/errors.hpp"

namespace gbbm {

namespace {

constexpr std::uint64_t kLoopRngSalt = 0x9e3779b97f4a7c15ULL;
constexpr std::uint64_t kFixedBatchSalt = 0xd1b54a32d192ed03ULL;
constexpr long kMaxLocalityRedraws = 100000;

/// Exact signed empirical sums for every subset at once: the
/// Walsh-Hadamard transform of the outcome histogram. Worth building when
/// 2^d work beats one dataset scan per string.
class TargetTable {
public:
    explicit TargetTable(const BitDataset& dataset) : n_(dataset.rows()) {
        counts_.assign(std::size_t{1} << dataset.width(), 0);
        for (long row = 0; row < dataset.rows(); ++row) {
            ++counts_[dataset.word(row, 0)];
        }
        detail::fwht_in_place(counts_);
    }

    double expval(const std::vector<int>& modes) const {
        std::uint64_t mask = 0;
        for (int m : modes) {
            mask |= std::uint64_t{1} << m;
        }
        return static_cast<double>(counts_[mask]) / static_cast<double>(n_);
    }

    static bool worthwhile(const BitDataset& dataset, long num_strings) {
        if (dataset.width() > 24) {
            return false;
        }
        const double table_cost =
            std::ldexp(static_cast<double>(dataset.width() + 1), dataset.width());
        const double scan_cost = static_cast<double>(num_strings) *
                                 static_cast<double>(dataset.rows()) *
                                 static_cast<double>(dataset.words_per_row());
        return table_cost < scan_cost;
    }

private:
    std::vector<long> counts_;
    long n_;
};

std::vector<long> group_sizes(long total, int groups) {
    std::vector<long> sizes(groups, total / groups);
    for (long i = 0; i < total % groups; ++i) {
        ++sizes[i];
    }
    return sizes;
}

/// Per-string expectation values (and adjoints when grads != nullptr),
/// parallelized over fixed blocks so results do not depend on the thread
/// count.
void evaluate_strings(const GaussianState& state, const LossBatch& batch,
                      int locality_cutoff, int threads, std::vector<double>& values,
                      std::vector<detail::ExpvalGrad>* grads) {
    const long m = static_cast<long>(batch.strings.size());
    values.resize(m);
    if (grads != nullptr) {
        grads->resize(m);
    }
    const auto eval_one = [&](long i) {
        const OperatorString& op = batch.strings[i];
        if (grads != nullptr) {
            (*grads)[i] = op.kind == DetectionKind::Parity
                              ? detail::parity_expval_grad(state, op.modes)
                              : detail::threshold_expval_grad(state, op.modes,
                                                              locality_cutoff);
            values[i] = (*grads)[i].value;
        } else {
            values[i] = string_expval(state, op, locality_cutoff);
        }
    };
    if (threads <= 1 || m < 64) {
        for (long i = 0; i < m; ++i) {
            eval_one(i);
        }
        return;
    }
    std::atomic<long> next{0};
    constexpr long kBlock = 32;
    std::atomic<bool> failed{false};
    auto worker = [&]() {
        for (;;) {
            const long begin = next.fetch_add(kBlock);
            if (begin >= m || failed.load()) {
                return;
            }
            const long end = std::min(begin + kBlock, m);
            for (long i = begin; i < end; ++i) {
                try {
                    eval_one(i);
                } catch (...) {
                    failed.store(true);
                    return;
                }
            }
        }
    };
    std::vector<std::thread> pool;
    const long n_threads = std::min<long>(threads, (m + kBlock - 1) / kBlock);
    pool.reserve(n_threads);
    for (long t = 0; t < n_threads; ++t) {
        pool.emplace_back(worker);
    }
    for (std::thread& t : pool) {
        t.join();
    }
    if (failed.load()) {
        // Re-raise from the failing string on the calling thread.
        for (long i = 0; i < m; ++i) {
            eval_one(i);
        }
    }
}

std::vector<long> bandwidth_counts(const LossBatch& batch) {
    std::vector<long> counts(batch.num_bandwidths, 0);
    for (int b : batch.bandwidth_index) {
        ++counts[b];
    }
    return counts;
}

MmdComponents reduce_components(const LossBatch& batch, const std::vector<double>& values) {
    MmdComponents out;
    out.per_bandwidth = Vector::Zero(batch.num_bandwidths);
    const std::vector<long> counts = bandwidth_counts(batch);
    for (std::size_t i = 0; i < batch.strings.size(); ++i) {
        const double residual = batch.targets[static_cast<long>(i)] - values[i];
        out.per_bandwidth[batch.bandwidth_index[i]] += residual * residual;
    }
    for (int b = 0; b < batch.num_bandwidths; ++b) {
        if (counts[b] > 0) {
            out.per_bandwidth[b] /= static_cast<double>(counts[b]);
        }
    }
    out.total = out.per_bandwidth.mean();
    return out;
}

std::pair<MmdComponents, Vector> loss_gradient_components(const CircuitSpec& spec,
                                                          const ModelParams& params,
                                                          const LossBatch& batch,
                                                          int locality_cutoff,
                                                          int threads) {
    check_params(spec, params);
    detail::ForwardTape tape;
    const GaussianState state = detail::run_forward(spec, params, &tape);

    std::vector<double> values;
    std::vector<detail::ExpvalGrad> grads;
    evaluate_strings(state, batch, locality_cutoff, threads, values, &grads);

    const MmdComponents components = reduce_components(batch, values);
    const std::vector<long> counts = bandwidth_counts(batch);

    const int d = spec.modes;
    Vector mu_bar = Vector::Zero(2 * d);
    Matrix sigma_bar = Matrix::Zero(2 * d, 2 * d);
    for (std::size_t i = 0; i < batch.strings.size(); ++i) {
        const double residual = batch.targets[static_cast<long>(i)] - values[i];
        const double weight = -2.0 * residual /
                              (static_cast<double>(batch.num_bandwidths) *
                               static_cast<double>(counts[batch.bandwidth_index[i]]));
        detail::scatter_expval_grad(grads[i], batch.strings[i].modes, weight, d, mu_bar,
                                    sigma_bar);
    }
    Vector grad = detail::backward_params(spec, params, tape, std::move(mu_bar),
                                          std::move(sigma_bar));
    return {components, std::move(grad)};
}

}  // namespace

LossBatch make_loss_batch(const BitDataset& dataset, const std::vector<double>& bandwidths,
                          long strings_total, DetectionKind kind, int locality_cutoff,
                          RngEngine& rng) {
    if (bandwidths.empty()) {
        throw InvalidArgumentError("make_loss_batch: need at least one bandwidth");
    }
    if (strings_total < static_cast<long>(bandwidths.size())) {
        throw InvalidArgumentError("make_loss_batch: need at least one string per bandwidth");
    }
    if (dataset.rows() == 0) {
        throw InvalidArgumentError("make_loss_batch: empty dataset");
    }
    const int d = dataset.width();
    LossBatch batch;
    batch.num_bandwidths = static_cast<int>(bandwidths.size());
    batch.strings.reserve(strings_total);
    batch.bandwidth_index.reserve(strings_total);
    const std::vector<long> sizes = group_sizes(strings_total, batch.num_bandwidths);
    for (int b = 0; b < batch.num_bandwidths; ++b) {
        for (long s = 0; s < sizes[b]; ++s) {
            std::vector<int> subset = sample_subset(bandwidths[b], d, rng);
            long redraws = 0;
            while (static_cast<int>(subset.size()) > locality_cutoff) {
                if (++redraws > kMaxLocalityRedraws) {
                    throw LocalityCutoffError(
                        "make_loss_batch: could not draw a subset within the locality "
                        "cutoff; increase sigma or the cutoff");
                }
                subset = sample_subset(bandwidths[b], d, rng);
            }
            batch.resampled_for_locality += redraws;
            batch.strings.push_back({std::move(subset), kind});
            batch.bandwidth_index.push_back(b);
        }
    }
    batch.targets.resize(static_cast<long>(batch.strings.size()));
    // Both target routes are exact integer sums; pick the cheaper one.
    if (TargetTable::worthwhile(dataset, static_cast<long>(batch.strings.size()))) {
        const TargetTable table(dataset);
        for (std::size_t i = 0; i < batch.strings.size(); ++i) {
            batch.targets[static_cast<long>(i)] = table.expval(batch.strings[i].modes);
        }
    } else {
        for (std::size_t i = 0; i < batch.strings.size(); ++i) {
            batch.targets[static_cast<long>(i)] =
                empirical_expval(dataset, batch.strings[i].modes);
        }
    }
    return batch;
}

double median_heuristic(const BitDataset& dataset, long pair_budget, RngEngine& rng) {
    if (dataset.rows() < 2) {
        throw InvalidArgumentError("median_heuristic: need at least 2 samples");
    }
    if (pair_budget < 1) {
        throw InvalidArgumentError("median_heuristic: pair budget must be positive");
    }
    std::vector<long> distances(pair_budget);
    for (long p = 0; p < pair_budget; ++p) {
        const long i = static_cast<long>(uniform_index(rng, dataset.rows()));
        long j = i;
        while (j == i) {
            j = static_cast<long>(uniform_index(rng, dataset.rows()));
        }
        long dist = 0;
        for (std::size_t w = 0; w < dataset.words_per_row(); ++w) {
            dist += std::popcount(dataset.word(i, w) ^ dataset.word(j, w));
        }
        distances[p] = dist;
    }
    std::sort(distances.begin(), distances.end());
    const std::size_t mid = distances.size() / 2;
    const double median =
        distances.size() % 2 == 1
            ? static_cast<double>(distances[mid])
            : 0.5 * static_cast<double>(distances[mid - 1] + distances[mid]);
    if (median == 0.0) {
        throw ZeroDistanceError(
            "median pairwise distance is zero; set the kernel bandwidths manually");
    }
    return median / 2.0;
}

std::vector<double> bandwidth_ladder(double base, int count) {
    if (base <= 0.0 || count < 1) {
        throw InvalidArgumentError("bandwidth_ladder: need base > 0 and count >= 1");
    }
    std::vector<double> out(count);
    for (int i = 0; i < count; ++i) {
        out[i] = std::ldexp(base, i);
    }
    return out;
}

MmdComponents mmd2_components(const GaussianState& state, const LossBatch& batch,
                              int locality_cutoff, int threads) {
    std::vector<double> values;
    evaluate_strings(state, batch, locality_cutoff, threads, values, nullptr);
    return reduce_components(batch, values);
}

MmdComponents mmd2_components(const CircuitSpec& spec, const ModelParams& params,
                              const LossBatch& batch, int locality_cutoff, int threads) {
    return mmd2_components(forward(spec, params), batch, locality_cutoff, threads);
}

double mmd2(const CircuitSpec& spec, const ModelParams& params, const LossBatch& batch,
            int locality_cutoff, int threads) {
    return mmd2_components(spec, params, batch, locality_cutoff, threads).total;
}

std::pair<double, Vector> loss_and_gradient(const CircuitSpec& spec,
                                            const ModelParams& params,
                                            const LossBatch& batch, int locality_cutoff,
                                            int threads) {
    auto [components, grad] =
        loss_gradient_components(spec, params, batch, locality_cutoff, threads);
    return {components.total, std::move(grad)};
}

Vector finite_difference_gradient(const CircuitSpec& spec, const ModelParams& params,
                                  const LossBatch& batch, double step,
                                  int locality_cutoff) {
    check_params(spec, params);
    Vector grad(params.values.size());
    ModelParams perturbed = params;
    for (long i = 0; i < params.values.size(); ++i) {
        perturbed.values[i] = params.values[i] + step;
        const double up = mmd2(spec, perturbed, batch, locality_cutoff);
        perturbed.values[i] = params.values[i] - step;
        const double down = mmd2(spec, perturbed, batch, locality_cutoff);
        perturbed.values[i] = params.values[i];
        grad[i] = (up - down) / (2.0 * step);
    }
    return grad;
}

void adam_step(Vector& params, const Vector& gradient, AdamState& state,
               double learning_rate, const AdamConfig& config) {
    if (gradient.size() != params.size()) {
        throw InvalidArgumentError("adam_step: gradient length mismatch");
    }
    if (!gradient.allFinite()) {
        throw TrainingDivergedError("adam_step: non-finite gradient");
    }
    if (state.first_moment.size() == 0) {
        state.first_moment = Vector::Zero(params.size());
        state.second_moment = Vector::Zero(params.size());
    }
    ++state.step;
    state.first_moment = config.beta1 * state.first_moment + (1.0 - config.beta1) * gradient;
    state.second_moment = config.beta2 * state.second_moment +
                          (1.0 - config.beta2) * gradient.cwiseProduct(gradient);
    const double correction1 = 1.0 - std::pow(config.beta1, state.step);
    const double correction2 = 1.0 - std::pow(config.beta2, state.step);
    const Eigen::ArrayXd mean_hat = state.first_moment.array() / correction1;
    const Eigen::ArrayXd var_hat = state.second_moment.array() / correction2;
    params.array() -= learning_rate * mean_hat / (var_hat.sqrt() + config.epsilon);
}

TrainerState init_trainer(const TrainConfig& config) {
    TrainerState state;
    state.params = init_params(config.spec, config.seed);
    state.opt.first_moment = Vector::Zero(total_param_count(config.spec));
    state.opt.second_moment = Vector::Zero(total_param_count(config.spec));
    state.rng = seeded_rng(config.seed ^ kLoopRngSalt);
    state.episode = 0;
    return state;
}

TrainHistory train(const TrainConfig& config, const BitDataset& dataset,
                   TrainerState& state,
                   const std::function<void(const TrainerState&)>& checkpoint_cb) {
    if (dataset.width() != config.spec.modes) {
        throw InvalidArgumentError("train: dataset width " + std::to_string(dataset.width()) +
                                   " does not match circuit modes " +
                                   std::to_string(config.spec.modes));
    }
    if (config.episodes < 0 || config.learning_rate <= 0.0) {
        throw InvalidArgumentError("train: need episodes >= 0 and learning_rate > 0");
    }
    check_params(config.spec, state.params);

    TrainHistory history;
    history.bandwidths = config.bandwidths;
    const auto start = std::chrono::steady_clock::now();
    const auto seconds_now = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    };

    LossBatch fixed_batch;
    if (!config.resample_strings_each_step) {
        RngEngine batch_rng = seeded_rng(config.seed ^ kFixedBatchSalt);
        fixed_batch = make_loss_batch(dataset, config.bandwidths, config.strings_per_step,
                                      config.kind, config.locality_cutoff, batch_rng);
    }

    if (config.episodes == 0 || state.episode >= config.episodes) {
        // Evaluation-only call: one history row at the current parameters.
        RngEngine eval_rng = state.rng;
        const LossBatch batch =
            config.resample_strings_each_step
                ? make_loss_batch(dataset, config.bandwidths, config.strings_per_step,
                                  config.kind, config.locality_cutoff, eval_rng)
                : fixed_batch;
        const MmdComponents components = mmd2_components(
            config.spec, state.params, batch, config.locality_cutoff, config.threads);
        history.rows.push_back(
            {state.episode, seconds_now(), components.per_bandwidth, components.total});
        if (checkpoint_cb) {
            checkpoint_cb(state);
        }
        return history;
    }

    TrainerState last_good = state;
    for (long episode = state.episode + 1; episode <= config.episodes; ++episode) {
        try {
            LossBatch resampled;
            if (config.resample_strings_each_step) {
                resampled = make_loss_batch(dataset, config.bandwidths,
                                            config.strings_per_step, config.kind,
                                            config.locality_cutoff, state.rng);
            }
            const LossBatch& batch =
                config.resample_strings_each_step ? resampled : fixed_batch;
            auto [components, gradient] = loss_gradient_components(
                config.spec, state.params, batch, config.locality_cutoff, config.threads);
            if (!std::isfinite(components.total)) {
                throw TrainingDivergedError("train: non-finite loss at episode " +
                                            std::to_string(episode));
            }
            double lr = config.learning_rate;
            if (config.cosine_decay) {
                lr *= 0.5 * (1.0 + std::cos(std::numbers::pi * static_cast<double>(episode) /
                                            static_cast<double>(config.episodes)));
            }
            adam_step(state.params.values, gradient, state.opt, lr, config.adam);
            state.episode = episode;
            if (episode == 1 || episode == config.episodes ||
                (config.eval_interval > 0 && episode % config.eval_interval == 0)) {
                // The loss recorded for an episode is the one computed at its
                // pre-update parameters.
                history.rows.push_back(
                    {episode, seconds_now(), components.per_bandwidth, components.total});
            }
        } catch (const Error&) {
            if (checkpoint_cb) {
                checkpoint_cb(last_good);
            }
            throw;
        }
        last_good = state;
        if (checkpoint_cb && config.checkpoint_interval > 0 &&
            episode % config.checkpoint_interval == 0) {
            checkpoint_cb(state);
        }
    }
    if (checkpoint_cb) {
        checkpoint_cb(state);
    }
    return history;
}

void write_history_csv(const TrainHistory& history, std::ostream& out,
                       const std::string& config_hash) {
    if (!config_hash.empty()) {
        out << "# config_hash=" << config_hash << "\n";
    }
    out << "episode,seconds";
    for (double sigma : history.bandwidths) {
        std::ostringstream label;  // short label regardless of stream precision
        label << sigma;
        out << ",loss_sigma_" << label.str();
    }
    out << ",total\n";
    out.precision(17);
    for (const HistoryRow& row : history.rows) {
        out << row.episode << "," << row.seconds;
        for (long b = 0; b < row.per_bandwidth.size(); ++b) {
            out << "," << row.per_bandwidth[b];
        }
        out << "," << row.total << "\n";
    }
}

}  // namespace gbbm
