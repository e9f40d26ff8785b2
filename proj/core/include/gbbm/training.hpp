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

#ifndef GBBM_TRAINING_HPP
#define GBBM_TRAINING_HPP

#include <functional>
#include <utility>
#include <vector>

#include "gbbm/ansatz.hpp"
#include "gbbm/datasets.hpp"
#include "gbbm/observables.hpp"

namespace gbbm {

/// One batch of sampled operator strings with precomputed target
/// expectations and the bandwidth group each string was drawn from.
struct LossBatch {
    std::vector<OperatorString> strings;
    Vector targets;
    std::vector<int> bandwidth_index;
    int num_bandwidths = 1;
    long resampled_for_locality = 0;  // strings redrawn against the cutoff
};

/// Samples strings_total strings split evenly across the bandwidths (the
/// remainder goes to the earlier groups), redrawing any subset longer than
/// the locality cutoff, and computes the empirical targets once.
LossBatch make_loss_batch(const BitDataset& dataset, const std::vector<double>& bandwidths,
                          long strings_total, DetectionKind kind, int locality_cutoff,
                          RngEngine& rng);

/// Median of squared Hamming distances over pair_budget random sample
/// pairs, divided by two. Throws ZeroDistanceError when the median is zero.
double median_heuristic(const BitDataset& dataset, long pair_budget, RngEngine& rng);

/// Doubling bandwidth set {base, 2 base, 4 base, ...} of the given size.
std::vector<double> bandwidth_ladder(double base, int count);

struct MmdComponents {
    Vector per_bandwidth;
    double total = 0.0;
};

/// Mean squared target-model expectation gap per bandwidth group, averaged
/// with equal weight across groups.
MmdComponents mmd2_components(const GaussianState& state, const LossBatch& batch,
                              int locality_cutoff = kDefaultLocalityCutoff,
                              int threads = 1);
MmdComponents mmd2_components(const CircuitSpec& spec, const ModelParams& params,
                              const LossBatch& batch,
                              int locality_cutoff = kDefaultLocalityCutoff,
                              int threads = 1);
double mmd2(const CircuitSpec& spec, const ModelParams& params, const LossBatch& batch,
            int locality_cutoff = kDefaultLocalityCutoff, int threads = 1);

/// Loss and its gradient with respect to every trainable parameter, by
/// reverse-mode differentiation through the expectation formulas, the state
/// evolution and the interferometer construction.
std::pair<double, Vector> loss_and_gradient(const CircuitSpec& spec,
                                            const ModelParams& params,
                                            const LossBatch& batch,
                                            int locality_cutoff = kDefaultLocalityCutoff,
                                            int threads = 1);

/// Central-difference fallback used to validate the analytic gradient.
Vector finite_difference_gradient(const CircuitSpec& spec, const ModelParams& params,
                                  const LossBatch& batch, double step = 1e-5,
                                  int locality_cutoff = kDefaultLocalityCutoff);

struct AdamConfig {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

struct AdamState {
    Vector first_moment;
    Vector second_moment;
    long step = 0;
};

/// Standard bias-corrected Adam update. Throws TrainingDivergedError on
/// non-finite gradient entries.
void adam_step(Vector& params, const Vector& gradient, AdamState& state,
               double learning_rate, const AdamConfig& config = {});

struct TrainConfig {
    CircuitSpec spec;
    DetectionKind kind = DetectionKind::Parity;
    std::vector<double> bandwidths;
    long strings_per_step = 1024;
    double learning_rate = 1e-3;
    long episodes = 1000;
    std::uint64_t seed = 0;
    bool resample_strings_each_step = true;
    long eval_interval = 50;
    int locality_cutoff = kDefaultLocalityCutoff;
    bool cosine_decay = false;
    int threads = 1;
    long checkpoint_interval = 0;  // 0: checkpoint only at the end
    AdamConfig adam;
};

struct HistoryRow {
    long episode = 0;
    double seconds = 0.0;
    Vector per_bandwidth;
    double total = 0.0;
};

struct TrainHistory {
    std::vector<double> bandwidths;
    std::vector<HistoryRow> rows;
};

/// Everything that evolves during training; checkpointable.
struct TrainerState {
    ModelParams params;
    AdamState opt;
    RngEngine rng;
    long episode = 0;
};

/// Fresh trainer: parameters from init_params(seed), optimizer zeroed, loop
/// rng derived deterministically from the seed.
TrainerState init_trainer(const TrainConfig& config);

/// Runs episodes [state.episode + 1, config.episodes]. Deterministic for a
/// fixed seed; on a non-finite loss the last good state is handed to the
/// callback and TrainingDivergedError is thrown.
TrainHistory train(const TrainConfig& config, const BitDataset& dataset,
                   TrainerState& state,
                   const std::function<void(const TrainerState&)>& checkpoint_cb = {});

void write_history_csv(const TrainHistory& history, std::ostream& out,
                       const std::string& config_hash = "");

}  // namespace gbbm

#endif
