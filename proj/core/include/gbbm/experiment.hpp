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

#ifndef GBBM_EXPERIMENT_HPP
#define GBBM_EXPERIMENT_HPP

#include <optional>
#include <string>
#include <vector>

#include "gbbm/ansatz.hpp"
#include "gbbm/checkpoint.hpp"
#include "gbbm/datasets.hpp"
#include "gbbm/observables.hpp"
#include "gbbm/sampler.hpp"
#include "gbbm/training.hpp"

namespace gbbm {

/// Parsed experiment configuration (one JSON file, explicit seeds). See the
/// README for the schema.
struct ExperimentConfig {
    std::string canonical_json;
    std::string config_hash;

    std::uint64_t seed = 0;
    std::string output_dir = ".";
    int threads = 1;

    // Dataset: either file paths or a generator block.
    std::string dataset_path;
    std::string dataset_test_path;
    struct Generator {
        std::string type;  // "gol" | "ising" | "uniform"
        int rows = 0;
        int cols = 0;
        int width = 0;  // uniform only
        long steps = 0;
        bool wrap = false;
        double coupling = 1.0;
        double field = 0.0;
        double temperature = 1.0;
        long warmup = 0;
        long thin = 1;
        long samples = 0;
        double split = 0.5;
    };
    std::optional<Generator> generator;

    // Circuit.
    std::string layout = "clements";  // clements | graph | complete | chowliu
    int modes = 0;
    int layers = 1;
    std::vector<Edge> edges;
    std::uint64_t edge_seed = 0;

    // Training.
    DetectionKind kind = DetectionKind::Parity;
    long episodes = 1000;
    double learning_rate = 1e-3;
    long strings_per_step = 1024;
    std::vector<double> bandwidths;
    bool use_median_heuristic = false;
    int median_heuristic_count = 3;
    long median_heuristic_pairs = 10000;
    bool resample_strings_each_step = true;
    long eval_interval = 50;
    long checkpoint_interval = 0;
    int locality_cutoff = kDefaultLocalityCutoff;
    bool cosine_decay = false;

    // Evaluation.
    std::vector<double> eval_bandwidths;
    int eval_repetitions = 5;
    long eval_strings = 4096;
    int sampler_mode_limit = kDefaultSamplerModeLimit;
};

ExperimentConfig parse_experiment_config(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::string& path);

/// Train/test data resolved from the config (files or generator).
struct ResolvedData {
    BitDataset train;
    BitDataset test;
};
ResolvedData resolve_dataset(const ExperimentConfig& config);

/// gen-data: writes train.bits and test.bits into the output directory.
void run_gen_data(const ExperimentConfig& config);

/// train: writes checkpoint.gbbm and history.csv; optionally resumes.
void run_train(const ExperimentConfig& config, const std::string& resume_path = "");

/// eval: scores a checkpoint (or an external sample file) against the test
/// set; writes metrics.csv, summary.csv and the covariance diagnostics.
void run_eval(const ExperimentConfig& config, const std::string& checkpoint_path,
              const std::string& test_path = "", const std::string& samples_path = "");

/// sample: draws n samples from a checkpointed model with the exact sampler.
void run_sample(const std::string& checkpoint_path, long n_samples,
                const std::string& out_path, const std::string& kind_override = "",
                int mode_limit = kDefaultSamplerModeLimit);

/// baseline: fit/sample/score a classical comparison model in one pass.
void run_baseline(const ExperimentConfig& config, const std::string& baseline_kind,
                  long baseline_samples = 100000);

std::string run_inspect(const std::string& checkpoint_path);

/// MMD^2 components of an empirical sample set against batch targets (used
/// to score baselines and external sample files).
MmdComponents mmd2_components_empirical(const BitDataset& samples, const LossBatch& batch);

}  // namespace gbbm

#endif
