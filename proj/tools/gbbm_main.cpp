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

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "gbbm/errors.hpp"
#include "gbbm/experiment.hpp"

namespace {

// Exit codes: 0 success, 2 config error, 3 numerical failure, 4 resource
// limit, 1 anything else.
int run(int argc, char** argv) {
    CLI::App app{"Gaussian bosonic Born machine engine"};
    app.require_subcommand(1);

    std::string config_path;
    std::string checkpoint_path;
    std::string resume_path;
    std::string dataset_path;
    std::string samples_path;
    std::string out_path;
    std::string kind;
    std::string baseline_kind;
    long n_samples = 1000;
    long baseline_samples = 100000;
    int mode_limit = gbbm::kDefaultSamplerModeLimit;
    int threads = 0;

    CLI::App* gen = app.add_subcommand("gen-data", "Generate train/test dataset files");
    gen->add_option("--config", config_path, "Experiment config (JSON)")->required();

    CLI::App* train = app.add_subcommand("train", "Train a model; writes checkpoint and history");
    train->add_option("--config", config_path, "Experiment config (JSON)")->required();
    train->add_option("--resume", resume_path, "Checkpoint to resume from");
    train->add_option("--threads", threads, "Worker threads (default from config)");

    CLI::App* eval = app.add_subcommand("eval", "Score a checkpoint or sample file on a test set");
    eval->add_option("--config", config_path, "Experiment config (JSON)")->required();
    eval->add_option("--checkpoint", checkpoint_path, "Trained checkpoint");
    eval->add_option("--samples", samples_path, "External sample file to score instead");
    eval->add_option("--dataset", dataset_path, "Test dataset (defaults to the config's)");
    eval->add_option("--threads", threads, "Worker threads (default from config)");

    CLI::App* sample = app.add_subcommand("sample", "Draw samples from a trained model");
    sample->add_option("--checkpoint", checkpoint_path, "Trained checkpoint")->required();
    sample->add_option("--n", n_samples, "Number of samples")->required();
    sample->add_option("--out", out_path, "Output dataset file")->required();
    sample->add_option("--kind", kind, "parity|threshold (default: checkpoint's)");
    sample->add_option("--mode-limit", mode_limit, "Exact-sampler mode limit");

    CLI::App* baseline = app.add_subcommand("baseline", "Fit, sample and score a baseline");
    baseline->add_option("--config", config_path, "Experiment config (JSON)")->required();
    baseline->add_option("--kind", baseline_kind, "chowliu|uniform")->required();
    baseline->add_option("--samples", baseline_samples, "Baseline sample count");

    CLI::App* inspect = app.add_subcommand("inspect", "Print a checkpoint summary");
    inspect->add_option("--checkpoint", checkpoint_path, "Checkpoint file")->required();

    CLI11_PARSE(app, argc, argv);

    const auto load_config = [&] {
        gbbm::ExperimentConfig config = gbbm::load_experiment_config(config_path);
        if (threads > 0) {
            config.threads = threads;
        }
        return config;
    };

    if (gen->parsed()) {
        gbbm::run_gen_data(load_config());
    } else if (train->parsed()) {
        gbbm::run_train(load_config(), resume_path);
    } else if (eval->parsed()) {
        gbbm::run_eval(load_config(), checkpoint_path, dataset_path, samples_path);
    } else if (sample->parsed()) {
        gbbm::run_sample(checkpoint_path, n_samples, out_path, kind, mode_limit);
    } else if (baseline->parsed()) {
        gbbm::run_baseline(load_config(), baseline_kind, baseline_samples);
    } else if (inspect->parsed()) {
        std::cout << gbbm::run_inspect(checkpoint_path);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const gbbm::ResourceLimitError& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return 4;
    } catch (const gbbm::StateInvalidError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const gbbm::NumericalConsistencyError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const gbbm::TrainingDivergedError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const gbbm::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const gbbm::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const gbbm::InvalidArgumentError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
