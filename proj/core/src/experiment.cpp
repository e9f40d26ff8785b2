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

#include "gbbm/experiment.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gbbm/baselines.hpp"
#include "gbbm/errors.hpp"
#include "json_util.hpp"

namespace gbbm {

namespace fs = std::filesystem;
using detail::Json;

namespace {

constexpr std::uint64_t kGeneratorSalt = 0x853c49e6748fea9bULL;
constexpr std::uint64_t kEvalSalt = 0xda3e39cb94b95bdbULL;
constexpr std::uint64_t kSampleSalt = 0xaef17502108ef2d9ULL;
constexpr std::uint64_t kBaselineSalt = 0x2545f4914f6cdd1dULL;
constexpr std::uint64_t kBandwidthSalt = 0x9e6c63d0876a9a47ULL;

[[noreturn]] void config_fail(const std::string& message) { throw ConfigError(message); }

template <typename T>
T get_or(const Json& j, const char* key, T fallback) {
    if (const auto it = j.find(key); it != j.end()) {
        return it->get<T>();
    }
    return fallback;
}

ExperimentConfig::Generator parse_generator(const Json& g) {
    ExperimentConfig::Generator gen;
    gen.type = g.at("type").get<std::string>();
    gen.samples = g.at("samples").get<long>();
    gen.split = get_or(g, "split", 0.5);
    if (gen.type == "gol") {
        gen.rows = g.at("rows").get<int>();
        gen.cols = g.at("cols").get<int>();
        gen.steps = get_or<long>(g, "steps", 1000);
        gen.wrap = get_or(g, "wrap", false);
    } else if (gen.type == "ising") {
        gen.rows = g.at("rows").get<int>();
        gen.cols = g.at("cols").get<int>();
        gen.coupling = get_or(g, "J", 1.0);
        gen.field = get_or(g, "h", 0.0);
        gen.temperature = g.at("T").get<double>();
        gen.warmup = get_or<long>(g, "warmup", 1000000);
        gen.thin = get_or<long>(g, "thin", 2000);
    } else if (gen.type == "uniform") {
        gen.width = g.at("width").get<int>();
    } else {
        config_fail("unknown generator type: " + gen.type);
    }
    return gen;
}

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw InvalidArgumentError("cannot write output file: " + path.string());
    }
    out.precision(17);
    return out;
}

void write_matrix(const Matrix& m, const fs::path& path, const std::string& config_hash) {
    std::ofstream out = open_output(path);
    if (!config_hash.empty()) {
        out << "# config_hash=" << config_hash << "\n";
    }
    for (long i = 0; i < m.rows(); ++i) {
        for (long j = 0; j < m.cols(); ++j) {
            out << m(i, j) << (j + 1 == m.cols() ? "" : " ");
        }
        out << "\n";
    }
}

std::vector<double> resolve_bandwidths(const ExperimentConfig& config,
                                       const BitDataset& train) {
    if (!config.bandwidths.empty()) {
        return KernelConfig::validated(config.bandwidths).bandwidths;
    }
    if (config.use_median_heuristic) {
        RngEngine rng = seeded_rng(config.seed ^ kBandwidthSalt);
        const double base = median_heuristic(train, config.median_heuristic_pairs, rng);
        return bandwidth_ladder(base, config.median_heuristic_count);
    }
    config_fail("no kernel bandwidths: set train.bandwidths or train.median_heuristic");
}

CircuitSpec resolve_spec(const ExperimentConfig& config, const BitDataset& train) {
    const int d = config.modes > 0 ? config.modes : train.width();
    if (d != train.width()) {
        config_fail("circuit modes (" + std::to_string(d) + ") do not match dataset width (" +
                    std::to_string(train.width()) + ")");
    }
    if (config.layout == "clements") {
        return CircuitSpec::clements(d, config.layers);
    }
    if (config.layout == "graph") {
        return CircuitSpec::graph(d, config.layers, config.edges);
    }
    if (config.layout == "complete") {
        return CircuitSpec::graph(d, config.layers, complete_graph_edges(d, config.edge_seed));
    }
    if (config.layout == "chowliu") {
        return CircuitSpec::graph(d, config.layers, chow_liu_fit(train).edge_order);
    }
    config_fail("unknown circuit layout: " + config.layout);
}

struct ScoreTable {
    std::vector<double> sigmas;
    std::vector<std::vector<double>> per_rep;  // [sigma][rep]
    long locality_resampled = 0;
};

/// Independent Eq.-7 estimates per (sigma, repetition); the model side is
/// either a Gaussian state or an empirical sample set.
template <typename ValueFn>
ScoreTable score_against(const BitDataset& test, const std::vector<double>& sigmas,
                         int repetitions, long strings, DetectionKind kind,
                         int locality_cutoff, RngEngine& rng, const ValueFn& value_fn) {
    ScoreTable table;
    table.sigmas = sigmas;
    table.per_rep.resize(sigmas.size());
    for (std::size_t s = 0; s < sigmas.size(); ++s) {
        for (int rep = 0; rep < repetitions; ++rep) {
            const LossBatch batch = make_loss_batch(test, {sigmas[s]}, strings, kind,
                                                    locality_cutoff, rng);
            table.locality_resampled += batch.resampled_for_locality;
            table.per_rep[s].push_back(value_fn(batch));
        }
    }
    return table;
}

void write_scores(const ScoreTable& table, const fs::path& dir,
                  const std::string& config_hash, const std::string& prefix) {
    std::ofstream metrics = open_output(dir / (prefix + "metrics.csv"));
    if (!config_hash.empty()) {
        metrics << "# config_hash=" << config_hash << "\n";
    }
    metrics << "sigma,repetition,mmd2\n";
    for (std::size_t s = 0; s < table.sigmas.size(); ++s) {
        for (std::size_t rep = 0; rep < table.per_rep[s].size(); ++rep) {
            metrics << table.sigmas[s] << "," << rep << "," << table.per_rep[s][rep] << "\n";
        }
    }
    std::ofstream summary = open_output(dir / (prefix + "summary.csv"));
    if (!config_hash.empty()) {
        summary << "# config_hash=" << config_hash << "\n";
    }
    summary << "sigma,mean,std,locality_resampled\n";
    for (std::size_t s = 0; s < table.sigmas.size(); ++s) {
        const std::vector<double>& reps = table.per_rep[s];
        double mean = 0.0;
        for (double v : reps) {
            mean += v;
        }
        mean /= static_cast<double>(reps.size());
        double var = 0.0;
        for (double v : reps) {
            var += (v - mean) * (v - mean);
        }
        const double stddev =
            reps.size() > 1 ? std::sqrt(var / static_cast<double>(reps.size() - 1)) : 0.0;
        summary << table.sigmas[s] << "," << mean << "," << stddev << ","
                << table.locality_resampled << "\n";
    }
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& json_text) {
    Json j;
    try {
        j = Json::parse(json_text);
    } catch (const Json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    ExperimentConfig config;
    try {
        config.canonical_json = j.dump();
        config.config_hash = detail::fnv1a_hex(config.canonical_json);
        if (!j.contains("seed")) {
            config_fail("config requires an explicit top-level seed");
        }
        config.seed = j.at("seed").get<std::uint64_t>();
        config.output_dir = get_or<std::string>(j, "output_dir", ".");
        config.threads = get_or(j, "threads", 1);

        if (const auto it = j.find("dataset"); it != j.end()) {
            const Json& ds = *it;
            if (ds.contains("path")) {
                config.dataset_path = ds.at("path").get<std::string>();
            }
            if (ds.contains("test_path")) {
                config.dataset_test_path = ds.at("test_path").get<std::string>();
            }
            if (ds.contains("generator")) {
                config.generator = parse_generator(ds.at("generator"));
            }
            if (config.dataset_path.empty() && !config.generator.has_value()) {
                config_fail("dataset block needs a path or a generator");
            }
        }

        if (const auto it = j.find("circuit"); it != j.end()) {
            const Json& c = *it;
            config.layout = get_or<std::string>(c, "layout", "clements");
            config.modes = get_or(c, "modes", 0);
            config.layers = get_or(c, "layers", 1);
            config.edge_seed = get_or<std::uint64_t>(c, "edge_seed", config.seed);
            if (c.contains("edges")) {
                for (const Json& e : c.at("edges")) {
                    config.edges.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
                }
            }
            if (config.layout == "graph" && config.edges.empty()) {
                config_fail("graph layout requires an edges list");
            }
        }

        if (const auto it = j.find("train"); it != j.end()) {
            const Json& t = *it;
            config.kind = detail::kind_from_string(get_or<std::string>(t, "kind", "parity"));
            config.episodes = get_or<long>(t, "episodes", 1000);
            config.learning_rate = get_or(t, "learning_rate", 1e-3);
            config.strings_per_step = get_or<long>(t, "strings_per_step", 1024);
            if (t.contains("bandwidths")) {
                const Json& b = t.at("bandwidths");
                if (b.is_array()) {
                    config.bandwidths = b.get<std::vector<double>>();
                } else if (b.is_object() && b.contains("median_heuristic")) {
                    config.use_median_heuristic = true;
                    const Json& mh = b.at("median_heuristic");
                    config.median_heuristic_count = get_or(mh, "count", 3);
                    config.median_heuristic_pairs = get_or<long>(mh, "pair_budget", 10000);
                } else {
                    config_fail("train.bandwidths must be an array or a median_heuristic block");
                }
            }
            config.resample_strings_each_step = get_or(t, "resample_strings_each_step", true);
            config.eval_interval = get_or<long>(t, "eval_interval", 50);
            config.checkpoint_interval = get_or<long>(t, "checkpoint_interval", 0);
            config.locality_cutoff = get_or(t, "locality_cutoff", kDefaultLocalityCutoff);
            config.cosine_decay = get_or(t, "cosine_decay", false);
        }

        if (const auto it = j.find("eval"); it != j.end()) {
            const Json& e = *it;
            if (e.contains("bandwidths")) {
                config.eval_bandwidths = e.at("bandwidths").get<std::vector<double>>();
            }
            config.eval_repetitions = get_or(e, "repetitions", 5);
            config.eval_strings = get_or<long>(e, "strings_per_estimate", 4096);
            config.sampler_mode_limit = get_or(e, "sampler_mode_limit",
                                               kDefaultSamplerModeLimit);
        }
    } catch (const Json::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
    return config;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file: " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_experiment_config(buffer.str());
}

ResolvedData resolve_dataset(const ExperimentConfig& config) {
    ResolvedData data;
    if (!config.dataset_path.empty()) {
        if (!fs::exists(config.dataset_path)) {
            config_fail("dataset path does not exist: " + config.dataset_path);
        }
        data.train = load_bit_dataset(config.dataset_path);
        if (!config.dataset_test_path.empty()) {
            if (!fs::exists(config.dataset_test_path)) {
                config_fail("test dataset path does not exist: " + config.dataset_test_path);
            }
            data.test = load_bit_dataset(config.dataset_test_path);
        }
        return data;
    }
    if (!config.generator.has_value()) {
        config_fail("config has no dataset block");
    }
    const ExperimentConfig::Generator& gen = *config.generator;
    RngEngine rng = seeded_rng(config.seed ^ kGeneratorSalt);
    BitDataset all;
    if (gen.type == "gol") {
        all = gol_generate(gen.rows, gen.cols, gen.steps, gen.samples, rng, gen.wrap);
    } else if (gen.type == "ising") {
        all = ising_generate(gen.rows, gen.cols, gen.coupling, gen.field, gen.temperature,
                             gen.warmup, gen.thin, gen.samples, rng);
    } else {
        all = uniform_sample(gen.width, gen.samples, rng);
    }
    all.metadata["seed"] = std::to_string(config.seed);
    std::tie(data.train, data.test) = split_dataset(all, gen.split);
    return data;
}

void run_gen_data(const ExperimentConfig& config) {
    if (!config.generator.has_value()) {
        config_fail("gen-data requires a dataset.generator block");
    }
    ResolvedData data = resolve_dataset(config);
    fs::create_directories(config.output_dir);
    data.train.metadata["config_hash"] = config.config_hash;
    data.test.metadata["config_hash"] = config.config_hash;
    save_bit_dataset(data.train, (fs::path(config.output_dir) / "train.bits").string());
    save_bit_dataset(data.test, (fs::path(config.output_dir) / "test.bits").string());
}

void run_train(const ExperimentConfig& config, const std::string& resume_path) {
    const ResolvedData data = resolve_dataset(config);
    const CircuitSpec spec = resolve_spec(config, data.train);

    TrainConfig train_config;
    train_config.spec = spec;
    train_config.kind = config.kind;
    train_config.bandwidths = resolve_bandwidths(config, data.train);
    train_config.strings_per_step = config.strings_per_step;
    train_config.learning_rate = config.learning_rate;
    train_config.episodes = config.episodes;
    train_config.seed = config.seed;
    train_config.resample_strings_each_step = config.resample_strings_each_step;
    train_config.eval_interval = config.eval_interval;
    train_config.checkpoint_interval = config.checkpoint_interval;
    train_config.locality_cutoff = config.locality_cutoff;
    train_config.cosine_decay = config.cosine_decay;
    train_config.threads = config.threads;

    TrainerState state;
    if (!resume_path.empty()) {
        const Checkpoint resume = load_checkpoint(resume_path);
        if (resume.spec != spec) {
            config_fail("resume checkpoint was trained with a different circuit spec");
        }
        state.params = resume.params;
        state.opt = resume.opt;
        state.rng = deserialize_rng(resume.rng_state);
        state.episode = resume.episode;
    } else {
        state = init_trainer(train_config);
    }

    fs::create_directories(config.output_dir);
    const fs::path ckpt_path = fs::path(config.output_dir) / "checkpoint.gbbm";
    const auto save_state = [&](const TrainerState& s) {
        Checkpoint checkpoint;
        checkpoint.spec = spec;
        checkpoint.kind = config.kind;
        checkpoint.bandwidths = train_config.bandwidths;
        checkpoint.params = s.params;
        checkpoint.opt = s.opt;
        checkpoint.rng_state = serialize_rng(s.rng);
        checkpoint.episode = s.episode;
        checkpoint.config_hash = config.config_hash;
        save_checkpoint(checkpoint, ckpt_path.string());
    };

    TrainHistory history;
    try {
        history = train(train_config, data.train, state, save_state);
    } catch (const Error&) {
        // A checkpoint of the last good state was already written.
        throw;
    }
    std::ofstream out = open_output(fs::path(config.output_dir) / "history.csv");
    write_history_csv(history, out, config.config_hash);
}

MmdComponents mmd2_components_empirical(const BitDataset& samples, const LossBatch& batch) {
    MmdComponents out;
    out.per_bandwidth = Vector::Zero(batch.num_bandwidths);
    std::vector<long> counts(batch.num_bandwidths, 0);
    for (std::size_t i = 0; i < batch.strings.size(); ++i) {
        const double value = empirical_expval(samples, batch.strings[i].modes);
        const double residual = batch.targets[static_cast<long>(i)] - value;
        out.per_bandwidth[batch.bandwidth_index[i]] += residual * residual;
        ++counts[batch.bandwidth_index[i]];
    }
    for (int b = 0; b < batch.num_bandwidths; ++b) {
        if (counts[b] > 0) {
            out.per_bandwidth[b] /= static_cast<double>(counts[b]);
        }
    }
    out.total = out.per_bandwidth.mean();
    return out;
}

void run_eval(const ExperimentConfig& config, const std::string& checkpoint_path,
              const std::string& test_path, const std::string& samples_path) {
    if (checkpoint_path.empty() == samples_path.empty()) {
        config_fail("eval needs exactly one of a checkpoint or a sample file");
    }
    BitDataset test;
    if (!test_path.empty()) {
        test = load_bit_dataset(test_path);
    } else {
        ResolvedData data = resolve_dataset(config);
        test = data.test.rows() > 0 ? std::move(data.test) : std::move(data.train);
    }

    fs::create_directories(config.output_dir);
    RngEngine rng = seeded_rng(config.seed ^ kEvalSalt);

    if (!samples_path.empty()) {
        const BitDataset samples = load_bit_dataset(samples_path);
        if (samples.width() != test.width()) {
            config_fail("sample width " + std::to_string(samples.width()) +
                        " does not match test width " + std::to_string(test.width()));
        }
        std::vector<double> sigmas = config.eval_bandwidths;
        if (sigmas.empty()) {
            sigmas = resolve_bandwidths(config, test);
        }
        const ScoreTable table = score_against(
            test, sigmas, config.eval_repetitions, config.eval_strings,
            DetectionKind::Parity, config.locality_cutoff, rng,
            [&](const LossBatch& batch) {
                return mmd2_components_empirical(samples, batch).total;
            });
        write_scores(table, config.output_dir, config.config_hash, "");
        write_matrix(empirical_bit_covariance(samples),
                     fs::path(config.output_dir) / "cov_model.txt", config.config_hash);
        write_matrix(empirical_bit_covariance(test),
                     fs::path(config.output_dir) / "cov_data.txt", config.config_hash);
        return;
    }

    const Checkpoint checkpoint = load_checkpoint(checkpoint_path);
    if (checkpoint.spec.modes != test.width()) {
        config_fail("checkpoint modes (" + std::to_string(checkpoint.spec.modes) +
                    ") do not match test width (" + std::to_string(test.width()) + ")");
    }
    const GaussianState state = forward(checkpoint.spec, checkpoint.params);
    std::vector<double> sigmas = config.eval_bandwidths;
    if (sigmas.empty()) {
        sigmas = checkpoint.bandwidths;
    }
    if (sigmas.empty()) {
        sigmas = resolve_bandwidths(config, test);
    }
    const ScoreTable table = score_against(
        test, sigmas, config.eval_repetitions, config.eval_strings, checkpoint.kind,
        config.locality_cutoff, rng, [&](const LossBatch& batch) {
            return mmd2_components(state, batch, config.locality_cutoff, config.threads)
                .total;
        });
    write_scores(table, config.output_dir, config.config_hash, "");
    write_matrix(bit_moments(state, checkpoint.kind, config.locality_cutoff).covariance,
                 fs::path(config.output_dir) / "cov_model.txt", config.config_hash);
    write_matrix(empirical_bit_covariance(test),
                 fs::path(config.output_dir) / "cov_data.txt", config.config_hash);
}

void run_sample(const std::string& checkpoint_path, long n_samples,
                const std::string& out_path, const std::string& kind_override,
                int mode_limit) {
    const Checkpoint checkpoint = load_checkpoint(checkpoint_path);
    const DetectionKind kind = kind_override.empty()
                                   ? checkpoint.kind
                                   : detail::kind_from_string(kind_override);
    const GaussianState state = forward(checkpoint.spec, checkpoint.params);
    RngEngine rng = seeded_rng(std::hash<std::string>{}(checkpoint.rng_state) ^ kSampleSalt);
    BitDataset samples = kind == DetectionKind::Parity
                             ? sample_parity(state, n_samples, rng, mode_limit)
                             : sample_threshold(state, n_samples, rng, mode_limit);
    samples.metadata["config_hash"] = checkpoint.config_hash;
    samples.metadata["detection"] = detail::kind_to_string(kind);
    save_bit_dataset(samples, out_path);
}

void run_baseline(const ExperimentConfig& config, const std::string& baseline_kind,
                  long baseline_samples) {
    const ResolvedData data = resolve_dataset(config);
    const BitDataset& train = data.train;
    const BitDataset& test = data.test.rows() > 0 ? data.test : data.train;
    fs::create_directories(config.output_dir);
    RngEngine rng = seeded_rng(config.seed ^ kBaselineSalt);

    BitDataset samples;
    std::string prefix;
    if (baseline_kind == "chowliu") {
        prefix = "baseline_chowliu_";
        const TreeModel model = chow_liu_fit(train);
        save_tree_model(model,
                        (fs::path(config.output_dir) / "baseline_chowliu_model.json").string());
        Json circuit;
        circuit["modes"] = model.width;
        circuit["layers"] = 1;
        circuit["layout"] = "graph";
        Json edges = Json::array();
        for (const Edge& e : model.edge_order) {
            edges.push_back({e.a, e.b});
        }
        circuit["edges"] = edges;
        std::ofstream out =
            open_output(fs::path(config.output_dir) / "baseline_chowliu_edges.json");
        out << circuit.dump(2) << "\n";
        samples = tree_sample(model, baseline_samples, rng);
    } else if (baseline_kind == "uniform") {
        prefix = "baseline_uniform_";
        samples = uniform_sample(train.width(), baseline_samples, rng);
    } else {
        config_fail("unknown baseline kind: " + baseline_kind);
    }
    samples.metadata["config_hash"] = config.config_hash;
    save_bit_dataset(samples,
                     (fs::path(config.output_dir) / (prefix + "samples.bits")).string());

    std::vector<double> sigmas = config.eval_bandwidths;
    if (sigmas.empty()) {
        sigmas = resolve_bandwidths(config, train);
    }
    const ScoreTable table = score_against(
        test, sigmas, config.eval_repetitions, config.eval_strings, DetectionKind::Parity,
        config.locality_cutoff, rng, [&](const LossBatch& batch) {
            return mmd2_components_empirical(samples, batch).total;
        });
    write_scores(table, config.output_dir, config.config_hash, prefix);
}

std::string run_inspect(const std::string& checkpoint_path) {
    return describe_checkpoint(load_checkpoint(checkpoint_path));
}

}  // namespace gbbm
