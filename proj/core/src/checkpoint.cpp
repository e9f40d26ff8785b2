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

#include "gbbm/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "gbbm/errors.hpp"
#include "json_util.hpp"

namespace gbbm {

namespace {

constexpr char kMagic[8] = {'G', 'B', 'B', 'M', 'C', 'K', 'P', 'T'};

void write_u64(std::ostream& out, std::uint64_t value) {
    char bytes[8];
    for (int i = 0; i < 8; ++i) {
        bytes[i] = static_cast<char>((value >> (8 * i)) & 0xff);
    }
    out.write(bytes, 8);
}

std::uint64_t read_u64(std::istream& in) {
    char bytes[8];
    in.read(bytes, 8);
    std::uint64_t value = 0;
    for (int i = 0; i < 8; ++i) {
        value |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[i])) << (8 * i);
    }
    return value;
}

void write_doubles(std::ostream& out, const Vector& values) {
    for (long i = 0; i < values.size(); ++i) {
        write_u64(out, std::bit_cast<std::uint64_t>(values[i]));
    }
}

Vector read_doubles(std::istream& in, long count) {
    Vector values(count);
    for (long i = 0; i < count; ++i) {
        values[i] = std::bit_cast<double>(read_u64(in));
    }
    return values;
}

}  // namespace

namespace detail {

Json spec_to_json(const CircuitSpec& spec) {
    Json j;
    j["modes"] = spec.modes;
    j["layers"] = spec.layers;
    if (spec.layout == Layout::Clements) {
        j["layout"] = "clements";
    } else {
        j["layout"] = "graph";
        Json edges = Json::array();
        for (const Edge& e : spec.edges) {
            edges.push_back({e.a, e.b});
        }
        j["edges"] = edges;
    }
    return j;
}

CircuitSpec spec_from_json(const Json& j) {
    const int modes = j.at("modes").get<int>();
    const int layers = j.at("layers").get<int>();
    const std::string layout = j.at("layout").get<std::string>();
    if (layout == "clements") {
        return CircuitSpec::clements(modes, layers);
    }
    if (layout == "graph") {
        std::vector<Edge> edges;
        for (const Json& e : j.at("edges")) {
            edges.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
        }
        return CircuitSpec::graph(modes, layers, std::move(edges));
    }
    throw ConfigError("unknown circuit layout: " + layout);
}

std::string kind_to_string(DetectionKind kind) {
    return kind == DetectionKind::Parity ? "parity" : "threshold";
}

DetectionKind kind_from_string(const std::string& name) {
    if (name == "parity") {
        return DetectionKind::Parity;
    }
    if (name == "threshold") {
        return DetectionKind::Threshold;
    }
    throw ConfigError("unknown detection kind: " + name);
}

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    std::ostringstream out;
    out << std::hex << hash;
    return out.str();
}

}  // namespace detail

void save_checkpoint(const Checkpoint& checkpoint, const std::string& path) {
    detail::Json header;
    header["spec"] = detail::spec_to_json(checkpoint.spec);
    header["kind"] = detail::kind_to_string(checkpoint.kind);
    header["bandwidths"] = checkpoint.bandwidths;
    header["episode"] = checkpoint.episode;
    header["rng_state"] = checkpoint.rng_state;
    header["adam_step"] = checkpoint.opt.step;
    header["config_hash"] = checkpoint.config_hash;
    header["param_count"] = checkpoint.params.values.size();
    header["moment_count"] = checkpoint.opt.first_moment.size();
    const std::string header_text = header.dump();

    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw InvalidArgumentError("cannot write checkpoint: " + path);
    }
    out.write(kMagic, sizeof(kMagic));
    write_u64(out, checkpoint.version);
    write_u64(out, header_text.size());
    out.write(header_text.data(), static_cast<std::streamsize>(header_text.size()));
    write_doubles(out, checkpoint.params.values);
    write_doubles(out, checkpoint.opt.first_moment);
    write_doubles(out, checkpoint.opt.second_moment);
    if (!out) {
        throw InvalidArgumentError("short write while saving checkpoint: " + path);
    }
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InvalidArgumentError("cannot open checkpoint: " + path);
    }
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw ConfigError("not a checkpoint file: " + path);
    }
    Checkpoint checkpoint;
    checkpoint.version = static_cast<std::uint32_t>(read_u64(in));
    if (checkpoint.version != 1) {
        throw ConfigError("unrecognized checkpoint version " +
                          std::to_string(checkpoint.version));
    }
    const std::uint64_t header_len = read_u64(in);
    std::string header_text(header_len, '\0');
    in.read(header_text.data(), static_cast<std::streamsize>(header_len));
    if (!in) {
        throw ConfigError("truncated checkpoint header: " + path);
    }
    const detail::Json header = detail::Json::parse(header_text);
    checkpoint.spec = detail::spec_from_json(header.at("spec"));
    checkpoint.kind = detail::kind_from_string(header.at("kind").get<std::string>());
    checkpoint.bandwidths = header.value("bandwidths", std::vector<double>{});
    checkpoint.episode = header.at("episode").get<long>();
    checkpoint.rng_state = header.at("rng_state").get<std::string>();
    checkpoint.config_hash = header.value("config_hash", "");
    const long param_count = header.at("param_count").get<long>();
    const long moment_count = header.at("moment_count").get<long>();
    if (param_count != total_param_count(checkpoint.spec)) {
        throw ConfigError("checkpoint parameter count " + std::to_string(param_count) +
                          " does not match its circuit spec (" +
                          std::to_string(total_param_count(checkpoint.spec)) + ")");
    }
    checkpoint.params.values = read_doubles(in, param_count);
    checkpoint.opt.first_moment = read_doubles(in, moment_count);
    checkpoint.opt.second_moment = read_doubles(in, moment_count);
    checkpoint.opt.step = header.at("adam_step").get<long>();
    if (!in) {
        throw ConfigError("truncated checkpoint payload: " + path);
    }
    return checkpoint;
}

std::string describe_checkpoint(const Checkpoint& checkpoint) {
    std::ostringstream out;
    out << "checkpoint version " << checkpoint.version << "\n";
    out << "  circuit: d=" << checkpoint.spec.modes << " layers=" << checkpoint.spec.layers
        << " layout="
        << (checkpoint.spec.layout == Layout::Clements
                ? "clements"
                : "graph(" + std::to_string(checkpoint.spec.edges.size()) + " edges)")
        << "\n";
    out << "  detection: " << detail::kind_to_string(checkpoint.kind) << "\n";
    out << "  parameters: " << checkpoint.params.values.size() << "\n";
    out << "  episode: " << checkpoint.episode << " (adam step " << checkpoint.opt.step
        << ")\n";
    out << "  bandwidths:";
    for (double sigma : checkpoint.bandwidths) {
        out << " " << sigma;
    }
    out << "\n";
    if (!checkpoint.config_hash.empty()) {
        out << "  config_hash: " << checkpoint.config_hash << "\n";
    }
    if (checkpoint.params.values.size() > 0) {
        out << "  param stats: min=" << checkpoint.params.values.minCoeff()
            << " max=" << checkpoint.params.values.maxCoeff()
            << " |mean|=" << checkpoint.params.values.cwiseAbs().mean() << "\n";
    }
    return out.str();
}

}  // namespace gbbm
