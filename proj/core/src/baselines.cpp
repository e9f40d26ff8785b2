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

#include "gbbm/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <numeric>

#include <nlohmann/json.hpp>

#include "gbbm/errors.hpp"

namespace gbbm {

namespace {

using Json = nlohmann::json;

struct PairCounts {
    long joint[2][2] = {{0, 0}, {0, 0}};
};

PairCounts count_pair(const BitDataset& dataset, int i, int j) {
    PairCounts counts;
    for (long row = 0; row < dataset.rows(); ++row) {
        ++counts.joint[dataset.get(row, i)][dataset.get(row, j)];
    }
    return counts;
}

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) {
            return false;
        }
        parent[b] = a;
        return true;
    }
};

}  // namespace

double mutual_information(const BitDataset& dataset, int i, int j) {
    if (dataset.rows() == 0) {
        throw InvalidArgumentError("mutual_information: empty dataset");
    }
    if (i < 0 || i >= dataset.width() || j < 0 || j >= dataset.width()) {
        throw InvalidArgumentError("mutual_information: index out of range");
    }
    const double n = static_cast<double>(dataset.rows());
    if (i == j) {
        long ones = 0;
        for (long row = 0; row < dataset.rows(); ++row) {
            ones += dataset.get(row, i);
        }
        const double p = static_cast<double>(ones) / n;
        return -xlogx(p) - xlogx(1.0 - p);
    }
    const PairCounts counts = count_pair(dataset, i, j);
    double mi = 0.0;
    const double pi1 = static_cast<double>(counts.joint[1][0] + counts.joint[1][1]) / n;
    const double pj1 = static_cast<double>(counts.joint[0][1] + counts.joint[1][1]) / n;
    const double marg_i[2] = {1.0 - pi1, pi1};
    const double marg_j[2] = {1.0 - pj1, pj1};
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            const double pab = static_cast<double>(counts.joint[a][b]) / n;
            if (pab > 0.0 && marg_i[a] > 0.0 && marg_j[b] > 0.0) {
                mi += pab * std::log(pab / (marg_i[a] * marg_j[b]));
            }
        }
    }
    return std::max(mi, 0.0);
}

TreeModel chow_liu_fit(const BitDataset& dataset, double smoothing) {
    const int d = dataset.width();
    if (d < 2) {
        throw InvalidArgumentError("chow_liu_fit: need at least 2 variables");
    }
    if (dataset.rows() < 2) {
        throw InvalidArgumentError("chow_liu_fit: need at least 2 samples");
    }
    if (smoothing < 0.0) {
        throw InvalidArgumentError("chow_liu_fit: smoothing must be >= 0");
    }

    struct Weighted {
        double mi;
        int a;
        int b;
    };
    std::vector<Weighted> candidates;
    candidates.reserve(static_cast<std::size_t>(d) * (d - 1) / 2);
    for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j) {
            candidates.push_back({mutual_information(dataset, i, j), i, j});
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const Weighted& x, const Weighted& y) {
        if (x.mi != y.mi) {
            return x.mi > y.mi;
        }
        return std::pair{x.a, x.b} < std::pair{y.a, y.b};
    });

    UnionFind forest(d);
    std::vector<std::vector<int>> adjacency(d);
    int placed = 0;
    for (const Weighted& w : candidates) {
        if (forest.unite(w.a, w.b)) {
            adjacency[w.a].push_back(w.b);
            adjacency[w.b].push_back(w.a);
            if (++placed == d - 1) {
                break;
            }
        }
    }
    for (std::vector<int>& neighbors : adjacency) {
        std::sort(neighbors.begin(), neighbors.end());
    }

    TreeModel model;
    model.width = d;
    model.root = 0;
    model.smoothing = smoothing;
    model.parent.assign(d, -1);
    model.p1_given_parent0.assign(d, 0.0);
    model.p1_given_parent1.assign(d, 0.0);

    std::vector<bool> seen(d, false);
    std::deque<int> queue{0};
    seen[0] = true;
    while (!queue.empty()) {
        const int node = queue.front();
        queue.pop_front();
        for (int next : adjacency[node]) {
            if (!seen[next]) {
                seen[next] = true;
                model.parent[next] = node;
                model.edge_order.push_back({node, next});
                queue.push_back(next);
            }
        }
    }

    const double n = static_cast<double>(dataset.rows());
    long root_ones = 0;
    for (long row = 0; row < dataset.rows(); ++row) {
        root_ones += dataset.get(row, model.root);
    }
    model.root_p1 = (static_cast<double>(root_ones) + smoothing) / (n + 2.0 * smoothing);
    for (const Edge& edge : model.edge_order) {
        const PairCounts counts = count_pair(dataset, edge.a, edge.b);
        const double n0 = static_cast<double>(counts.joint[0][0] + counts.joint[0][1]);
        const double n1 = static_cast<double>(counts.joint[1][0] + counts.joint[1][1]);
        model.p1_given_parent0[edge.b] =
            (static_cast<double>(counts.joint[0][1]) + smoothing) / (n0 + 2.0 * smoothing);
        model.p1_given_parent1[edge.b] =
            (static_cast<double>(counts.joint[1][1]) + smoothing) / (n1 + 2.0 * smoothing);
    }
    return model;
}

BitDataset tree_sample(const TreeModel& model, long n_samples, RngEngine& rng) {
    BitDataset dataset(model.width);
    dataset.metadata["generator"] = "chow_liu_tree";
    for (long s = 0; s < n_samples; ++s) {
        const long row = dataset.append_row();
        if (bernoulli(rng, model.root_p1)) {
            dataset.set(row, model.root, true);
        }
        for (const Edge& edge : model.edge_order) {
            const double p1 = dataset.get(row, edge.a) ? model.p1_given_parent1[edge.b]
                                                       : model.p1_given_parent0[edge.b];
            if (bernoulli(rng, p1)) {
                dataset.set(row, edge.b, true);
            }
        }
    }
    return dataset;
}

BitDataset uniform_sample(int d, long n_samples, RngEngine& rng) {
    BitDataset dataset(d);
    dataset.metadata["generator"] = "uniform";
    for (long s = 0; s < n_samples; ++s) {
        const long row = dataset.append_row();
        for (int i = 0; i < d; ++i) {
            if (bernoulli(rng, 0.5)) {
                dataset.set(row, i, true);
            }
        }
    }
    return dataset;
}

double tree_log_likelihood(const TreeModel& model, const BitDataset& dataset) {
    if (dataset.width() != model.width) {
        throw InvalidArgumentError("tree_log_likelihood: width mismatch");
    }
    double total = 0.0;
    for (long row = 0; row < dataset.rows(); ++row) {
        const bool root_bit = dataset.get(row, model.root);
        total += std::log(root_bit ? model.root_p1 : 1.0 - model.root_p1);
        for (const Edge& edge : model.edge_order) {
            const double p1 = dataset.get(row, edge.a) ? model.p1_given_parent1[edge.b]
                                                       : model.p1_given_parent0[edge.b];
            total += std::log(dataset.get(row, edge.b) ? p1 : 1.0 - p1);
        }
    }
    return total;
}

void save_tree_model(const TreeModel& model, const std::string& path) {
    Json j;
    j["format"] = "gbbm-tree";
    j["version"] = 1;
    j["width"] = model.width;
    j["root"] = model.root;
    j["smoothing"] = model.smoothing;
    j["root_p1"] = model.root_p1;
    j["parent"] = model.parent;
    Json edges = Json::array();
    for (const Edge& e : model.edge_order) {
        edges.push_back({e.a, e.b});
    }
    j["edges"] = edges;
    j["p1_given_parent0"] = model.p1_given_parent0;
    j["p1_given_parent1"] = model.p1_given_parent1;
    std::ofstream out(path);
    if (!out) {
        throw InvalidArgumentError("cannot write tree model: " + path);
    }
    out << j.dump(2) << "\n";
}

TreeModel load_tree_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidArgumentError("cannot open tree model: " + path);
    }
    Json j = Json::parse(in, nullptr, /*allow_exceptions=*/true);
    if (j.value("format", "") != "gbbm-tree") {
        throw InvalidArgumentError("not a tree model file: " + path);
    }
    TreeModel model;
    model.width = j.at("width").get<int>();
    model.root = j.at("root").get<int>();
    model.smoothing = j.at("smoothing").get<double>();
    model.root_p1 = j.at("root_p1").get<double>();
    model.parent = j.at("parent").get<std::vector<int>>();
    for (const Json& e : j.at("edges")) {
        model.edge_order.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
    }
    model.p1_given_parent0 = j.at("p1_given_parent0").get<std::vector<double>>();
    model.p1_given_parent1 = j.at("p1_given_parent1").get<std::vector<double>>();
    return model;
}

}  // namespace gbbm
