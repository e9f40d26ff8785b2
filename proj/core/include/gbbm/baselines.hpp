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

#ifndef GBBM_BASELINES_HPP
#define GBBM_BASELINES_HPP

#include <string>
#include <vector>

#include "gbbm/ansatz.hpp"
#include "gbbm/datasets.hpp"
#include "gbbm/rng.hpp"

namespace gbbm {

/// Tree-structured Bayesian network fit with the Chow-Liu algorithm, rooted
/// at variable 0. Conditionals carry Laplace smoothing so every entry stays
/// strictly inside (0, 1).
struct TreeModel {
    int width = 0;
    int root = 0;
    std::vector<int> parent;      // -1 at the root
    std::vector<Edge> edge_order; // (parent, child) in breadth-first order
    double root_p1 = 0.5;
    std::vector<double> p1_given_parent0;  // indexed by child node
    std::vector<double> p1_given_parent1;
    double smoothing = 1.0;
};

/// Plug-in mutual information of bits (i, j) in nats; MI(X, X) = H(X).
double mutual_information(const BitDataset& dataset, int i, int j);

/// Maximum-weight spanning tree on pairwise mutual information
/// (lexicographic tie-break), rooted at variable 0, with smoothed
/// maximum-likelihood conditionals. The edge list is ordered by a
/// breadth-first traversal from the root and is directly usable as a Graph
/// circuit layout.
TreeModel chow_liu_fit(const BitDataset& dataset, double smoothing = 1.0);

/// Ancestral sampling, root to leaves.
BitDataset tree_sample(const TreeModel& model, long n_samples, RngEngine& rng);

/// IID fair bits.
BitDataset uniform_sample(int d, long n_samples, RngEngine& rng);

double tree_log_likelihood(const TreeModel& model, const BitDataset& dataset);

void save_tree_model(const TreeModel& model, const std::string& path);
TreeModel load_tree_model(const std::string& path);

}  // namespace gbbm

#endif
