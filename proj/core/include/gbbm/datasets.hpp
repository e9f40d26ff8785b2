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

#ifndef GBBM_DATASETS_HPP
#define GBBM_DATASETS_HPP

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gbbm/rng.hpp"

namespace gbbm {

/// N x d binary sample matrix, rows packed into 64-bit words. Metadata
/// carries provenance (generator name, seed, parameters) and round-trips
/// through the text format.
class BitDataset {
public:
    BitDataset() = default;
    explicit BitDataset(int width);

    int width() const { return width_; }
    long rows() const { return rows_; }
    std::size_t words_per_row() const { return words_per_row_; }

    bool get(long row, int col) const {
        const std::uint64_t word = words_[row * words_per_row_ + col / 64];
        return (word >> (col % 64)) & 1U;
    }
    void set(long row, int col, bool value) {
        std::uint64_t& word = words_[row * words_per_row_ + col / 64];
        const std::uint64_t bit = std::uint64_t{1} << (col % 64);
        word = value ? (word | bit) : (word & ~bit);
    }
    std::uint64_t word(long row, std::size_t index) const {
        return words_[row * words_per_row_ + index];
    }

    /// Appends an all-zero row and returns its index.
    long append_row();
    void append_row(const std::vector<std::uint8_t>& bits);

    long hamming_weight(long row) const;

    std::map<std::string, std::string> metadata;

private:
    int width_ = 0;
    long rows_ = 0;
    std::size_t words_per_row_ = 0;
    std::vector<std::uint64_t> words_;
};

// Text format: optional '# key=value' header lines (the 'width' key is
// written always and required when there are no rows), then one sample per
// line as '0'/'1' characters.
BitDataset load_bit_dataset(const std::string& path);
void save_bit_dataset(const BitDataset& dataset, const std::string& path);
BitDataset parse_bit_dataset(std::istream& in);
void write_bit_dataset(const BitDataset& dataset, std::ostream& out);

/// Evolves one row-major Game-of-Life grid for `steps` updates.
std::vector<std::uint8_t> gol_evolve(std::vector<std::uint8_t> grid, int grid_rows,
                                     int grid_cols, long steps, bool wrap_edges = false);

/// Samples of a bounded-grid Game of Life after `steps` updates from a
/// uniform random start, flattened row-major; all-zero finals are redrawn.
BitDataset gol_generate(int grid_rows, int grid_cols, long steps, long n_samples,
                        RngEngine& rng, bool wrap_edges = false);

enum class IsingInit { Random, Aligned };

/// Metropolis single-spin-flip chain on a periodic 2D Ising model with a
/// checkerboard-alternating field (+h on even sites). Spins map -1 -> 0,
/// +1 -> 1 and the grid is flattened row-major.
BitDataset ising_generate(int grid_rows, int grid_cols, double coupling, double field,
                          double temperature, long warmup_steps, long thin_steps,
                          long n_samples, RngEngine& rng,
                          IsingInit init = IsingInit::Random);

/// Plug-in covariance cov_ij = E[x_i x_j] - E[x_i] E[x_j]; needs N >= 2.
Eigen::MatrixXd empirical_bit_covariance(const BitDataset& dataset);

/// Counts per Hamming weight 0..d.
std::vector<long> hamming_histogram(const BitDataset& dataset);

/// Deterministic prefix split; the first round(N * train_fraction) rows
/// become the training set.
std::pair<BitDataset, BitDataset> split_dataset(const BitDataset& dataset,
                                                double train_fraction);

}  // namespace gbbm

#endif
