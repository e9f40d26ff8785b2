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

#include "gbbm/datasets.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "gbbm/errors.hpp"

namespace gbbm {

BitDataset::BitDataset(int width) : width_(width) {
    if (width < 1) {
        throw InvalidArgumentError("BitDataset: width must be >= 1");
    }
    words_per_row_ = static_cast<std::size_t>(width + 63) / 64;
}

long BitDataset::append_row() {
    words_.resize(words_.size() + words_per_row_, 0);
    return rows_++;
}

void BitDataset::append_row(const std::vector<std::uint8_t>& bits) {
    if (static_cast<int>(bits.size()) != width_) {
        throw InvalidArgumentError("append_row: row width mismatch");
    }
    const long row = append_row();
    for (int i = 0; i < width_; ++i) {
        if (bits[i]) {
            set(row, i, true);
        }
    }
}

long BitDataset::hamming_weight(long row) const {
    long weight = 0;
    for (std::size_t w = 0; w < words_per_row_; ++w) {
        weight += std::popcount(word(row, w));
    }
    return weight;
}

BitDataset parse_bit_dataset(std::istream& in) {
    std::map<std::string, std::string> metadata;
    BitDataset dataset;
    bool sized = false;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        if (line[0] == '#') {
            std::size_t start = 1;
            while (start < line.size() && line[start] == ' ') {
                ++start;
            }
            const std::size_t eq = line.find('=', start);
            if (eq != std::string::npos) {
                metadata[line.substr(start, eq - start)] = line.substr(eq + 1);
            }
            continue;
        }
        if (!sized) {
            dataset = BitDataset(static_cast<int>(line.size()));
            sized = true;
            if (auto it = metadata.find("width"); it != metadata.end()) {
                if (std::stol(it->second) != static_cast<long>(line.size())) {
                    throw ParseError("row width " + std::to_string(line.size()) +
                                         " contradicts width header " + it->second,
                                     line_no);
                }
            }
        }
        if (static_cast<int>(line.size()) != dataset.width()) {
            throw ParseError("ragged row: expected " + std::to_string(dataset.width()) +
                                 " characters, got " + std::to_string(line.size()),
                             line_no);
        }
        const long row = dataset.append_row();
        for (int i = 0; i < dataset.width(); ++i) {
            if (line[i] == '1') {
                dataset.set(row, i, true);
            } else if (line[i] != '0') {
                throw ParseError(std::string("unexpected character '") + line[i] + "'", line_no);
            }
        }
    }
    if (!sized) {
        const auto it = metadata.find("width");
        if (it == metadata.end()) {
            throw ParseError("empty dataset without a width header", line_no);
        }
        dataset = BitDataset(static_cast<int>(std::stol(it->second)));
    }
    dataset.metadata = std::move(metadata);
    return dataset;
}

void write_bit_dataset(const BitDataset& dataset, std::ostream& out) {
    out << "# width=" << dataset.width() << "\n";
    for (const auto& [key, value] : dataset.metadata) {
        if (key != "width") {
            out << "# " << key << "=" << value << "\n";
        }
    }
    std::string line(dataset.width(), '0');
    for (long row = 0; row < dataset.rows(); ++row) {
        for (int i = 0; i < dataset.width(); ++i) {
            line[i] = dataset.get(row, i) ? '1' : '0';
        }
        out << line << "\n";
    }
}

BitDataset load_bit_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidArgumentError("cannot open dataset file: " + path);
    }
    return parse_bit_dataset(in);
}

void save_bit_dataset(const BitDataset& dataset, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw InvalidArgumentError("cannot write dataset file: " + path);
    }
    write_bit_dataset(dataset, out);
}

namespace {

using Grid = std::vector<std::uint8_t>;  // row-major live/dead cells

int live_neighbors(const Grid& grid, int rows, int cols, int r, int c, bool wrap) {
    int count = 0;
    for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
            if (dr == 0 && dc == 0) {
                continue;
            }
            int rr = r + dr;
            int cc = c + dc;
            if (wrap) {
                rr = (rr + rows) % rows;
                cc = (cc + cols) % cols;
            } else if (rr < 0 || rr >= rows || cc < 0 || cc >= cols) {
                continue;
            }
            count += grid[rr * cols + cc];
        }
    }
    return count;
}

void gol_step(const Grid& grid, Grid& next, int rows, int cols, bool wrap) {
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const int n = live_neighbors(grid, rows, cols, r, c, wrap);
            const bool alive = grid[r * cols + c] != 0;
            next[r * cols + c] = alive ? (n == 2 || n == 3) : (n == 3);
        }
    }
}

bool all_zero(const Grid& grid) {
    for (std::uint8_t cell : grid) {
        if (cell) {
            return false;
        }
    }
    return true;
}

}  // namespace

std::vector<std::uint8_t> gol_evolve(std::vector<std::uint8_t> grid, int grid_rows,
                                     int grid_cols, long steps, bool wrap_edges) {
    if (static_cast<int>(grid.size()) != grid_rows * grid_cols) {
        throw InvalidArgumentError("gol_evolve: grid size does not match geometry");
    }
    Grid next(grid.size());
    for (long t = 0; t < steps; ++t) {
        gol_step(grid, next, grid_rows, grid_cols, wrap_edges);
        grid.swap(next);
    }
    return grid;
}

BitDataset gol_generate(int grid_rows, int grid_cols, long steps, long n_samples,
                        RngEngine& rng, bool wrap_edges) {
    if (grid_rows < 1 || grid_cols < 1 || steps < 0 || n_samples < 0) {
        throw InvalidArgumentError("gol_generate: bad geometry or counts");
    }
    const int cells = grid_rows * grid_cols;
    BitDataset dataset(cells);
    dataset.metadata["generator"] = "gol";
    dataset.metadata["params"] = "rows=" + std::to_string(grid_rows) +
                                 ";cols=" + std::to_string(grid_cols) +
                                 ";steps=" + std::to_string(steps) +
                                 ";boundary=" + (wrap_edges ? "wrap" : "dead");
    Grid grid(cells);
    for (long s = 0; s < n_samples; ++s) {
        do {
            for (int i = 0; i < cells; ++i) {
                grid[i] = bernoulli(rng, 0.5) ? 1 : 0;
            }
            grid = gol_evolve(std::move(grid), grid_rows, grid_cols, steps, wrap_edges);
        } while (all_zero(grid));
        const long row = dataset.append_row();
        for (int i = 0; i < cells; ++i) {
            if (grid[i]) {
                dataset.set(row, i, true);
            }
        }
    }
    return dataset;
}

BitDataset ising_generate(int grid_rows, int grid_cols, double coupling, double field,
                          double temperature, long warmup_steps, long thin_steps,
                          long n_samples, RngEngine& rng, IsingInit init) {
    if (grid_rows < 1 || grid_cols < 1 || temperature <= 0.0 || thin_steps < 1) {
        throw InvalidArgumentError("ising_generate: bad geometry or parameters");
    }
    const int cells = grid_rows * grid_cols;
    std::vector<int> spins(cells);
    for (int i = 0; i < cells; ++i) {
        spins[i] = init == IsingInit::Aligned ? 1 : (bernoulli(rng, 0.5) ? 1 : -1);
    }
    const auto site_field = [&](int r, int c) {
        return ((r + c) % 2 == 0) ? field : -field;
    };
    const auto metropolis_step = [&]() {
        const int site = static_cast<int>(uniform_index(rng, cells));
        const int r = site / grid_cols;
        const int c = site % grid_cols;
        const int up = spins[((r - 1 + grid_rows) % grid_rows) * grid_cols + c];
        const int down = spins[((r + 1) % grid_rows) * grid_cols + c];
        const int left = spins[r * grid_cols + (c - 1 + grid_cols) % grid_cols];
        const int right = spins[r * grid_cols + (c + 1) % grid_cols];
        const double delta =
            2.0 * spins[site] * (coupling * (up + down + left + right) + site_field(r, c));
        if (delta <= 0.0 || uniform_double(rng) < std::exp(-delta / temperature)) {
            spins[site] = -spins[site];
        }
    };

    for (long t = 0; t < warmup_steps; ++t) {
        metropolis_step();
    }
    BitDataset dataset(cells);
    dataset.metadata["generator"] = "ising";
    std::ostringstream params;
    params << "rows=" << grid_rows << ";cols=" << grid_cols << ";J=" << coupling
           << ";h=" << field << ";T=" << temperature << ";warmup=" << warmup_steps
           << ";thin=" << thin_steps << ";field_pattern=checkerboard";
    dataset.metadata["params"] = params.str();
    for (long s = 0; s < n_samples; ++s) {
        for (long t = 0; t < thin_steps; ++t) {
            metropolis_step();
        }
        const long row = dataset.append_row();
        for (int i = 0; i < cells; ++i) {
            if (spins[i] > 0) {
                dataset.set(row, i, true);
            }
        }
    }
    return dataset;
}

Eigen::MatrixXd empirical_bit_covariance(const BitDataset& dataset) {
    if (dataset.rows() < 2) {
        throw InvalidArgumentError("empirical_bit_covariance: need at least 2 samples");
    }
    const int d = dataset.width();
    const long n = dataset.rows();
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
    Eigen::MatrixXd second = Eigen::MatrixXd::Zero(d, d);
    std::vector<int> ones;
    ones.reserve(d);
    for (long row = 0; row < n; ++row) {
        ones.clear();
        for (int i = 0; i < d; ++i) {
            if (dataset.get(row, i)) {
                ones.push_back(i);
            }
        }
        for (int i : ones) {
            mean[i] += 1.0;
            for (int j : ones) {
                second(i, j) += 1.0;
            }
        }
    }
    mean /= static_cast<double>(n);
    second /= static_cast<double>(n);
    return second - mean * mean.transpose();
}

std::vector<long> hamming_histogram(const BitDataset& dataset) {
    std::vector<long> histogram(dataset.width() + 1, 0);
    for (long row = 0; row < dataset.rows(); ++row) {
        ++histogram[dataset.hamming_weight(row)];
    }
    return histogram;
}

std::pair<BitDataset, BitDataset> split_dataset(const BitDataset& dataset,
                                                double train_fraction) {
    if (train_fraction < 0.0 || train_fraction > 1.0) {
        throw InvalidArgumentError("split_dataset: fraction must be in [0, 1]");
    }
    const long n_train = std::lround(static_cast<double>(dataset.rows()) * train_fraction);
    BitDataset train(dataset.width()), test(dataset.width());
    train.metadata = dataset.metadata;
    test.metadata = dataset.metadata;
    train.metadata["split"] = "train";
    test.metadata["split"] = "test";
    for (long row = 0; row < dataset.rows(); ++row) {
        BitDataset& target = row < n_train ? train : test;
        const long out = target.append_row();
        for (int i = 0; i < dataset.width(); ++i) {
            if (dataset.get(row, i)) {
                target.set(out, i, true);
            }
        }
    }
    return {std::move(train), std::move(test)};
}

}  // namespace gbbm
