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

#ifndef GBBM_DETAIL_WALSH_HADAMARD_HPP
#define GBBM_DETAIL_WALSH_HADAMARD_HPP

#include <cstddef>
#include <vector>

namespace gbbm::detail {

/// In-place fast Walsh-Hadamard transform (unnormalized):
/// out[x] = sum_s (-1)^{popcount(x & s)} in[s]. Size must be a power of two.
template <typename T>
void fwht_in_place(std::vector<T>& values) {
    const std::size_t n = values.size();
    for (std::size_t len = 1; len < n; len <<= 1) {
        for (std::size_t block = 0; block < n; block += len << 1) {
            for (std::size_t j = block; j < block + len; ++j) {
                const T a = values[j];
                const T b = values[j + len];
                values[j] = a + b;
                values[j + len] = a - b;
            }
        }
    }
}

}  // namespace gbbm::detail

#endif
