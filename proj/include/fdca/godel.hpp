// Copyright 2026-present the fdca project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "fdca/clustering.hpp"
#include "fdca/csv.hpp"

namespace fdca {

/// Per-column transform applied by preprocess_scale: the recorded number
/// of decimal places scales the column to integers, then a shift makes the
/// column non-negative.
struct ColumnTransform {
    std::string name;
    int decimals = 0;
    long long shift = 0;
};

struct ScaledDataset {
    std::vector<std::vector<int64_t>> rows; // non-negative integers
    std::vector<ColumnTransform> transforms;
    size_t cols() const { return transforms.size(); }
};

/// Scales every selected column by 10^(max decimal places in that column)
/// — exact, digits are taken from the cell text — and shifts columns that
/// contain negatives up to zero. Non-numeric cells raise a row/column
/// addressed ParseError.
ScaledDataset preprocess_scale(const CsvTable& table, const std::vector<size_t>& columns);

/// First k primes, 2, 3, 5, ...
std::vector<unsigned long> first_primes(size_t k);

/// Product over the first k primes p_i of p_i^exps[i]. The empty exponent
/// vector is rejected; all-zero exponents give 1.
mpz_class godel_encode(std::span<const int64_t> exps);

/// Exponent vector by repeated division by the first k primes. A leftover
/// factor > 1 means g is not an encoding over k features.
std::vector<int64_t> godel_decode(const mpz_class& g, size_t k);

/// Equal-width decimal view of a set of big integers: every number is
/// rendered in base 10 and left-zero-padded to a common width, then cut
/// left to right into splits of split_size digits (the last split may be
/// shorter unless pad_to_multiple forces the width up to a multiple).
struct DigitFrame {
    std::vector<std::string> rows; // all exactly `width` characters
    size_t width = 0;
    int split_size = 6;
    bool pad_to_multiple = false;

    size_t split_count() const {
        return width == 0 ? 0 : (width + static_cast<size_t>(split_size) - 1) / static_cast<size_t>(split_size);
    }
    size_t split_offset(size_t i) const { return i * static_cast<size_t>(split_size); }
    size_t split_width(size_t i) const {
        const size_t off = split_offset(i);
        return std::min(static_cast<size_t>(split_size), width - off);
    }
    std::string_view split(size_t row, size_t i) const {
        return std::string_view(rows[row]).substr(split_offset(i), split_width(i));
    }
};

struct GodelFrame {
    std::vector<mpz_class> godel;
    DigitFrame digits;
};

/// digit_cap guards against encodings too wide to process; 0 disables the
/// guard.
GodelFrame build_frame(const std::vector<mpz_class>& numbers, int split_size,
                       bool pad_to_multiple, size_t digit_cap = 4096);

/// Sorts the numbers, cuts at the k-1 largest consecutive gaps (ties go to
/// the leftmost gap) and labels each contiguous run as one cluster.
Clustering sort_godel_clusters(const std::vector<mpz_class>& numbers, uint32_t k);

} // namespace fdca
