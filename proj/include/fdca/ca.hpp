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

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "fdca/rule.hpp"

namespace fdca {

/// Dense index of an n-cell configuration: its base-10 reading, leftmost
/// cell most significant. Fits 64 bits for n <= 19.
using ConfigIndex = uint64_t;

constexpr int kMaxCells = 19;

/// 10^e for e <= 19.
uint64_t pow10_u64(int e);

/// A fixed-length sequence of decimal cells. Value type, at most 19 cells.
class Configuration {
public:
    Configuration() = default;
    explicit Configuration(int n);
    Configuration(std::initializer_list<uint8_t> cells);

    static Configuration from_string(std::string_view digits);
    static Configuration from_index(ConfigIndex idx, int n);

    int size() const { return n_; }
    uint8_t operator[](int i) const { return cells_[static_cast<size_t>(i)]; }
    uint8_t& operator[](int i) { return cells_[static_cast<size_t>(i)]; }
    std::span<const uint8_t> cells() const { return {cells_.data(), static_cast<size_t>(n_)}; }

    ConfigIndex index() const;
    std::string to_string() const;

    friend bool operator==(const Configuration& a, const Configuration& b) {
        return a.n_ == b.n_ &&
               std::equal(a.cells_.begin(), a.cells_.begin() + a.n_, b.cells_.begin());
    }

private:
    std::array<uint8_t, kMaxCells> cells_{};
    int n_ = 0;
};

inline ConfigIndex index_of(const Configuration& c) { return c.index(); }
inline Configuration config_of(ConfigIndex idx, int n) { return Configuration::from_index(idx, n); }

/// Global evolution of an n-cell space under one rule, null boundary.
/// Holds the expanded rule table; steps are table lookups.
class GlobalMap {
public:
    GlobalMap(const FdcaRule& rule, int n);

    const FdcaRule& rule() const { return rule_; }
    int n() const { return n_; }
    const RuleTable& table() const { return table_; }

    Configuration step(const Configuration& c) const;
    Configuration evolve(const Configuration& c, uint64_t t) const;

    /// cells[0..n) advanced in place.
    void step_inplace(uint8_t* cells) const;

private:
    FdcaRule rule_;
    RuleTable table_;
    int n_;
};

Configuration step(const FdcaRule& rule, const Configuration& c);
Configuration evolve(const FdcaRule& rule, const Configuration& c, uint64_t t);

} // namespace fdca
