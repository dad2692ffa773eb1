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
#include <string>
#include <string_view>

namespace fdca {

/// Rule Min Term: a neighborhood triple (x, y, z) of decimal states packed
/// as 100*x + 10*y + z. A local rule assigns one next state to each of the
/// 1000 RMTs.
struct Rmt {
    uint16_t value = 0;

    Rmt() = default;
    explicit constexpr Rmt(uint16_t v) : value(v) {}
    static constexpr Rmt from_xyz(int x, int y, int z) {
        return Rmt(static_cast<uint16_t>(100 * x + 10 * y + z));
    }

    constexpr int x() const { return value / 100; }      // left neighbor
    constexpr int y() const { return (value / 10) % 10; } // self
    constexpr int z() const { return value % 10; }        // right neighbor

    friend constexpr bool operator==(Rmt a, Rmt b) { return a.value == b.value; }
    friend constexpr auto operator<=>(Rmt a, Rmt b) { return a.value <=> b.value; }
};

/// A 3-neighborhood 10-state first-degree rule, defined by eight base-10
/// parameters <c0,...,c7>:
///
///   R(x,y,z) = (c0*x*y*z + c1*x*y + c2*x*z + c3*y*z
///               + c4*x + c5*y + c6*z + c7) mod 10
class FdcaRule {
public:
    FdcaRule() = default;
    explicit FdcaRule(const std::array<uint8_t, 8>& params);

    /// Accepts "<0,0,0,0,1,0,1,8>" (ASCII or U+27E8/27E9 brackets), a bare
    /// comma list, or the 8-digit compact form "00001018".
    static FdcaRule parse(std::string_view text);

    const std::array<uint8_t, 8>& params() const { return params_; }
    uint8_t param(int i) const { return params_[static_cast<size_t>(i)]; }

    /// True when c0..c3 are all zero, i.e. the local map is affine in each
    /// neighbor and the global map is an affine map over Z_10^n.
    bool affine() const {
        return params_[0] == 0 && params_[1] == 0 && params_[2] == 0 && params_[3] == 0;
    }

    /// Next state of RMT r.
    uint8_t evaluate(Rmt r) const;

    /// Compact 8-digit form, e.g. "00001018".
    std::string compact() const;
    /// Bracketed display form, e.g. "<0,0,0,0,1,0,1,8>".
    std::string to_string() const;

    friend bool operator==(const FdcaRule& a, const FdcaRule& b) {
        return a.params_ == b.params_;
    }
    friend auto operator<=>(const FdcaRule& a, const FdcaRule& b) {
        return a.params_ <=> b.params_;
    }

private:
    std::array<uint8_t, 8> params_{};
};

/// Fully expanded next-state table of a rule, indexed by RMT value.
class RuleTable {
public:
    static RuleTable expand(const FdcaRule& rule);

    uint8_t operator[](Rmt r) const { return next_[r.value]; }
    uint8_t at(int r) const { return next_[static_cast<size_t>(r)]; }
    const std::array<uint8_t, 1000>& data() const { return next_; }

    /// 1000-character digit string in descending RMT order (999 down to 0),
    /// the conventional display order.
    std::string serialize() const;

private:
    std::array<uint8_t, 1000> next_{};
};

// RMT groupings. Each of the three 10-member families partitions 0..999
// into 100 sets: siblings share (x, y) and vary the right neighbor,
// equivalents share (y, z) and vary the left neighbor, self sets share
// (x, z) and vary the self cell.

/// {10*i + k : k = 0..9}; i in 0..99.
std::array<Rmt, 10> sibling_set(int i);

/// {k*100 + i : k = 0..9}; i in 0..99.
std::array<Rmt, 10> equivalent_set(int i);

/// {100*x + 10*k + z : k = 0..9}.
std::array<Rmt, 10> self_set(int x, int z);

/// The 81 RMTs sharing r's left neighbor with both other digits changed:
/// {100*x + 10*y' + z' : y' != y, z' != z}.
std::array<Rmt, 81> l_set(Rmt r);

/// The 81 RMTs sharing r's right neighbor with both other digits changed:
/// {100*x' + 10*y' + z : x' != x, y' != y}.
std::array<Rmt, 81> r_set(Rmt r);

/// Left-permutive: all 10 next states are distinct within every equivalent
/// set. Right-permutive: distinct within every sibling set.
bool is_left_permutive(const FdcaRule& rule);
bool is_right_permutive(const FdcaRule& rule);

/// R(x,y,z) == y.
bool is_self_replicating_rmt(const FdcaRule& rule, Rmt r);

} // namespace fdca
