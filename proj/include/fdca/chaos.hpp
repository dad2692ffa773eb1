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

#include <compare>
#include <cstdint>
#include <utility>

#include "fdca/rule.hpp"

namespace fdca {

/// Exact rational in lowest terms. All disagreement rates are integer
/// counts over fixed denominators; arithmetic stays exact and only display
/// converts to decimal.
struct Rate {
    uint64_t num = 0;
    uint64_t den = 1;

    static Rate of(uint64_t num, uint64_t den);
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    friend bool operator==(const Rate& a, const Rate& b) {
        return a.num == b.num && a.den == b.den; // both reduced
    }
    friend std::strong_ordering operator<=>(const Rate& a, const Rate& b) {
        const unsigned __int128 l = static_cast<unsigned __int128>(a.num) * b.den;
        const unsigned __int128 r = static_cast<unsigned __int128>(b.num) * a.den;
        return l < r ? std::strong_ordering::less
                     : l > r ? std::strong_ordering::greater : std::strong_ordering::equal;
    }
};

inline Rate max(const Rate& a, const Rate& b) { return a < b ? b : a; }

/// Ordered pair of rates compared lexicographically.
struct RatePair {
    Rate first, second;
    friend bool operator==(const RatePair&, const RatePair&) = default;
    friend std::strong_ordering operator<=>(const RatePair& a, const RatePair& b) {
        if (auto c = a.first <=> b.first; c != 0) return c;
        return a.second <=> b.second;
    }
};

/// Information-flow profile of a rule.
///
/// lambda_p: mean disagreement rate within the 100 sibling sets (ordered
///           pairs over 90) — propagation toward the left neighbor.
/// eta_p:    same over the equivalent sets — propagation to the right.
/// lambda_c: per-RMT disagreement against its R-set, over 82, averaged
///           over all 1000 RMTs.
/// eta_c:    same against the L-set.
/// delta_p:  mean disagreement rate within the 100 self sets (fixed x and
///           z, varying self cell) — self-information propagation.
///
/// The cooking rates are deliberately attached this way round (lambda_c to
/// the R-set, eta_c to the L-set): it is the assignment that reproduces
/// the published reference tables for these rules; see docs/chaos-rates.md.
struct ChaosProfile {
    Rate lambda_p, eta_p, lambda_c, eta_c, delta_p;

    /// Disturbance pair toward the left neighbor: (lambda_p, max(eta_p, eta_c)).
    RatePair left() const { return {lambda_p, max(eta_p, eta_c)}; }
    /// Disturbance pair toward the right neighbor: (eta_p, max(lambda_p, lambda_c)).
    RatePair right() const { return {eta_p, max(lambda_p, lambda_c)}; }
    /// Composite pair: lexicographic max of left() and right().
    RatePair p() const { return max_pair(left(), right()); }

    static RatePair max_pair(const RatePair& a, const RatePair& b) { return a < b ? b : a; }
};

std::pair<Rate, Rate> info_propagation(const FdcaRule& rule); // (lambda_p, eta_p)
std::pair<Rate, Rate> info_cooking(const FdcaRule& rule);     // (lambda_c, eta_c)
Rate self_info_propagation(const FdcaRule& rule);             // delta_p
ChaosProfile chaos_profile(const FdcaRule& rule);

/// Single-precision renderings: the per-set fractions accumulated in
/// 32-bit floats, in set order. Published reference tables for these rates
/// were produced by a single-precision pipeline and carry its rounding
/// (about 1e-5); these functions reproduce that arithmetic bit for bit so
/// the tables can be checked tightly. The exact values are the Rate
/// fields above.
float lambda_p_f32(const FdcaRule& rule);
float eta_p_f32(const FdcaRule& rule);
float lambda_c_f32(const FdcaRule& rule);
float eta_c_f32(const FdcaRule& rule);

} // namespace fdca
