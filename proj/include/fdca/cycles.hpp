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
#include <vector>

#include "fdca/ca.hpp"
#include "fdca/rule.hpp"

namespace fdca {

struct CycleStats {
    uint64_t cycle_count = 0;
    uint64_t max_cycle_length = 0;
    /// Exactly 10^n / cycle_count for a reversible space.
    double mean_cycle_length = 0.0;
};

/// Decomposition of the n-cell configuration space into cycles under a
/// reversible rule. The canonical id of a cycle is the minimum ConfigIndex
/// on it. The per-configuration assignment is materialized for dense
/// queries when requested (and affordable); stats are always populated.
class CyclePartition {
public:
    CyclePartition(FdcaRule rule, int n, CycleStats stats, std::vector<uint32_t> assignment)
        : rule_(rule), n_(n), stats_(stats), assignment_(std::move(assignment)) {}

    const FdcaRule& rule() const { return rule_; }
    int n() const { return n_; }
    const CycleStats& stats() const { return stats_; }
    bool has_assignment() const { return !assignment_.empty(); }

    /// Canonical cycle id of the configuration with dense index idx.
    ConfigIndex cycle_id(ConfigIndex idx) const;

private:
    FdcaRule rule_;
    int n_;
    CycleStats stats_;
    std::vector<uint32_t> assignment_; // empty when not materialized
};

struct EnumerateOptions {
    /// Enumeration refuses cell lengths above this (10^n configurations).
    int budget_max_n = 8;
    /// Materialize the per-configuration assignment. -1 = auto (n <= 7).
    int materialize = -1;
    /// Successor-array strategy is used while 4 * 10^n fits this budget;
    /// beyond it the scan steps configurations on the fly.
    size_t succ_array_byte_budget = size_t{80} * 1024 * 1024;
};

/// True iff the global map is injective over all 10^n configurations,
/// established by exhaustive mapping with a seen-bitmap. Throws BudgetError
/// above budget_max_n.
bool is_reversible_bruteforce(const FdcaRule& rule, int n, int budget_max_n = 8);

/// Algebraic oracle for affine rules (c0..c3 = 0): the linear part of the
/// global map is the n x n tridiagonal matrix over Z_10 with subdiagonal
/// c4, diagonal c5, superdiagonal c6; the map is bijective iff its
/// determinant is a unit mod 10. The constant c7 never matters.
bool is_reversible_affine(const FdcaRule& rule, int n);

/// Visits every configuration exactly once by orbit-following in ascending
/// index order, so each orbit is first entered at its minimum index.
/// Throws PreconditionError naming a witness pair if the rule turns out to
/// be irreversible at n.
CyclePartition enumerate_cycles(const FdcaRule& rule, int n, const EnumerateOptions& opts = {});

/// Canonical cycle id of one configuration by walking its orbit until it
/// returns; no global state, usable at any supported n. Throws when the
/// orbit exceeds step_cap without closing.
ConfigIndex cycle_id_of(const FdcaRule& rule, int n, const Configuration& c,
                        uint64_t step_cap = 10'000'000);

/// Batched form: walks many orbits in lockstep through the step kernels.
std::vector<ConfigIndex> cycle_ids_of(const FdcaRule& rule, int n,
                                      std::span<const Configuration> configs,
                                      uint64_t step_cap = 10'000'000);

} // namespace fdca
