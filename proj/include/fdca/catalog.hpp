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

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fdca/chaos.hpp"
#include "fdca/cycles.hpp"
#include "fdca/rule.hpp"

namespace fdca {

struct CatalogEntry {
    FdcaRule rule;
    std::vector<int> reversible_n;      // cell lengths with a verified reversible verdict
    std::map<int, CycleStats> stats;    // cycle statistics per cell length, filled on demand
    std::optional<ChaosProfile> chaos;  // filled on demand
};

/// An immutable snapshot of rules plus what is known about them. Filters
/// consume a catalog and produce a (smaller) catalog; provenance strings
/// accumulate.
struct RuleCatalog {
    std::vector<CatalogEntry> entries;
    std::string provenance;
    /// Per-cell-length reversible counts over the scanned family (recorded
    /// even for rules that did not make the intersection).
    std::map<int, uint64_t> family_counts;

    bool contains(const FdcaRule& r) const;
};

enum class RuleFamily { affine, full };

struct ScanOptions {
    int threads = 0;               // 0 = hardware concurrency
    bool budget_override = false;  // required for the full 10^8 family
    uint64_t full_family_limit = 0; // cap on scanned full-family rules, 0 = no cap
    int probe_samples = 64;        // birthday-probe sample size per rule (full family)
    int brute_n_budget = 8;
};

/// Rules of the family reversible at every cell length in n_range. The
/// affine family (10^4 rules with c0..c3 = 0) goes through the determinant
/// oracle; the full family is probed by random-configuration collision
/// rejection followed by exact brute force, and is refused without
/// budget_override.
RuleCatalog scan_reversible(RuleFamily family, const std::vector<int>& n_range,
                            const ScanOptions& opts = {});

/// Verdicts for an explicit rule list (affine rules via the determinant
/// oracle, others brute force).
RuleCatalog scan_explicit(const std::vector<FdcaRule>& rules, const std::vector<int>& n_range,
                          const ScanOptions& opts = {});

/// Predicate on per-rule cycle statistics at one cell length.
struct CycleSelector {
    enum class Kind { accept_all, exact, count_at_most, count_in_set, lowest_quantile };
    Kind kind = Kind::accept_all;
    uint64_t cycles = 0;
    uint64_t max_len = 0;
    std::vector<uint64_t> count_set;
    double quantile = 0.25;

    static CycleSelector accept_all() { return {}; }
    static CycleSelector exact(uint64_t cycles, uint64_t max_len) {
        return {Kind::exact, cycles, max_len, {}, 0.0};
    }
    static CycleSelector count_at_most(uint64_t cycles) {
        return {Kind::count_at_most, cycles, 0, {}, 0.0};
    }
    static CycleSelector in_count_set(std::vector<uint64_t> counts) {
        return {Kind::count_in_set, 0, 0, std::move(counts), 0.0};
    }
    static CycleSelector lowest_quantile(double q) { return {Kind::lowest_quantile, 0, 0, {}, q}; }
};

/// Keeps the entries whose cycle structure at cell length n matches the
/// selector, enumerating missing statistics on demand (n <= 8).
RuleCatalog filter_cycle_structure(const RuleCatalog& catalog, int n, const CycleSelector& sel,
                                   int threads = 0);

enum class ChaoticStage { first, second, third };

struct ChaoticThresholds {
    // first stage: max(lambda_p, eta_p) <= first_max_p and delta_p >= first_min_delta
    double first_max_p = 0.7;
    double first_min_delta = 0.5;
    // third stage: cycle structure at third_n must equal (third_cycles, third_max_len)
    int third_n = 6;
    uint64_t third_cycles = 25000;
    uint64_t third_max_len = 40;
};

/// first:  low propagation, high self-information propagation.
/// second: drops rules whose (lambda_p, eta_p) is exactly (0,0), (0,1) or
///         (1,0) — no flow at all, or flow in only one direction.
/// third:  among survivors, keeps the minimal-cycle class at n=6.
RuleCatalog filter_chaotic(const RuleCatalog& catalog, ChaoticStage stage,
                           const ChaoticThresholds& thr = {}, int threads = 0);

/// The published candidate list: 36 entries of which 28 are distinct (the
/// published table repeats eight rules). Entries are deduplicated in first-
/// occurrence order; provenance records the raw count. All candidates are
/// affine and reversible at every n in 6..10.
RuleCatalog shipped_candidates();

/// The raw published list, duplicates included.
std::vector<FdcaRule> shipped_candidates_raw();

// One JSON object per line: {rule, reversible_n, stats, chaos, provenance}.
void write_catalog_jsonl(const RuleCatalog& catalog, const std::string& path);
RuleCatalog read_catalog_jsonl(const std::string& path);

} // namespace fdca
