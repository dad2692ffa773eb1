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

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fdca/catalog.hpp"
#include "fdca/clustering.hpp"
#include "fdca/cycles.hpp"
#include "fdca/godel.hpp"
#include "fdca/metrics.hpp"
#include "fdca/rule.hpp"

namespace fdca {

/// Answers cycle-membership queries, caching one dense partition per
/// (rule, cell length) while the space is enumerable and falling back to
/// memoized orbit walks above that.
class CycleOracle {
public:
    explicit CycleOracle(uint64_t orbit_cap = 10'000'000, int dense_max_n = 7)
        : orbit_cap_(orbit_cap), dense_max_n_(dense_max_n) {}

    /// Canonical cycle ids for digit strings of length n.
    std::vector<ConfigIndex> ids(const FdcaRule& rule, int n,
                                 const std::vector<std::string_view>& configs);

private:
    uint64_t orbit_cap_;
    int dense_max_n_;
    std::map<std::pair<std::string, int>, std::shared_ptr<CyclePartition>> dense_;
    std::map<std::pair<std::string, int>, std::map<ConfigIndex, ConfigIndex>> memo_;
};

/// Per-split primary clusterings: labels[split][row], dense per split.
struct SplitClusterings {
    size_t rows = 0;
    std::vector<std::vector<uint32_t>> labels;
    std::vector<uint32_t> counts;
};

/// Groups the rows of every split by cycle membership of the sub-
/// configuration under one rule. Throws when the rule is irreversible at
/// some split width.
SplitClusterings primary_cluster_splits(const DigitFrame& frame, const FdcaRule& rule,
                                        CycleOracle& oracle);

/// Renders each split's cluster ids as zero-padded decimal codes of width
/// ceil(log10(m)) (>= 1), concatenates them per row, and re-splits the
/// result with the frame policy of the source.
DigitFrame encode_cluster_frame(const SplitClusterings& sc, int split_size, bool pad_to_multiple);

/// Participation of every primary cluster in every auxiliary cluster:
/// mu(t, split, j) = members of primary cluster j of `split` whose
/// sub-configuration fell into auxiliary cluster t, over the cluster size.
/// For a fixed primary cluster the values sum to 1 across t. Stored
/// sparsely; absent combinations have participation zero.
struct ParticipationTable {
    struct Hit {
        uint32_t split, primary, count;
    };
    std::vector<std::vector<Hit>> hits_by_aux;   // [aux] -> nonzero counts
    std::vector<std::vector<uint32_t>> sizes;    // [split][primary]

    size_t aux_count() const { return hits_by_aux.size(); }
    double mu(size_t t, size_t split, size_t j) const {
        for (const Hit& h : hits_by_aux[t]) {
            if (h.split == split && h.primary == j) {
                return static_cast<double>(h.count) / static_cast<double>(sizes[split][j]);
            }
        }
        return 0.0;
    }
};

ParticipationTable participation_table(const SplitClusterings& sc,
                                       const std::vector<std::vector<uint32_t>>& aux_labels,
                                       size_t aux_count);

/// Repeatedly dissolves the smallest cluster into the neighbor that
/// maximizes the mean silhouette over `space`, until k clusters remain
/// (never fewer than 2). Ties pick the lowest cluster id.
Clustering merge_silhouette(const Clustering& current, const Points& space, uint32_t k);

/// Repeatedly dissolves the smallest cluster, assigning each of its
/// elements to the cluster whose mean encoding is nearest; means are exact
/// rationals, frozen per round. Ties pick the lowest cluster id.
Clustering merge_average(const Clustering& current, const std::vector<mpz_class>& godels,
                         uint32_t k);

/// Cross-split merge by maximum degree of participation: pools all
/// sub-configurations, clusters them under the auxiliary rule, unions the
/// primary clusters that participate maximally (and by more than half) per
/// auxiliary cluster, then resolves overlaps — merging temporaries that
/// share at least half their elements, stripping common elements from the
/// larger otherwise. If the count is still above k once temporaries are
/// disjoint, the temporaries are re-encoded as a single split and the
/// process recurses with a fresh auxiliary rule from `more_rules`.
Clustering merge_max_participation(const SplitClusterings& sc, const DigitFrame& frame,
                                   const FdcaRule& aux_rule, uint32_t k, CycleOracle& oracle,
                                   const std::function<std::optional<FdcaRule>()>& more_rules = {});

enum class MergeMetric { silhouette, average, participation };

const char* to_string(MergeMetric m);
MergeMetric merge_metric_from_string(const std::string& s);

/// Splits clusters of `current` by intersecting with auxiliary cycle
/// clusterings under fresh rules until at least k clusters exist, then
/// hands overshoot to the configured metric. Throws when the rule pool is
/// exhausted first.
Clustering refine_when_fewer(const Clustering& current, const DigitFrame& frame,
                             const std::vector<FdcaRule>& pool, uint32_t k, uint64_t seed,
                             MergeMetric metric, const Points& merge_space,
                             const std::vector<mpz_class>& godels, CycleOracle& oracle);

struct PipelineConfig {
    int split_size = 6; // 6..10
    std::optional<FdcaRule> rule;     // fixed primary rule; seeded draw when absent
    std::optional<FdcaRule> aux_rule; // fixed auxiliary rule; seeded draw when absent
    MergeMetric metric = MergeMetric::participation;
    uint32_t k = 2;
    uint64_t seed = 0;
    size_t digit_cap = 4096;
    uint64_t orbit_cap = 10'000'000;
    std::vector<std::string> columns; // empty = all
};

struct StageTrace {
    std::string stage;
    std::string rule;     // compact form, empty when no rule involved
    uint64_t clusters = 0;
    double ms = 0.0;
};

struct PipelineResult {
    Clustering clustering;
    std::vector<StageTrace> trace;
    ScaledDataset scaled;
    std::vector<mpz_class> godels;
    Points raw_features; // selected columns as doubles, for scoring
};

/// The full three-stage pipeline: scale, encode, frame, per-split cycle
/// clustering with re-encoding, then merge or refine to exactly k.
/// Deterministic for a fixed (dataset, config, seed).
PipelineResult cluster_dataset(const CsvTable& table, const PipelineConfig& cfg);

} // namespace fdca
