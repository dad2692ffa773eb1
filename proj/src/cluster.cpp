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

#include "fdca/cluster.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <set>

namespace fdca {

namespace {

uint32_t digits10(uint64_t v) {
    uint32_t d = 1;
    while (v >= 10) {
        v /= 10;
        ++d;
    }
    return d;
}

uint64_t parse_digits(std::string_view s) {
    uint64_t v = 0;
    for (char c : s) v = v * 10 + static_cast<uint64_t>(c - '0');
    return v;
}

Clustering make_clustering(std::vector<uint32_t> labels, std::string prov) {
    Clustering c;
    c.labels = std::move(labels);
    c.k = densify_labels(c.labels);
    c.provenance = {std::move(prov)};
    return c;
}

double now_ms() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

} // namespace

std::vector<ConfigIndex> CycleOracle::ids(const FdcaRule& rule, int n,
                                          const std::vector<std::string_view>& configs) {
    const auto key = std::make_pair(rule.compact(), n);
    std::vector<ConfigIndex> out(configs.size());

    if (n <= dense_max_n_) {
        auto it = dense_.find(key);
        if (it == dense_.end()) {
            EnumerateOptions opts;
            opts.materialize = 1;
            it = dense_.emplace(key, std::make_shared<CyclePartition>(enumerate_cycles(rule, n, opts)))
                     .first;
        }
        const CyclePartition& part = *it->second;
        for (size_t i = 0; i < configs.size(); ++i) out[i] = part.cycle_id(parse_digits(configs[i]));
        return out;
    }

    auto& memo = memo_[key];
    std::vector<size_t> miss_pos;
    std::vector<Configuration> miss_cfg;
    for (size_t i = 0; i < configs.size(); ++i) {
        const uint64_t idx = parse_digits(configs[i]);
        auto it = memo.find(idx);
        if (it != memo.end()) {
            out[i] = it->second;
        } else {
            miss_pos.push_back(i);
            miss_cfg.push_back(Configuration::from_string(configs[i]));
        }
    }
    if (!miss_cfg.empty()) {
        const auto ids = cycle_ids_of(rule, n, miss_cfg, orbit_cap_);
        for (size_t m = 0; m < miss_pos.size(); ++m) {
            out[miss_pos[m]] = ids[m];
            memo[miss_cfg[m].index()] = ids[m];
        }
    }
    return out;
}

SplitClusterings primary_cluster_splits(const DigitFrame& frame, const FdcaRule& rule,
                                        CycleOracle& oracle) {
    SplitClusterings sc;
    sc.rows = frame.rows.size();
    const size_t splits = frame.split_count();
    sc.labels.resize(splits);
    sc.counts.resize(splits);

    std::set<size_t> widths;
    for (size_t i = 0; i < splits; ++i) widths.insert(frame.split_width(i));
    for (size_t w : widths) {
        const int n = static_cast<int>(w);
        const bool ok = rule.affine() ? is_reversible_affine(rule, n)
                        : n <= 8     ? is_reversible_bruteforce(rule, n)
                                     : true; // left to the orbit cap
        if (!ok) {
            throw PreconditionError("rule " + rule.to_string() + " is not reversible at split width " +
                                    std::to_string(w));
        }
    }

    for (size_t i = 0; i < splits; ++i) {
        std::vector<std::string_view> subs(sc.rows);
        for (size_t r = 0; r < sc.rows; ++r) subs[r] = frame.split(r, i);
        const auto ids = oracle.ids(rule, static_cast<int>(frame.split_width(i)), subs);

        std::vector<ConfigIndex> uniq(ids);
        std::sort(uniq.begin(), uniq.end());
        uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
        sc.labels[i].resize(sc.rows);
        for (size_t r = 0; r < sc.rows; ++r) {
            sc.labels[i][r] = static_cast<uint32_t>(
                std::lower_bound(uniq.begin(), uniq.end(), ids[r]) - uniq.begin());
        }
        sc.counts[i] = static_cast<uint32_t>(uniq.size());
    }
    return sc;
}

DigitFrame encode_cluster_frame(const SplitClusterings& sc, int split_size, bool pad_to_multiple) {
    DigitFrame out;
    out.split_size = split_size;
    out.pad_to_multiple = pad_to_multiple;

    std::vector<uint32_t> widths(sc.labels.size());
    size_t total = 0;
    for (size_t i = 0; i < sc.labels.size(); ++i) {
        widths[i] = sc.counts[i] <= 1 ? 1 : digits10(sc.counts[i] - 1);
        total += widths[i];
    }
    size_t width = total;
    if (pad_to_multiple) {
        const size_t s = static_cast<size_t>(split_size);
        width = (width + s - 1) / s * s;
    }
    out.width = width;

    out.rows.reserve(sc.rows);
    for (size_t r = 0; r < sc.rows; ++r) {
        std::string row;
        row.reserve(width);
        row.append(width - total, '0');
        for (size_t i = 0; i < sc.labels.size(); ++i) {
            std::string code = std::to_string(sc.labels[i][r]);
            row.append(widths[i] - code.size(), '0');
            row += code;
        }
        out.rows.push_back(std::move(row));
    }
    return out;
}

ParticipationTable participation_table(const SplitClusterings& sc,
                                       const std::vector<std::vector<uint32_t>>& aux_labels,
                                       size_t aux_count) {
    ParticipationTable t;
    t.sizes.resize(sc.labels.size());
    for (size_t i = 0; i < sc.labels.size(); ++i) {
        t.sizes[i].assign(sc.counts[i], 0);
        for (uint32_t l : sc.labels[i]) ++t.sizes[i][l];
    }
    if (sc.labels.size() >= (1u << 20) || aux_count >= (1ull << 24)) {
        throw BudgetError("participation table beyond the packed-key limits (splits < 2^20, "
                          "auxiliary clusters < 2^24)");
    }
    for (uint32_t c : sc.counts) {
        if (c >= (1u << 20)) throw BudgetError("too many primary clusters in one split");
    }
    // sort (aux, split, primary) incidences and run-length count them
    std::vector<uint64_t> keys;
    keys.reserve(sc.labels.size() * sc.rows);
    for (size_t i = 0; i < sc.labels.size(); ++i) {
        for (size_t r = 0; r < sc.rows; ++r) {
            keys.push_back((static_cast<uint64_t>(aux_labels[i][r]) << 40) |
                           (static_cast<uint64_t>(i) << 20) | sc.labels[i][r]);
        }
    }
    std::sort(keys.begin(), keys.end());
    t.hits_by_aux.assign(aux_count, {});
    for (size_t p = 0; p < keys.size();) {
        size_t q = p;
        while (q < keys.size() && keys[q] == keys[p]) ++q;
        const uint32_t aux = static_cast<uint32_t>(keys[p] >> 40);
        const uint32_t split = static_cast<uint32_t>((keys[p] >> 20) & 0xFFFFF);
        const uint32_t prim = static_cast<uint32_t>(keys[p] & 0xFFFFF);
        t.hits_by_aux[aux].push_back({split, prim, static_cast<uint32_t>(q - p)});
        p = q;
    }
    return t;
}

Clustering merge_silhouette(const Clustering& current, const Points& space, uint32_t k) {
    const uint32_t target = std::max(k, 2u);
    if (current.k <= target) return current;
    const size_t n = current.labels.size();
    if (space.size() != n) throw PreconditionError("feature space size does not match labels");
    if (n > 20000) {
        throw BudgetError("silhouette merging builds an n^2 distance matrix; " + std::to_string(n) +
                          " rows is above the supported 20000");
    }

    std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            double s = 0;
            for (size_t d = 0; d < space[i].size(); ++d) {
                const double diff = space[i][d] - space[j][d];
                s += diff * diff;
            }
            dist[i][j] = dist[j][i] = std::sqrt(s);
        }
    }

    std::vector<uint32_t> labels = current.labels;
    const uint32_t K = current.k;
    std::vector<uint64_t> sizes(K, 0);
    for (uint32_t l : labels) ++sizes[l];
    // per-point distance sums to each cluster
    std::vector<std::vector<double>> sums(n, std::vector<double>(K, 0.0));
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) sums[i][labels[j]] += dist[i][j];
    }
    std::vector<bool> active(K, true);
    uint32_t alive = K;

    auto merged_score = [&](uint32_t s, uint32_t c) {
        double total = 0;
        for (size_t i = 0; i < n; ++i) {
            uint32_t own = labels[i] == s ? c : labels[i];
            const double own_sum = sums[i][own] + (own == c ? sums[i][s] : 0.0);
            const uint64_t own_size = sizes[own] + (own == c ? sizes[s] : 0);
            if (own_size <= 1) continue;
            const double a = own_sum / static_cast<double>(own_size - 1);
            double b = std::numeric_limits<double>::infinity();
            for (uint32_t t = 0; t < K; ++t) {
                if (!active[t] || t == s || t == own) continue;
                const double tsum = sums[i][t] + (t == c ? sums[i][s] : 0.0);
                const uint64_t tsize = sizes[t] + (t == c ? sizes[s] : 0);
                b = std::min(b, tsum / static_cast<double>(tsize));
            }
            const double m = std::max(a, b);
            total += m > 0 ? (b - a) / m : 0.0;
        }
        return total / static_cast<double>(n);
    };

    while (alive > target) {
        uint32_t smallest = K;
        for (uint32_t c = 0; c < K; ++c) {
            if (active[c] && (smallest == K || sizes[c] < sizes[smallest])) smallest = c;
        }
        uint32_t best = K;
        double best_score = -std::numeric_limits<double>::infinity();
        for (uint32_t c = 0; c < K; ++c) {
            if (!active[c] || c == smallest) continue;
            const double sc = merged_score(smallest, c);
            if (sc > best_score + 1e-15 || best == K) {
                best_score = sc;
                best = c;
            }
        }
        for (size_t i = 0; i < n; ++i) {
            if (labels[i] == smallest) labels[i] = best;
            sums[i][best] += sums[i][smallest];
        }
        sizes[best] += sizes[smallest];
        active[smallest] = false;
        --alive;
    }

    Clustering out = make_clustering(std::move(labels), "merge:silhouette");
    out.provenance.insert(out.provenance.begin(), current.provenance.begin(), current.provenance.end());
    return out;
}

Clustering merge_average(const Clustering& current, const std::vector<mpz_class>& godels,
                         uint32_t k) {
    if (k < 1) throw PreconditionError("target k must be at least 1");
    if (current.k <= k) return current;
    const size_t n = current.labels.size();
    if (godels.size() != n) throw PreconditionError("encodings do not match labels");

    std::vector<uint32_t> labels = current.labels;
    const uint32_t K = current.k;
    std::vector<uint64_t> sizes(K, 0);
    std::vector<mpz_class> sums(K, 0);
    for (size_t i = 0; i < n; ++i) {
        ++sizes[labels[i]];
        sums[labels[i]] += godels[i];
    }
    std::vector<bool> active(K, true);
    uint32_t alive = K;

    while (alive > k) {
        uint32_t smallest = K;
        for (uint32_t c = 0; c < K; ++c) {
            if (active[c] && (smallest == K || sizes[c] < sizes[smallest])) smallest = c;
        }
        // means are frozen for the round; |g - sum_c/size_c| compared by
        // cross-multiplication so everything stays in integers
        std::vector<mpz_class> frozen_sums(K);
        std::vector<uint64_t> frozen_sizes(K, 0);
        for (uint32_t c = 0; c < K; ++c) {
            if (!active[c] || c == smallest) continue;
            frozen_sums[c] = sums[c];
            frozen_sizes[c] = sizes[c];
        }
        mpz_class num, rhs;
        for (size_t i = 0; i < n; ++i) {
            if (labels[i] != smallest) continue;
            uint32_t best = K;
            mpz_class best_num; // |g*size_c - sum_c|
            uint64_t best_den = 1;
            for (uint32_t c = 0; c < K; ++c) {
                if (!active[c] || c == smallest) continue;
                num = godels[i] * frozen_sizes[c] - frozen_sums[c];
                if (num < 0) num = -num;
                // num/size_c < best_num/best_den <=> num*best_den < best_num*size_c
                if (best == K) {
                    best = c;
                    best_num = num;
                    best_den = frozen_sizes[c];
                    continue;
                }
                rhs = best_num * frozen_sizes[c];
                if (num * best_den < rhs) {
                    best = c;
                    best_num = num;
                    best_den = frozen_sizes[c];
                }
            }
            labels[i] = best;
            sums[best] += godels[i];
            ++sizes[best];
        }
        sums[smallest] = 0;
        sizes[smallest] = 0;
        active[smallest] = false;
        --alive;
    }

    Clustering out = make_clustering(std::move(labels), "merge:average");
    out.provenance.insert(out.provenance.begin(), current.provenance.begin(), current.provenance.end());
    return out;
}

namespace {

/// Fixed-universe row set used for the temporary-cluster bookkeeping.
struct RowSet {
    std::vector<uint64_t> words;
    size_t count = 0;

    explicit RowSet(size_t universe) : words((universe + 63) / 64, 0) {}
    void add(uint32_t r) {
        uint64_t& w = words[r >> 6];
        const uint64_t m = uint64_t{1} << (r & 63);
        if (!(w & m)) {
            w |= m;
            ++count;
        }
    }
    size_t intersection(const RowSet& o) const {
        size_t c = 0;
        for (size_t i = 0; i < words.size(); ++i) {
            c += static_cast<size_t>(__builtin_popcountll(words[i] & o.words[i]));
        }
        return c;
    }
    void unite(const RowSet& o) {
        count = 0;
        for (size_t i = 0; i < words.size(); ++i) {
            words[i] |= o.words[i];
            count += static_cast<size_t>(__builtin_popcountll(words[i]));
        }
    }
    void subtract(const RowSet& o) {
        count = 0;
        for (size_t i = 0; i < words.size(); ++i) {
            words[i] &= ~o.words[i];
            count += static_cast<size_t>(__builtin_popcountll(words[i]));
        }
    }
    uint32_t min_element() const {
        for (size_t i = 0; i < words.size(); ++i) {
            if (words[i]) {
                return static_cast<uint32_t>(i * 64 +
                                             static_cast<size_t>(__builtin_ctzll(words[i])));
            }
        }
        return UINT32_MAX;
    }
    template <typename F>
    void for_each(F&& f) const {
        for (size_t i = 0; i < words.size(); ++i) {
            uint64_t w = words[i];
            while (w) {
                f(static_cast<uint32_t>(i * 64 + static_cast<size_t>(__builtin_ctzll(w))));
                w &= w - 1;
            }
        }
    }
};

} // namespace

Clustering merge_max_participation(const SplitClusterings& sc, const DigitFrame& frame,
                                   const FdcaRule& aux_rule, uint32_t k, CycleOracle& oracle,
                                   const std::function<std::optional<FdcaRule>()>& more_rules) {
    if (frame.width % static_cast<size_t>(frame.split_size) != 0) {
        throw PreconditionError("participation merging needs equal split widths; pad the frame to a "
                                "multiple of the split size");
    }
    const int n = frame.split_size;
    const size_t rows = frame.rows.size(), splits = frame.split_count();
    if (sc.rows != rows || sc.labels.size() != splits) {
        throw PreconditionError("split clusterings do not match the frame");
    }

    // auxiliary clusters: cycle membership of the pooled sub-configurations
    std::vector<std::string_view> pooled(rows * splits);
    for (size_t i = 0; i < splits; ++i) {
        for (size_t r = 0; r < rows; ++r) pooled[i * rows + r] = frame.split(r, i);
    }
    const auto pooled_ids = oracle.ids(aux_rule, n, pooled);
    std::vector<ConfigIndex> uniq(pooled_ids);
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    std::vector<std::vector<uint32_t>> aux_labels(splits, std::vector<uint32_t>(rows));
    for (size_t i = 0; i < splits; ++i) {
        for (size_t r = 0; r < rows; ++r) {
            aux_labels[i][r] = static_cast<uint32_t>(
                std::lower_bound(uniq.begin(), uniq.end(), pooled_ids[i * rows + r]) - uniq.begin());
        }
    }

    const ParticipationTable table = participation_table(sc, aux_labels, uniq.size());

    // row membership of every primary cluster
    std::vector<std::vector<RowSet>> members(splits);
    for (size_t i = 0; i < splits; ++i) {
        members[i].assign(sc.counts[i], RowSet(rows));
        for (uint32_t r = 0; r < rows; ++r) members[i][sc.labels[i][r]].add(r);
    }

    // temporary clusters: per auxiliary cluster, union the data objects of
    // the primary clusters with maximal participation above one half
    std::vector<RowSet> temps;
    RowSet covered(rows);
    for (size_t t = 0; t < table.aux_count(); ++t) {
        RowSet cluster(rows);
        bool any = false;
        size_t pos = 0;
        const auto& hits = table.hits_by_aux[t]; // sorted by (split, primary)
        while (pos < hits.size()) {
            size_t end = pos;
            uint64_t best_num = 0, best_den = 1;
            while (end < hits.size() && hits[end].split == hits[pos].split) {
                const uint64_t num = hits[end].count, den = table.sizes[hits[end].split][hits[end].primary];
                if (num * best_den > best_num * den) {
                    best_num = num;
                    best_den = den;
                }
                ++end;
            }
            if (2 * best_num > best_den) {
                for (size_t h = pos; h < end; ++h) {
                    const uint64_t num = hits[h].count, den = table.sizes[hits[h].split][hits[h].primary];
                    if (num * best_den == best_num * den) {
                        cluster.unite(members[hits[h].split][hits[h].primary]);
                        any = true;
                    }
                }
            }
            pos = end;
        }
        if (any && cluster.count > 0) {
            covered.unite(cluster);
            temps.push_back(std::move(cluster));
        }
    }
    for (uint32_t r = 0; r < rows; ++r) {
        if (!((covered.words[r >> 6] >> (r & 63)) & 1)) {
            RowSet single(rows);
            single.add(r);
            temps.push_back(std::move(single));
        }
    }

    auto remove_overlaps_once = [&]() {
        bool changed = false;
        for (size_t i = 0; i < temps.size(); ++i) {
            for (size_t j = i + 1; j < temps.size(); ++j) {
                if (temps[i].intersection(temps[j]) == 0) continue;
                // strip the shared elements from the larger cluster
                if (temps[i].count > temps[j].count) {
                    temps[i].subtract(temps[j]);
                } else {
                    temps[j].subtract(temps[i]);
                }
                changed = true;
            }
        }
        std::erase_if(temps, [](const RowSet& t) { return t.count == 0; });
        return changed;
    };

    int draws_left = 200;
    FdcaRule round_rule = aux_rule;
    while (temps.size() > k) {
        // merge pairs sharing at least half of the smaller side
        bool merged = false;
        for (size_t i = 0; i < temps.size() && temps.size() > k; ++i) {
            for (size_t j = i + 1; j < temps.size() && temps.size() > k;) {
                const size_t inter = temps[i].intersection(temps[j]);
                if (inter > 0 && 2 * inter >= std::min(temps[i].count, temps[j].count)) {
                    temps[i].unite(temps[j]);
                    temps.erase(temps.begin() + static_cast<ptrdiff_t>(j));
                    merged = true;
                } else {
                    ++j;
                }
            }
        }
        if (merged) continue;
        if (temps.size() <= k) break;
        if (remove_overlaps_once()) continue;

        // disjoint and still too many: treat the temporaries as one split,
        // re-encode, and fold the ones sharing a cycle under a fresh rule
        if (more_rules) {
            if (auto next = more_rules()) round_rule = *next;
        }
        if (--draws_left < 0) {
            throw PreconditionError("participation merging could not reach k=" + std::to_string(k) +
                                    "; best achieved " + std::to_string(temps.size()) + " clusters");
        }
        const uint32_t code_width = temps.size() <= 1 ? 1 : digits10(temps.size() - 1);
        if (code_width > static_cast<uint32_t>(n)) {
            throw PreconditionError("cannot encode " + std::to_string(temps.size()) +
                                    " temporary clusters in a width-" + std::to_string(n) + " split");
        }
        std::vector<std::string> codes(temps.size());
        for (size_t i = 0; i < temps.size(); ++i) {
            std::string c = std::to_string(i);
            codes[i] = std::string(static_cast<size_t>(n) - c.size(), '0') + c;
        }
        std::vector<std::string_view> views(codes.begin(), codes.end());
        const auto code_ids = oracle.ids(round_rule, n, views);
        std::map<ConfigIndex, RowSet> groups;
        bool progress = false;
        for (size_t i = 0; i < temps.size(); ++i) {
            auto [it, fresh] = groups.emplace(code_ids[i], RowSet(rows));
            if (!fresh) progress = true;
            it->second.unite(temps[i]);
        }
        if (!progress) continue; // all codes on distinct cycles; try another rule
        temps.clear();
        for (auto& [id, set] : groups) temps.push_back(std::move(set));
    }
    while (remove_overlaps_once()) {
    }

    std::sort(temps.begin(), temps.end(),
              [](const RowSet& a, const RowSet& b) { return a.min_element() < b.min_element(); });
    std::vector<uint32_t> labels(rows, 0);
    for (size_t t = 0; t < temps.size(); ++t) {
        temps[t].for_each([&](uint32_t r) { labels[r] = static_cast<uint32_t>(t); });
    }
    Clustering out = make_clustering(std::move(labels),
                                     "merge:participation(aux=" + aux_rule.compact() + ")");
    return out;
}

const char* to_string(MergeMetric m) {
    switch (m) {
    case MergeMetric::silhouette: return "silhouette";
    case MergeMetric::average: return "average";
    case MergeMetric::participation: return "participation";
    }
    return "?";
}

MergeMetric merge_metric_from_string(const std::string& s) {
    if (s == "silhouette") return MergeMetric::silhouette;
    if (s == "average") return MergeMetric::average;
    if (s == "participation") return MergeMetric::participation;
    throw PreconditionError("unknown merge metric: " + s);
}

namespace {

/// Rows grouped by the tuple of per-split cycle ids under one rule.
Clustering cycle_clustering(const DigitFrame& frame, const FdcaRule& rule, CycleOracle& oracle) {
    SplitClusterings sc = primary_cluster_splits(frame, rule, oracle);
    std::map<std::vector<uint32_t>, uint32_t> tuple_ids;
    std::vector<uint32_t> labels(sc.rows);
    std::vector<uint32_t> tuple(sc.labels.size());
    for (size_t r = 0; r < sc.rows; ++r) {
        for (size_t i = 0; i < sc.labels.size(); ++i) tuple[i] = sc.labels[i][r];
        auto [it, fresh] = tuple_ids.emplace(tuple, static_cast<uint32_t>(tuple_ids.size()));
        labels[r] = it->second;
    }
    return make_clustering(std::move(labels), "cycles(rule=" + rule.compact() + ")");
}

Clustering merge_down(const Clustering& current, uint32_t k, MergeMetric metric,
                      const Points& merge_space, const std::vector<mpz_class>& godels,
                      const DigitFrame& frame, const std::vector<FdcaRule>& pool, size_t& pool_pos,
                      CycleOracle& oracle) {
    switch (metric) {
    case MergeMetric::silhouette:
        return merge_silhouette(current, merge_space, k);
    case MergeMetric::average:
        return merge_average(current, godels, k);
    case MergeMetric::participation: {
        // single-split view of the current clusters
        SplitClusterings sc;
        sc.rows = current.labels.size();
        sc.labels = {current.labels};
        sc.counts = {current.k};
        const uint32_t width = current.k <= 1 ? 1 : digits10(current.k - 1);
        DigitFrame codes;
        codes.split_size = frame.split_size;
        codes.pad_to_multiple = true;
        codes.width = static_cast<size_t>(frame.split_size);
        if (width > codes.width) {
            return merge_average(current, godels, k); // too many clusters to encode in one split
        }
        codes.rows.reserve(sc.rows);
        for (uint32_t l : current.labels) {
            std::string c = std::to_string(l);
            codes.rows.push_back(std::string(codes.width - c.size(), '0') + c);
        }
        auto more = [&pool, &pool_pos]() -> std::optional<FdcaRule> {
            if (pool.empty()) return std::nullopt;
            return pool[pool_pos++ % pool.size()];
        };
        if (pool.empty()) return merge_average(current, godels, k);
        Clustering merged = merge_max_participation(sc, codes, pool[pool_pos++ % pool.size()], k,
                                                    oracle, more);
        if (merged.k != k) return merge_average(merged, godels, k);
        return merged;
    }
    }
    throw Error("unreachable");
}

} // namespace

Clustering refine_when_fewer(const Clustering& current, const DigitFrame& frame,
                             const std::vector<FdcaRule>& pool, uint32_t k, uint64_t seed,
                             MergeMetric metric, const Points& merge_space,
                             const std::vector<mpz_class>& godels, CycleOracle& oracle) {
    if (current.k == k) return current;
    if (current.k > k) {
        throw PreconditionError("refinement applies when the cluster count is below k");
    }
    std::vector<FdcaRule> order = pool;
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    Clustering cur = current;
    size_t pool_pos = 0;
    for (const FdcaRule& rule : order) {
        Clustering aux = cycle_clustering(frame, rule, oracle);
        if (aux.k == k) {
            aux.provenance.insert(aux.provenance.begin(), cur.provenance.begin(), cur.provenance.end());
            aux.provenance.push_back("refine:auxiliary-exact(rule=" + rule.compact() + ")");
            return aux;
        }
        // intersect: objects must share both their current and auxiliary cluster
        std::vector<uint32_t> paired(cur.labels.size());
        std::map<std::pair<uint32_t, uint32_t>, uint32_t> ids;
        for (size_t r = 0; r < cur.labels.size(); ++r) {
            auto [it, fresh] = ids.emplace(std::make_pair(cur.labels[r], aux.labels[r]),
                                           static_cast<uint32_t>(ids.size()));
            paired[r] = it->second;
        }
        Clustering cand = make_clustering(std::move(paired),
                                          "refine:intersect(rule=" + rule.compact() + ")");
        cand.provenance.insert(cand.provenance.begin(), cur.provenance.begin(), cur.provenance.end());
        if (cand.k == k) return cand;
        if (cand.k > k) {
            Clustering merged = merge_down(cand, k, metric, merge_space, godels, frame, order,
                                           pool_pos, oracle);
            merged.provenance.push_back("refine:merged-overshoot");
            return merged;
        }
        cur = std::move(cand);
    }
    throw PreconditionError("auxiliary rule pool exhausted after " + std::to_string(order.size()) +
                            " rules; best achieved " + std::to_string(cur.k) + " of " +
                            std::to_string(k) + " clusters");
}

PipelineResult cluster_dataset(const CsvTable& table, const PipelineConfig& cfg) {
    if (cfg.split_size < 6 || cfg.split_size > 10) {
        throw PreconditionError("split size must be in 6..10, got " + std::to_string(cfg.split_size));
    }
    if (cfg.k < 1) throw PreconditionError("k must be at least 1");

    PipelineResult res;
    const auto columns = table.select_columns(cfg.columns);
    res.scaled = preprocess_scale(table, columns);
    const size_t rows = res.scaled.rows.size();
    if (rows == 0) throw PreconditionError("dataset has no rows");

    res.raw_features.resize(rows);
    for (size_t r = 0; r < rows; ++r) {
        res.raw_features[r].reserve(columns.size());
        for (size_t c : columns) res.raw_features[r].push_back(std::stod(table.rows[r][c]));
    }

    auto stage_begin = now_ms();
    res.godels.reserve(rows);
    for (const auto& row : res.scaled.rows) res.godels.push_back(godel_encode(row));
    std::set<mpz_class> distinct(res.godels.begin(), res.godels.end());
    if (distinct.size() < cfg.k) {
        throw PreconditionError("only " + std::to_string(distinct.size()) +
                                " distinct row encodings exist; k=" + std::to_string(cfg.k) +
                                " is unreachable because the remaining rows are indistinguishable");
    }
    res.trace.push_back({"stage1:encode", "", distinct.size(), now_ms() - stage_begin});

    if (cfg.k == 1) {
        res.clustering.labels.assign(rows, 0);
        res.clustering.k = 1;
        res.clustering.provenance = {"trivial(k=1)"};
        return res;
    }

    stage_begin = now_ms();
    GodelFrame frame = build_frame(res.godels, cfg.split_size, /*pad_to_multiple=*/true, cfg.digit_cap);
    res.trace.push_back({"stage1:frame(width=" + std::to_string(frame.digits.width) + ")", "",
                         frame.digits.split_count(), now_ms() - stage_begin});

    std::mt19937_64 rng(cfg.seed);
    const RuleCatalog shipped = shipped_candidates();
    std::vector<FdcaRule> pool;
    pool.reserve(shipped.entries.size());
    for (const auto& e : shipped.entries) pool.push_back(e.rule);
    auto draw = [&]() {
        std::uniform_int_distribution<size_t> d(0, pool.size() - 1);
        return pool[d(rng)];
    };

    CycleOracle oracle(cfg.orbit_cap);
    Points merge_space(rows);
    for (size_t r = 0; r < rows; ++r) {
        merge_space[r].assign(res.scaled.rows[r].begin(), res.scaled.rows[r].end());
    }

    auto distinct_tuples = [](const SplitClusterings& sc) {
        std::set<std::vector<uint32_t>> tuples;
        std::vector<uint32_t> tuple(sc.labels.size());
        for (size_t r = 0; r < sc.rows; ++r) {
            for (size_t i = 0; i < sc.labels.size(); ++i) tuple[i] = sc.labels[i][r];
            tuples.insert(tuple);
        }
        return tuples.size();
    };

    Clustering stage2;
    if (cfg.metric == MergeMetric::participation) {
        const FdcaRule primary = cfg.rule ? *cfg.rule : draw();
        stage_begin = now_ms();
        SplitClusterings sc = primary_cluster_splits(frame.digits, primary, oracle);
        res.trace.push_back({"stage2:primary-splits", primary.compact(), distinct_tuples(sc),
                             now_ms() - stage_begin});
        FdcaRule aux = cfg.aux_rule ? *cfg.aux_rule : draw();
        if (!cfg.aux_rule && pool.size() > 1) {
            while (aux == primary) aux = draw(); // a different rule for the auxiliary pass
        }
        auto more = [&]() -> std::optional<FdcaRule> { return draw(); };
        stage_begin = now_ms();
        stage2 = merge_max_participation(sc, frame.digits, aux, cfg.k, oracle, more);
        res.trace.push_back({"stage3:participation", aux.compact(), stage2.k, now_ms() - stage_begin});
    } else {
        DigitFrame cur = frame.digits;
        int round = 0;
        for (;; ++round) {
            if (round > 64) throw Error("re-encoding failed to converge to a single split");
            const FdcaRule rule = cfg.rule ? *cfg.rule : draw();
            stage_begin = now_ms();
            SplitClusterings sc = primary_cluster_splits(cur, rule, oracle);
            if (cur.split_count() == 1) {
                stage2 = make_clustering(std::vector<uint32_t>(sc.labels[0]),
                                         "cycles(rule=" + rule.compact() + ")");
                res.trace.push_back({"stage2[" + std::to_string(round) + "]:final-split",
                                     rule.compact(), stage2.k, now_ms() - stage_begin});
                break;
            }
            DigitFrame next = encode_cluster_frame(sc, cfg.split_size, /*pad_to_multiple=*/true);
            res.trace.push_back({"stage2[" + std::to_string(round) + "]:re-encode(width=" +
                                     std::to_string(next.width) + ")",
                                 rule.compact(), distinct_tuples(sc), now_ms() - stage_begin});
            if (next.width >= cur.width && cur.split_count() > 1) {
                throw Error("re-encoding did not shrink the frame width");
            }
            cur = std::move(next);
        }

        if (stage2.k > cfg.k) {
            stage_begin = now_ms();
            stage2 = cfg.metric == MergeMetric::silhouette
                         ? merge_silhouette(stage2, merge_space, cfg.k)
                         : merge_average(stage2, res.godels, cfg.k);
            res.trace.push_back({"stage3:merge-" + std::string(to_string(cfg.metric)), "", stage2.k,
                                 now_ms() - stage_begin});
        }
    }

    if (stage2.k < cfg.k) {
        stage_begin = now_ms();
        stage2 = refine_when_fewer(stage2, frame.digits, pool, cfg.k, rng(), cfg.metric, merge_space,
                                   res.godels, oracle);
        res.trace.push_back({"stage3:refine", "", stage2.k, now_ms() - stage_begin});
    }
    if (stage2.k != cfg.k) {
        throw Error("pipeline ended with " + std::to_string(stage2.k) + " clusters instead of " +
                    std::to_string(cfg.k));
    }
    res.clustering = std::move(stage2);
    return res;
}

} // namespace fdca
