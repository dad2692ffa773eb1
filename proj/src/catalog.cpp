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

#include "fdca/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <unordered_set>

#include <json.hpp>

#include "fdca/errors.hpp"
#include "parallel.hpp"

namespace fdca {

using nlohmann::json;

bool RuleCatalog::contains(const FdcaRule& r) const {
    return std::any_of(entries.begin(), entries.end(),
                       [&](const CatalogEntry& e) { return e.rule == r; });
}

namespace {

void check_n_range(const std::vector<int>& n_range) {
    if (n_range.empty()) throw PreconditionError("scan needs at least one cell length");
    for (int n : n_range) {
        if (n < 1 || n > kMaxCells) {
            throw PreconditionError("cell length out of range 1..19: " + std::to_string(n));
        }
    }
}

FdcaRule affine_rule(int c4, int c5, int c6, int c7) {
    return FdcaRule({0, 0, 0, 0, static_cast<uint8_t>(c4), static_cast<uint8_t>(c5),
                     static_cast<uint8_t>(c6), static_cast<uint8_t>(c7)});
}

/// Cheap non-injectivity probe: map `samples` random configurations and
/// look for an output collision. Only a "maybe reversible" filter; exact
/// verdicts come from is_reversible_bruteforce.
bool probe_maybe_injective(const FdcaRule& rule, int n, int samples, uint64_t seed) {
    GlobalMap map(rule, n);
    std::mt19937_64 rng(seed);
    std::unordered_set<uint64_t> outputs;
    outputs.reserve(static_cast<size_t>(samples) * 2);
    uint8_t cells[kMaxCells];
    const uint64_t space = pow10_u64(n);
    for (int s = 0; s < samples; ++s) {
        uint64_t v = rng() % space;
        for (int i = n - 1; i >= 0; --i) {
            cells[i] = static_cast<uint8_t>(v % 10);
            v /= 10;
        }
        map.step_inplace(cells);
        uint64_t u = 0;
        for (int i = 0; i < n; ++i) u = u * 10 + cells[i];
        if (!outputs.insert(u).second) return false;
    }
    return true;
}

} // namespace

RuleCatalog scan_reversible(RuleFamily family, const std::vector<int>& n_range,
                            const ScanOptions& opts) {
    check_n_range(n_range);
    RuleCatalog cat;

    if (family == RuleFamily::affine) {
        // 1000 (c4,c5,c6) triples decide reversibility; c7 only shifts states.
        std::vector<std::vector<bool>> triple_ok(n_range.size(), std::vector<bool>(1000));
        for (size_t ni = 0; ni < n_range.size(); ++ni) {
            uint64_t count = 0;
            for (int t = 0; t < 1000; ++t) {
                const bool ok = is_reversible_affine(affine_rule(t / 100, (t / 10) % 10, t % 10, 0),
                                                     n_range[ni]);
                triple_ok[ni][static_cast<size_t>(t)] = ok;
                if (ok) count += 10;
            }
            cat.family_counts[n_range[ni]] = count;
        }
        for (int t = 0; t < 1000; ++t) {
            bool all = true;
            for (size_t ni = 0; ni < n_range.size(); ++ni) all = all && triple_ok[ni][static_cast<size_t>(t)];
            if (!all) continue;
            for (int c7 = 0; c7 < 10; ++c7) {
                CatalogEntry e;
                e.rule = affine_rule(t / 100, (t / 10) % 10, t % 10, c7);
                e.reversible_n = n_range;
                cat.entries.push_back(std::move(e));
            }
        }
        cat.provenance = "scan:affine";
        return cat;
    }

    // full family
    const uint64_t family_size = 100'000'000;
    const uint64_t limit = opts.full_family_limit == 0 ? family_size
                                                       : std::min(opts.full_family_limit, family_size);
    if (!opts.budget_override) {
        throw BudgetError(
            "full-family scan covers 10^8 rules; at roughly 10us per probed rule this is "
            "on the order of 20 CPU-minutes per cell length before exact verification. "
            "Pass the budget override (and optionally a rule limit) to run it.");
    }
    const int n_min = *std::min_element(n_range.begin(), n_range.end());
    std::vector<uint8_t> keep(limit, 0);
    detail::parallel_for(0, limit, opts.threads, [&](size_t i) {
        std::array<uint8_t, 8> p{};
        uint64_t v = i;
        for (int d = 7; d >= 0; --d) {
            p[static_cast<size_t>(d)] = static_cast<uint8_t>(v % 10);
            v /= 10;
        }
        FdcaRule rule(p);
        if (rule.affine()) {
            bool all = true;
            for (int n : n_range) all = all && is_reversible_affine(rule, n);
            keep[i] = all;
            return;
        }
        if (!probe_maybe_injective(rule, n_min, opts.probe_samples, 0x9e3779b97f4a7c15ull ^ i)) return;
        bool all = true;
        for (int n : n_range) {
            if (!is_reversible_bruteforce(rule, n, opts.brute_n_budget)) {
                all = false;
                break;
            }
        }
        keep[i] = all;
    });
    for (uint64_t i = 0; i < limit; ++i) {
        if (!keep[i]) continue;
        std::array<uint8_t, 8> p{};
        uint64_t v = i;
        for (int d = 7; d >= 0; --d) {
            p[static_cast<size_t>(d)] = static_cast<uint8_t>(v % 10);
            v /= 10;
        }
        CatalogEntry e;
        e.rule = FdcaRule(p);
        e.reversible_n = n_range;
        cat.entries.push_back(std::move(e));
    }
    cat.provenance = "scan:full(limit=" + std::to_string(limit) + ")";
    return cat;
}

RuleCatalog scan_explicit(const std::vector<FdcaRule>& rules, const std::vector<int>& n_range,
                          const ScanOptions& opts) {
    check_n_range(n_range);
    RuleCatalog cat;
    for (const FdcaRule& rule : rules) {
        CatalogEntry e;
        e.rule = rule;
        bool all = true;
        for (int n : n_range) {
            const bool ok = rule.affine() ? is_reversible_affine(rule, n)
                                          : is_reversible_bruteforce(rule, n, opts.brute_n_budget);
            if (ok) e.reversible_n.push_back(n);
            all = all && ok;
        }
        if (all) cat.entries.push_back(std::move(e));
    }
    cat.provenance = "scan:explicit";
    return cat;
}

namespace {

void ensure_stats(RuleCatalog& cat, int n, int threads) {
    std::vector<size_t> missing;
    for (size_t i = 0; i < cat.entries.size(); ++i) {
        if (!cat.entries[i].stats.count(n)) missing.push_back(i);
    }
    if (missing.empty()) return;
    if (n > 8) {
        throw BudgetError("cycle statistics need full enumeration, supported for n <= 8; requested n=" +
                          std::to_string(n));
    }
    std::vector<CycleStats> computed(missing.size());
    detail::parallel_for(0, missing.size(), threads, [&](size_t mi) {
        EnumerateOptions eopts;
        eopts.materialize = 0; // stats only
        computed[mi] = enumerate_cycles(cat.entries[missing[mi]].rule, n, eopts).stats();
    });
    for (size_t mi = 0; mi < missing.size(); ++mi) {
        cat.entries[missing[mi]].stats[n] = computed[mi];
    }
}

void ensure_chaos(RuleCatalog& cat, int threads) {
    std::vector<size_t> missing;
    for (size_t i = 0; i < cat.entries.size(); ++i) {
        if (!cat.entries[i].chaos) missing.push_back(i);
    }
    std::vector<ChaosProfile> computed(missing.size());
    detail::parallel_for(0, missing.size(), threads, [&](size_t mi) {
        computed[mi] = chaos_profile(cat.entries[missing[mi]].rule);
    });
    for (size_t mi = 0; mi < missing.size(); ++mi) cat.entries[missing[mi]].chaos = computed[mi];
}

} // namespace

RuleCatalog filter_cycle_structure(const RuleCatalog& catalog, int n, const CycleSelector& sel,
                                   int threads) {
    RuleCatalog work = catalog;
    if (sel.kind != CycleSelector::Kind::accept_all) ensure_stats(work, n, threads);

    uint64_t quantile_cut = 0;
    if (sel.kind == CycleSelector::Kind::lowest_quantile) {
        std::vector<uint64_t> counts;
        counts.reserve(work.entries.size());
        for (const auto& e : work.entries) counts.push_back(e.stats.at(n).cycle_count);
        std::sort(counts.begin(), counts.end());
        if (counts.empty()) throw PreconditionError("cannot take a quantile of an empty catalog");
        const double pos = sel.quantile * static_cast<double>(counts.size());
        size_t idx = pos <= 0.0 ? 0 : static_cast<size_t>(std::ceil(pos)) - 1;
        idx = std::min(idx, counts.size() - 1);
        quantile_cut = counts[idx];
    }

    RuleCatalog out;
    out.family_counts = catalog.family_counts;
    for (const auto& e : work.entries) {
        bool keep = false;
        switch (sel.kind) {
        case CycleSelector::Kind::accept_all:
            keep = true;
            break;
        case CycleSelector::Kind::exact:
            keep = e.stats.at(n).cycle_count == sel.cycles && e.stats.at(n).max_cycle_length == sel.max_len;
            break;
        case CycleSelector::Kind::count_at_most:
            keep = e.stats.at(n).cycle_count <= sel.cycles;
            break;
        case CycleSelector::Kind::count_in_set:
            keep = std::find(sel.count_set.begin(), sel.count_set.end(), e.stats.at(n).cycle_count) !=
                   sel.count_set.end();
            break;
        case CycleSelector::Kind::lowest_quantile:
            keep = e.stats.at(n).cycle_count <= quantile_cut;
            break;
        }
        if (keep) out.entries.push_back(e);
    }
    out.provenance = catalog.provenance + " | cycle-filter(n=" + std::to_string(n) + ")";
    return out;
}

RuleCatalog filter_chaotic(const RuleCatalog& catalog, ChaoticStage stage,
                           const ChaoticThresholds& thr, int threads) {
    RuleCatalog work = catalog;
    ensure_chaos(work, threads);
    RuleCatalog out;
    out.family_counts = catalog.family_counts;

    // stages are cumulative: each one implies the conditions of the stage
    // before it, so applying "second" straight to a raw scan still lands on
    // the published survivor set
    const Rate zero{0, 1}, one{1, 1};
    for (auto& e : work.entries) {
        const ChaosProfile& c = *e.chaos;
        const bool first_ok = max(c.lambda_p, c.eta_p).value() <= thr.first_max_p &&
                              c.delta_p.value() >= thr.first_min_delta;
        const bool no_flow = c.lambda_p == zero && c.eta_p == zero;
        const bool right_only = c.lambda_p == zero && c.eta_p == one;
        const bool left_only = c.lambda_p == one && c.eta_p == zero;
        const bool second_ok = first_ok && !(no_flow || right_only || left_only);
        const bool keep = stage == ChaoticStage::first ? first_ok : second_ok;
        if (keep) out.entries.push_back(std::move(e));
    }
    if (stage == ChaoticStage::third) {
        out = filter_cycle_structure(out, thr.third_n,
                                     CycleSelector::exact(thr.third_cycles, thr.third_max_len),
                                     threads);
    }
    const char* name = stage == ChaoticStage::first ? "first"
                       : stage == ChaoticStage::second ? "second" : "third";
    out.provenance = catalog.provenance + " | chaotic-filter(" + name + ")";
    return out;
}

std::vector<FdcaRule> shipped_candidates_raw() {
    // As published, row by row; eight entries repeat.
    static const int raw[36][4] = {
        {1, 7, 8, 1}, {3, 7, 6, 7}, {4, 9, 3, 1}, {6, 7, 3, 7},
        {3, 9, 4, 1}, {0, 1, 5, 7}, {1, 7, 8, 3}, {3, 7, 6, 9},
        {4, 9, 3, 3}, {6, 7, 3, 9}, {3, 9, 4, 3}, {0, 1, 5, 9},
        {1, 7, 8, 7}, {3, 9, 4, 1}, {4, 9, 3, 7}, {3, 7, 6, 1},
        {3, 9, 4, 7}, {5, 1, 0, 1}, {1, 7, 8, 9}, {3, 9, 4, 3},
        {4, 9, 3, 9}, {3, 7, 6, 3}, {3, 9, 4, 9}, {5, 1, 0, 3},
        {3, 7, 6, 1}, {3, 9, 4, 7}, {6, 7, 3, 1}, {3, 7, 6, 7},
        {0, 1, 5, 1}, {5, 1, 0, 7}, {3, 7, 6, 3}, {3, 9, 4, 9},
        {6, 7, 3, 3}, {3, 7, 6, 9}, {0, 1, 5, 3}, {5, 1, 0, 9},
    };
    std::vector<FdcaRule> rules;
    rules.reserve(36);
    for (const auto& r : raw) rules.push_back(affine_rule(r[0], r[1], r[2], r[3]));
    return rules;
}

RuleCatalog shipped_candidates() {
    RuleCatalog cat;
    std::set<FdcaRule> seen;
    for (const FdcaRule& rule : shipped_candidates_raw()) {
        if (!seen.insert(rule).second) continue;
        CatalogEntry e;
        e.rule = rule;
        for (int n = 6; n <= 10; ++n) {
            if (is_reversible_affine(rule, n)) e.reversible_n.push_back(n);
        }
        cat.entries.push_back(std::move(e));
    }
    cat.provenance = "shipped-candidates(raw=36,distinct=" + std::to_string(cat.entries.size()) + ")";
    return cat;
}

namespace {

double round8(double v) { return std::round(v * 1e8) / 1e8; }

json rate_to_json(const Rate& r) { return round8(r.value()); }

json chaos_to_json(const ChaosProfile& c) {
    json j;
    j["lambda_p"] = rate_to_json(c.lambda_p);
    j["eta_p"] = rate_to_json(c.eta_p);
    j["lambda_c"] = rate_to_json(c.lambda_c);
    j["eta_c"] = rate_to_json(c.eta_c);
    j["delta_p"] = rate_to_json(c.delta_p);
    j["p"] = json::array({rate_to_json(c.p().first), rate_to_json(c.p().second)});
    return j;
}

json entry_to_json(const CatalogEntry& e) {
    json j;
    j["rule"] = e.rule.compact();
    j["reversible_n"] = e.reversible_n;
    if (!e.stats.empty()) {
        json s = json::object();
        for (const auto& [n, st] : e.stats) {
            s[std::to_string(n)] = {{"cycles", st.cycle_count},
                                    {"max_len", st.max_cycle_length},
                                    {"mean_len", st.mean_cycle_length}};
        }
        j["stats"] = s;
    }
    if (e.chaos) j["chaos"] = chaos_to_json(*e.chaos);
    return j;
}

} // namespace

void write_catalog_jsonl(const RuleCatalog& catalog, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw PreconditionError("cannot open catalog file for writing: " + path);
    json header;
    header["provenance"] = catalog.provenance;
    if (!catalog.family_counts.empty()) {
        json fc = json::object();
        for (const auto& [n, c] : catalog.family_counts) fc[std::to_string(n)] = c;
        header["family_counts"] = fc;
    }
    header["entries"] = catalog.entries.size();
    out << header.dump() << '\n';
    for (const auto& e : catalog.entries) out << entry_to_json(e).dump() << '\n';
}

RuleCatalog read_catalog_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw PreconditionError("cannot open catalog file: " + path);
    RuleCatalog cat;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j = json::parse(line);
        if (first && j.contains("provenance")) {
            cat.provenance = j["provenance"].get<std::string>();
            if (j.contains("family_counts")) {
                for (auto& [k, v] : j["family_counts"].items()) {
                    cat.family_counts[std::stoi(k)] = v.get<uint64_t>();
                }
            }
            first = false;
            continue;
        }
        first = false;
        CatalogEntry e;
        e.rule = FdcaRule::parse(j.at("rule").get<std::string>());
        if (j.contains("reversible_n")) e.reversible_n = j["reversible_n"].get<std::vector<int>>();
        if (j.contains("stats")) {
            for (auto& [k, v] : j["stats"].items()) {
                CycleStats st;
                st.cycle_count = v.at("cycles").get<uint64_t>();
                st.max_cycle_length = v.at("max_len").get<uint64_t>();
                st.mean_cycle_length = v.at("mean_len").get<double>();
                e.stats[std::stoi(k)] = st;
            }
        }
        // chaos profiles are recomputed rather than parsed back from their
        // rounded decimal form
        cat.entries.push_back(std::move(e));
    }
    return cat;
}

} // namespace fdca
