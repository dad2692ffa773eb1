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

#include "fdca/cycles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "fdca/errors.hpp"
#include "fdca/kernels.hpp"

namespace fdca {

namespace {

constexpr size_t kBlockLanes = 4096;

void check_enum_budget(int n, int budget_max_n) {
    if (n > budget_max_n) {
        const double configs = std::pow(10.0, n);
        throw BudgetError(
            "enumeration over 10^" + std::to_string(n) + " configurations (" +
            std::to_string(static_cast<uint64_t>(configs)) + ") exceeds the budget of n <= " +
            std::to_string(budget_max_n) + "; visited map alone needs " +
            std::to_string(static_cast<uint64_t>(configs / 8.0)) +
            " bytes — raise the budget explicitly to proceed");
    }
}

/// Column-major odometer: fills `lanes` consecutive configurations
/// starting at `first` into byte planes.
void fill_planes(uint64_t first, int n, uint8_t* planes, size_t stride, size_t lanes) {
    uint8_t digits[kMaxCells];
    uint64_t v = first;
    for (int i = n - 1; i >= 0; --i) {
        digits[i] = static_cast<uint8_t>(v % 10);
        v /= 10;
    }
    for (size_t l = 0; l < lanes; ++l) {
        for (int pos = 0; pos < n; ++pos) planes[static_cast<size_t>(pos) * stride + l] = digits[pos];
        for (int pos = n - 1; pos >= 0; --pos) { // increment
            if (digits[pos] < 9) {
                ++digits[pos];
                break;
            }
            digits[pos] = 0;
        }
    }
}

uint64_t lane_index(const uint8_t* planes, size_t stride, size_t lane, int n) {
    uint64_t v = 0;
    for (int pos = 0; pos < n; ++pos) v = v * 10 + planes[static_cast<size_t>(pos) * stride + lane];
    return v;
}

class Bitmap {
public:
    explicit Bitmap(uint64_t bits) : words_((bits + 63) / 64, 0) {}
    bool test(uint64_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
    void set(uint64_t i) { words_[i >> 6] |= uint64_t{1} << (i & 63); }
    /// Returns previous value.
    bool test_and_set(uint64_t i) {
        uint64_t& w = words_[i >> 6];
        const uint64_t m = uint64_t{1} << (i & 63);
        const bool was = w & m;
        w |= m;
        return was;
    }

private:
    std::vector<uint64_t> words_;
};

[[noreturn]] void throw_witness(const FdcaRule& rule, int n, uint64_t from, uint64_t reentered) {
    throw PreconditionError(
        "rule " + rule.to_string() + " is not reversible at n=" + std::to_string(n) +
        ": configuration " + Configuration::from_index(reentered, n).to_string() +
        " is re-entered from " + Configuration::from_index(from, n).to_string());
}

/// Successor of every configuration, computed through the batch kernels.
std::vector<uint32_t> build_successors(const FdcaRule& rule, int n) {
    const uint64_t total = pow10_u64(n);
    std::vector<uint32_t> succ(total);
    kernels::BatchStepper stepper(rule, n);
    std::vector<uint8_t> in(static_cast<size_t>(n) * kBlockLanes);
    std::vector<uint8_t> out(static_cast<size_t>(n) * kBlockLanes);
    for (uint64_t base = 0; base < total; base += kBlockLanes) {
        const size_t lanes = static_cast<size_t>(std::min<uint64_t>(kBlockLanes, total - base));
        fill_planes(base, n, in.data(), kBlockLanes, lanes);
        stepper.step(in.data(), out.data(), kBlockLanes, lanes);
        for (size_t l = 0; l < lanes; ++l) {
            succ[base + l] = static_cast<uint32_t>(lane_index(out.data(), kBlockLanes, l, n));
        }
    }
    return succ;
}

} // namespace

ConfigIndex CyclePartition::cycle_id(ConfigIndex idx) const {
    if (!has_assignment()) {
        throw PreconditionError("cycle assignment was not materialized for n=" + std::to_string(n_));
    }
    return assignment_[idx];
}

bool is_reversible_affine(const FdcaRule& rule, int n) {
    if (!rule.affine()) {
        throw PreconditionError("determinant oracle requires an affine rule (c0..c3 = 0), got " +
                                rule.to_string());
    }
    const int c4 = rule.param(4), c5 = rule.param(5), c6 = rule.param(6);
    // continuant recurrence for the tridiagonal determinant, mod 10
    int prev = 1;      // D_0
    int cur = c5 % 10; // D_1
    for (int k = 2; k <= n; ++k) {
        int next = (c5 * cur - c4 * c6 * prev) % 10;
        if (next < 0) next += 10;
        prev = cur;
        cur = next;
    }
    const int det = n == 0 ? prev : cur;
    return std::gcd(det, 10) == 1;
}

bool is_reversible_bruteforce(const FdcaRule& rule, int n, int budget_max_n) {
    check_enum_budget(n, budget_max_n);
    const uint64_t total = pow10_u64(n);
    Bitmap seen(total);
    kernels::BatchStepper stepper(rule, n);
    std::vector<uint8_t> in(static_cast<size_t>(n) * kBlockLanes);
    std::vector<uint8_t> out(static_cast<size_t>(n) * kBlockLanes);
    for (uint64_t base = 0; base < total; base += kBlockLanes) {
        const size_t lanes = static_cast<size_t>(std::min<uint64_t>(kBlockLanes, total - base));
        fill_planes(base, n, in.data(), kBlockLanes, lanes);
        stepper.step(in.data(), out.data(), kBlockLanes, lanes);
        for (size_t l = 0; l < lanes; ++l) {
            if (seen.test_and_set(lane_index(out.data(), kBlockLanes, l, n))) return false;
        }
    }
    return true;
}

CyclePartition enumerate_cycles(const FdcaRule& rule, int n, const EnumerateOptions& opts) {
    check_enum_budget(n, opts.budget_max_n);
    const uint64_t total = pow10_u64(n);
    const bool materialize = opts.materialize == -1 ? n <= 7 : opts.materialize != 0;

    CycleStats stats;
    std::vector<uint32_t> assignment;
    if (materialize) assignment.resize(total);
    Bitmap visited(total);
    uint64_t visited_count = 0;

    const bool use_succ_array = sizeof(uint32_t) * total <= opts.succ_array_byte_budget;
    if (use_succ_array) {
        std::vector<uint32_t> succ = build_successors(rule, n);
        for (uint64_t s = 0; s < total; ++s) {
            if (visited.test(s)) continue;
            uint64_t len = 0, u = s, prev = s;
            while (!visited.test(u)) {
                visited.set(u);
                if (materialize) assignment[u] = static_cast<uint32_t>(s);
                prev = u;
                u = succ[u];
                ++len;
            }
            if (u != s) throw_witness(rule, n, prev, u);
            ++stats.cycle_count;
            stats.max_cycle_length = std::max(stats.max_cycle_length, len);
            visited_count += len;
        }
    } else {
        GlobalMap map(rule, n);
        for (uint64_t s = 0; s < total; ++s) {
            if (visited.test(s)) continue;
            uint8_t cells[kMaxCells];
            uint64_t v = s;
            for (int i = n - 1; i >= 0; --i) {
                cells[i] = static_cast<uint8_t>(v % 10);
                v /= 10;
            }
            uint64_t len = 0, u = s, prev = s;
            while (!visited.test(u)) {
                visited.set(u);
                if (materialize) assignment[u] = static_cast<uint32_t>(s);
                prev = u;
                map.step_inplace(cells);
                u = 0;
                for (int i = 0; i < n; ++i) u = u * 10 + cells[i];
                ++len;
            }
            if (u != s) throw_witness(rule, n, prev, u);
            ++stats.cycle_count;
            stats.max_cycle_length = std::max(stats.max_cycle_length, len);
            visited_count += len;
        }
    }

    if (visited_count != total) {
        throw Error("cycle scan visited " + std::to_string(visited_count) + " of " +
                    std::to_string(total) + " configurations");
    }
    stats.mean_cycle_length = static_cast<double>(total) / static_cast<double>(stats.cycle_count);
    return CyclePartition(rule, n, stats, std::move(assignment));
}

ConfigIndex cycle_id_of(const FdcaRule& rule, int n, const Configuration& c, uint64_t step_cap) {
    if (c.size() != n) throw PreconditionError("configuration length does not match n");
    GlobalMap map(rule, n);
    const ConfigIndex start = c.index();
    ConfigIndex min_idx = start;
    uint8_t cells[kMaxCells];
    for (int i = 0; i < n; ++i) cells[i] = c[i];
    for (uint64_t steps = 0; steps < step_cap; ++steps) {
        map.step_inplace(cells);
        ConfigIndex u = 0;
        for (int i = 0; i < n; ++i) u = u * 10 + cells[i];
        if (u == start) return min_idx;
        min_idx = std::min(min_idx, u);
    }
    throw PreconditionError("orbit of " + c.to_string() + " under " + rule.to_string() +
                            " did not close within " + std::to_string(step_cap) +
                            " steps; the rule may be irreversible at n=" + std::to_string(n));
}

std::vector<ConfigIndex> cycle_ids_of(const FdcaRule& rule, int n,
                                      std::span<const Configuration> configs,
                                      uint64_t step_cap) {
    constexpr size_t W = 64;
    std::vector<ConfigIndex> result(configs.size());
    if (configs.empty()) return result;
    for (const Configuration& c : configs) {
        if (c.size() != n) throw PreconditionError("configuration length does not match n");
    }

    kernels::BatchStepper stepper(rule, n);
    std::vector<uint8_t> cur(static_cast<size_t>(n) * W, 0);
    std::vector<uint8_t> nxt(static_cast<size_t>(n) * W, 0);

    struct Lane {
        size_t query = SIZE_MAX;
        ConfigIndex start = 0;
        ConfigIndex min_idx = 0;
        uint64_t steps = 0;
    };
    std::array<Lane, W> lanes;
    size_t next_query = 0, pending = configs.size();

    auto load = [&](size_t lane, size_t query) {
        lanes[lane].query = query;
        lanes[lane].start = configs[query].index();
        lanes[lane].min_idx = lanes[lane].start;
        lanes[lane].steps = 0;
        for (int pos = 0; pos < n; ++pos) {
            cur[static_cast<size_t>(pos) * W + lane] = configs[query][pos];
        }
    };
    for (size_t l = 0; l < W && next_query < configs.size(); ++l) load(l, next_query++);

    while (pending > 0) {
        stepper.step(cur.data(), nxt.data(), W, W);
        std::swap(cur, nxt);
        for (size_t l = 0; l < W; ++l) {
            Lane& lane = lanes[l];
            if (lane.query == SIZE_MAX) continue;
            ConfigIndex u = 0;
            for (int pos = 0; pos < n; ++pos) u = u * 10 + cur[static_cast<size_t>(pos) * W + l];
            ++lane.steps;
            if (u == lane.start) {
                result[lane.query] = lane.min_idx;
                --pending;
                if (next_query < configs.size()) {
                    load(l, next_query++);
                } else {
                    lane.query = SIZE_MAX;
                    for (int pos = 0; pos < n; ++pos) cur[static_cast<size_t>(pos) * W + l] = 0;
                }
                continue;
            }
            lane.min_idx = std::min(lane.min_idx, u);
            if (lane.steps >= step_cap) {
                throw PreconditionError("orbit of " + configs[lane.query].to_string() + " under " +
                                        rule.to_string() + " did not close within " +
                                        std::to_string(step_cap) + " steps; the rule may be irreversible at n=" +
                                        std::to_string(n));
            }
        }
    }
    return result;
}

} // namespace fdca
