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

#include "fdca/chaos.hpp"

#include <array>
#include <numeric>
#include <tuple>

namespace fdca {

Rate Rate::of(uint64_t num, uint64_t den) {
    const uint64_t g = std::gcd(num, den);
    return Rate{num / g, den / g};
}

namespace {

/// Ordered disagreeing pairs among 10 values = 90 - sum over the value
/// histogram of cnt*(cnt-1).
int disagreeing_pairs(const std::array<uint8_t, 10>& vals) {
    int hist[10] = {};
    for (uint8_t v : vals) ++hist[v];
    int agree = 0;
    for (int h : hist) agree += h * (h - 1);
    return 90 - agree;
}

template <typename SetOf>
uint64_t family_disagreement_count(const RuleTable& t, SetOf&& set_of) {
    uint64_t total = 0;
    for (int i = 0; i < 100; ++i) {
        std::array<uint8_t, 10> vals;
        auto set = set_of(i);
        for (int k = 0; k < 10; ++k) vals[static_cast<size_t>(k)] = t[set[static_cast<size_t>(k)]];
        total += static_cast<uint64_t>(disagreeing_pairs(vals));
    }
    return total;
}

int cooking_count_at(const RuleTable& t, Rmt r, bool use_r_set) {
    int cnt = 0;
    if (use_r_set) {
        for (Rmt s : r_set(r)) cnt += t[s] != t[r];
    } else {
        for (Rmt s : l_set(r)) cnt += t[s] != t[r];
    }
    return cnt;
}

template <typename PerSetCount>
float f32_mean(int sets, int den, PerSetCount&& count_of) {
    float sum = 0.0f;
    for (int i = 0; i < sets; ++i) {
        sum += static_cast<float>(count_of(i)) / static_cast<float>(den);
    }
    return sum / static_cast<float>(sets);
}

} // namespace

std::pair<Rate, Rate> info_propagation(const FdcaRule& rule) {
    RuleTable t = RuleTable::expand(rule);
    const uint64_t sib = family_disagreement_count(t, [](int i) { return sibling_set(i); });
    const uint64_t equ = family_disagreement_count(t, [](int i) { return equivalent_set(i); });
    return {Rate::of(sib, 9000), Rate::of(equ, 9000)};
}

std::pair<Rate, Rate> info_cooking(const FdcaRule& rule) {
    RuleTable t = RuleTable::expand(rule);
    uint64_t r_cnt = 0, l_cnt = 0;
    for (int r = 0; r < 1000; ++r) {
        r_cnt += static_cast<uint64_t>(cooking_count_at(t, Rmt(static_cast<uint16_t>(r)), true));
        l_cnt += static_cast<uint64_t>(cooking_count_at(t, Rmt(static_cast<uint16_t>(r)), false));
    }
    return {Rate::of(r_cnt, 82000), Rate::of(l_cnt, 82000)};
}

Rate self_info_propagation(const FdcaRule& rule) {
    RuleTable t = RuleTable::expand(rule);
    const uint64_t cnt = family_disagreement_count(
        t, [](int i) { return self_set(i / 10, i % 10); });
    return Rate::of(cnt, 9000);
}

ChaosProfile chaos_profile(const FdcaRule& rule) {
    ChaosProfile p;
    std::tie(p.lambda_p, p.eta_p) = info_propagation(rule);
    std::tie(p.lambda_c, p.eta_c) = info_cooking(rule);
    p.delta_p = self_info_propagation(rule);
    return p;
}

float lambda_p_f32(const FdcaRule& rule) {
    RuleTable t = RuleTable::expand(rule);
    return f32_mean(100, 90, [&](int i) {
        std::array<uint8_t, 10> vals;
        auto set = sibling_set(i);
        for (int k = 0; k < 10; ++k) vals[static_cast<size_t>(k)] = t[set[static_cast<size_t>(k)]];
        return disagreeing_pairs(vals);
    });
}

float eta_p_f32(const FdcaRule& rule) {
    RuleTable t = RuleTable::expand(rule);
    return f32_mean(100, 90, [&](int i) {
        std::array<uint8_t, 10> vals;
        auto set = equivalent_set(i);
        for (int k = 0; k < 10; ++k) vals[static_cast<size_t>(k)] = t[set[static_cast<size_t>(k)]];
        return disagreeing_pairs(vals);
    });
}

float lambda_c_f32(const FdcaRule& rule) {
    RuleTable t = RuleTable::expand(rule);
    return f32_mean(1000, 82,
                    [&](int r) { return cooking_count_at(t, Rmt(static_cast<uint16_t>(r)), true); });
}

float eta_c_f32(const FdcaRule& rule) {
    RuleTable t = RuleTable::expand(rule);
    return f32_mean(1000, 82,
                    [&](int r) { return cooking_count_at(t, Rmt(static_cast<uint16_t>(r)), false); });
}

} // namespace fdca
