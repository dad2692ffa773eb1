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

#include <doctest.h>

#include <random>
#include <vector>

#include "fdca/ca.hpp"
#include "fdca/kernels.hpp"

using namespace fdca;
using kernels::Backend;
using kernels::BatchStepper;

namespace {

// Formula-driven reference, independent of the table and the batch paths.
void step_reference(const FdcaRule& rule, const uint8_t* in, uint8_t* out, int n) {
    for (int i = 0; i < n; ++i) {
        const int x = i > 0 ? in[i - 1] : 0;
        const int y = in[i];
        const int z = i + 1 < n ? in[i + 1] : 0;
        out[i] = rule.evaluate(Rmt::from_xyz(x, y, z));
    }
}

std::vector<FdcaRule> random_rules(int count, uint32_t seed) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> digit(0, 9);
    std::vector<FdcaRule> rules;
    for (int i = 0; i < count; ++i) {
        std::array<uint8_t, 8> p;
        for (auto& v : p) v = static_cast<uint8_t>(digit(rng));
        rules.emplace_back(p);
    }
    return rules;
}

void check_backend_against_reference(Backend backend, const FdcaRule& rule, int n, size_t lanes,
                                     uint32_t seed) {
    BatchStepper::force_backend(backend);
    BatchStepper stepper(rule, n);
    REQUIRE(stepper.backend() == backend);

    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> digit(0, 9);
    const size_t stride = lanes;
    std::vector<uint8_t> in(static_cast<size_t>(n) * stride), out(static_cast<size_t>(n) * stride);
    for (auto& v : in) v = static_cast<uint8_t>(digit(rng));

    stepper.step(in.data(), out.data(), stride, lanes);

    std::vector<uint8_t> cfg(static_cast<size_t>(n)), expect(static_cast<size_t>(n));
    for (size_t l = 0; l < lanes; ++l) {
        for (int pos = 0; pos < n; ++pos) cfg[static_cast<size_t>(pos)] = in[static_cast<size_t>(pos) * stride + l];
        step_reference(rule, cfg.data(), expect.data(), n);
        for (int pos = 0; pos < n; ++pos) {
            REQUIRE(out[static_cast<size_t>(pos) * stride + l] == expect[static_cast<size_t>(pos)]);
        }
    }
    BatchStepper::force_backend(std::nullopt);
}

} // namespace

TEST_CASE("scalar batch kernel matches the per-cell formula") {
    uint32_t seed = 100;
    for (const FdcaRule& rule : random_rules(6, 11)) {
        for (int n : {1, 2, 6, 8, 19}) {
            check_backend_against_reference(Backend::scalar, rule, n, 97, seed++);
        }
    }
}

TEST_CASE("avx2 batch kernel matches the per-cell formula" *
          doctest::skip(!BatchStepper::avx2_available())) {
    uint32_t seed = 200;
    for (const FdcaRule& rule : random_rules(6, 12)) {
        for (int n : {1, 2, 6, 8, 19}) {
            check_backend_against_reference(Backend::avx2, rule, n, 97, seed++);
        }
    }
}

TEST_CASE("scalar and avx2 backends agree lane for lane" *
          doctest::skip(!BatchStepper::avx2_available())) {
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> digit(0, 9);
    for (const FdcaRule& rule : random_rules(10, 13)) {
        const int n = 7;
        const size_t lanes = 256;
        std::vector<uint8_t> in(static_cast<size_t>(n) * lanes);
        for (auto& v : in) v = static_cast<uint8_t>(digit(rng));
        std::vector<uint8_t> out_scalar(in.size()), out_avx2(in.size());

        BatchStepper::force_backend(Backend::scalar);
        BatchStepper(rule, n).step(in.data(), out_scalar.data(), lanes, lanes);
        BatchStepper::force_backend(Backend::avx2);
        BatchStepper(rule, n).step(in.data(), out_avx2.data(), lanes, lanes);
        BatchStepper::force_backend(std::nullopt);

        REQUIRE(out_scalar == out_avx2);
    }
}

TEST_CASE("table-driven single step agrees with formula step on bulk random configurations") {
    // 10^5 random configurations per rule for a handful of rules
    std::mt19937_64 rng(99);
    for (const FdcaRule& rule : random_rules(3, 17)) {
        GlobalMap map(rule, 8);
        uint8_t cells[8], ref[8], expect[8];
        for (int trial = 0; trial < 100000; ++trial) {
            uint64_t v = rng() % 100000000ull;
            for (int i = 7; i >= 0; --i) {
                cells[i] = static_cast<uint8_t>(v % 10);
                v /= 10;
                ref[i] = cells[i];
            }
            step_reference(rule, ref, expect, 8);
            map.step_inplace(cells);
            for (int i = 0; i < 8; ++i) REQUIRE(cells[i] == expect[i]);
        }
    }
}
