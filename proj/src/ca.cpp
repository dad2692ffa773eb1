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

#include "fdca/ca.hpp"

#include "fdca/errors.hpp"

namespace fdca {

uint64_t pow10_u64(int e) {
    uint64_t v = 1;
    for (int i = 0; i < e; ++i) v *= 10;
    return v;
}

namespace {
void check_n(int n) {
    if (n < 1 || n > kMaxCells) {
        throw PreconditionError("cell length out of supported range 1..19: " + std::to_string(n));
    }
}
} // namespace

Configuration::Configuration(int n) : n_(n) { check_n(n); }

Configuration::Configuration(std::initializer_list<uint8_t> cells) : n_(static_cast<int>(cells.size())) {
    check_n(n_);
    int i = 0;
    for (uint8_t c : cells) {
        if (c > 9) throw PreconditionError("cell state out of range 0..9");
        cells_[static_cast<size_t>(i++)] = c;
    }
}

Configuration Configuration::from_string(std::string_view digits) {
    Configuration c(static_cast<int>(digits.size()));
    for (int i = 0; i < c.n_; ++i) {
        char d = digits[static_cast<size_t>(i)];
        if (d < '0' || d > '9') {
            throw PreconditionError("configuration must be decimal digits: " + std::string(digits));
        }
        c.cells_[static_cast<size_t>(i)] = static_cast<uint8_t>(d - '0');
    }
    return c;
}

Configuration Configuration::from_index(ConfigIndex idx, int n) {
    check_n(n);
    if (idx >= pow10_u64(n)) { // 10^19 still fits uint64
        throw PreconditionError("configuration index out of range for cell length " + std::to_string(n));
    }
    Configuration c(n);
    for (int i = n - 1; i >= 0; --i) {
        c.cells_[static_cast<size_t>(i)] = static_cast<uint8_t>(idx % 10);
        idx /= 10;
    }
    return c;
}

ConfigIndex Configuration::index() const {
    ConfigIndex v = 0;
    for (int i = 0; i < n_; ++i) v = v * 10 + cells_[static_cast<size_t>(i)];
    return v;
}

std::string Configuration::to_string() const {
    std::string s(static_cast<size_t>(n_), '0');
    for (int i = 0; i < n_; ++i) s[static_cast<size_t>(i)] = static_cast<char>('0' + cells_[static_cast<size_t>(i)]);
    return s;
}

GlobalMap::GlobalMap(const FdcaRule& rule, int n)
    : rule_(rule), table_(RuleTable::expand(rule)), n_(n) {
    check_n(n);
}

void GlobalMap::step_inplace(uint8_t* cells) const {
    const uint8_t* t = table_.data().data();
    uint8_t left = 0;
    for (int i = 0; i < n_; ++i) {
        uint8_t self = cells[i];
        uint8_t right = i + 1 < n_ ? cells[i + 1] : uint8_t{0};
        cells[i] = t[100 * left + 10 * self + right];
        left = self;
    }
}

Configuration GlobalMap::step(const Configuration& c) const {
    if (c.size() != n_) throw PreconditionError("configuration length does not match the map");
    Configuration out = c;
    uint8_t buf[kMaxCells];
    for (int i = 0; i < n_; ++i) buf[i] = c[i];
    step_inplace(buf);
    for (int i = 0; i < n_; ++i) out[i] = buf[i];
    return out;
}

Configuration GlobalMap::evolve(const Configuration& c, uint64_t t) const {
    if (c.size() != n_) throw PreconditionError("configuration length does not match the map");
    uint8_t buf[kMaxCells];
    for (int i = 0; i < n_; ++i) buf[i] = c[i];
    for (uint64_t s = 0; s < t; ++s) step_inplace(buf);
    Configuration out(n_);
    for (int i = 0; i < n_; ++i) out[i] = buf[i];
    return out;
}

Configuration step(const FdcaRule& rule, const Configuration& c) {
    return GlobalMap(rule, c.size()).step(c);
}

Configuration evolve(const FdcaRule& rule, const Configuration& c, uint64_t t) {
    return GlobalMap(rule, c.size()).evolve(c, t);
}

} // namespace fdca
