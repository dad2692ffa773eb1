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

#include "fdca/rule.hpp"

#include <bitset>

#include "fdca/errors.hpp"

namespace fdca {

FdcaRule::FdcaRule(const std::array<uint8_t, 8>& params) : params_(params) {
    for (uint8_t p : params_) {
        if (p > 9) {
            throw PreconditionError("rule parameter out of range 0..9: " + std::to_string(p));
        }
    }
}

FdcaRule FdcaRule::parse(std::string_view text) {
    std::array<uint8_t, 8> params{};
    size_t count = 0;
    for (size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c >= '0' && c <= '9') {
            if (count >= 8) {
                throw PreconditionError("rule text has more than 8 digits: " + std::string(text));
            }
            params[count++] = static_cast<uint8_t>(c - '0');
        } else if (c == ',' || c == ' ' || c == '\t' || c == '<' || c == '>') {
            continue;
        } else if (static_cast<unsigned char>(c) == 0xE2 && i + 2 < text.size()) {
            // U+27E8 / U+27E9 mathematical angle brackets
            i += 2;
        } else {
            throw PreconditionError("unexpected character in rule text: " + std::string(text));
        }
    }
    if (count != 8) {
        throw PreconditionError("rule text must contain exactly 8 digits: " + std::string(text));
    }
    return FdcaRule(params);
}

uint8_t FdcaRule::evaluate(Rmt r) const {
    const int x = r.x(), y = r.y(), z = r.z();
    const auto& c = params_;
    int v = c[0] * x * y * z + c[1] * x * y + c[2] * x * z + c[3] * y * z +
            c[4] * x + c[5] * y + c[6] * z + c[7];
    return static_cast<uint8_t>(v % 10);
}

std::string FdcaRule::compact() const {
    std::string s(8, '0');
    for (int i = 0; i < 8; ++i) s[static_cast<size_t>(i)] = static_cast<char>('0' + params_[static_cast<size_t>(i)]);
    return s;
}

std::string FdcaRule::to_string() const {
    std::string s = "<";
    for (int i = 0; i < 8; ++i) {
        if (i) s += ',';
        s += static_cast<char>('0' + params_[static_cast<size_t>(i)]);
    }
    s += '>';
    return s;
}

RuleTable RuleTable::expand(const FdcaRule& rule) {
    RuleTable t;
    for (int r = 0; r < 1000; ++r) {
        t.next_[static_cast<size_t>(r)] = rule.evaluate(Rmt(static_cast<uint16_t>(r)));
    }
    return t;
}

std::string RuleTable::serialize() const {
    std::string s(1000, '0');
    for (int r = 999; r >= 0; --r) {
        s[static_cast<size_t>(999 - r)] = static_cast<char>('0' + next_[static_cast<size_t>(r)]);
    }
    return s;
}

namespace {
void check_set_index(int i) {
    if (i < 0 || i > 99) {
        throw PreconditionError("RMT set index out of range 0..99: " + std::to_string(i));
    }
}
void check_digit(int d, const char* name) {
    if (d < 0 || d > 9) {
        throw PreconditionError(std::string(name) + " out of range 0..9: " + std::to_string(d));
    }
}
} // namespace

std::array<Rmt, 10> sibling_set(int i) {
    check_set_index(i);
    std::array<Rmt, 10> out;
    for (int k = 0; k < 10; ++k) out[static_cast<size_t>(k)] = Rmt(static_cast<uint16_t>(10 * i + k));
    return out;
}

std::array<Rmt, 10> equivalent_set(int i) {
    check_set_index(i);
    std::array<Rmt, 10> out;
    for (int k = 0; k < 10; ++k) out[static_cast<size_t>(k)] = Rmt(static_cast<uint16_t>(100 * k + i));
    return out;
}

std::array<Rmt, 10> self_set(int x, int z) {
    check_digit(x, "x");
    check_digit(z, "z");
    std::array<Rmt, 10> out;
    for (int k = 0; k < 10; ++k) out[static_cast<size_t>(k)] = Rmt(static_cast<uint16_t>(100 * x + 10 * k + z));
    return out;
}

std::array<Rmt, 81> l_set(Rmt r) {
    std::array<Rmt, 81> out;
    size_t idx = 0;
    for (int yp = 0; yp < 10; ++yp) {
        if (yp == r.y()) continue;
        for (int zp = 0; zp < 10; ++zp) {
            if (zp == r.z()) continue;
            out[idx++] = Rmt::from_xyz(r.x(), yp, zp);
        }
    }
    return out;
}

std::array<Rmt, 81> r_set(Rmt r) {
    std::array<Rmt, 81> out;
    size_t idx = 0;
    for (int xp = 0; xp < 10; ++xp) {
        if (xp == r.x()) continue;
        for (int yp = 0; yp < 10; ++yp) {
            if (yp == r.y()) continue;
            out[idx++] = Rmt::from_xyz(xp, yp, r.z());
        }
    }
    return out;
}

namespace {
bool all_sets_injective(const FdcaRule& rule, std::array<Rmt, 10> (*set_of)(int)) {
    RuleTable t = RuleTable::expand(rule);
    for (int i = 0; i < 100; ++i) {
        std::bitset<10> seen;
        for (Rmt r : set_of(i)) {
            uint8_t v = t[r];
            if (seen[v]) return false;
            seen[v] = true;
        }
    }
    return true;
}
} // namespace

bool is_left_permutive(const FdcaRule& rule) {
    return all_sets_injective(rule, &equivalent_set);
}

bool is_right_permutive(const FdcaRule& rule) {
    return all_sets_injective(rule, &sibling_set);
}

bool is_self_replicating_rmt(const FdcaRule& rule, Rmt r) {
    return rule.evaluate(r) == r.y();
}

} // namespace fdca
