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

#include "fdca/godel.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "fdca/errors.hpp"

namespace fdca {

namespace {

struct DecimalCell {
    int64_t mantissa = 0; // signed, without the point
    int decimals = 0;
};

/// Exact plain-decimal parse; scientific notation is not part of the CSV
/// dialect.
DecimalCell parse_decimal(std::string_view text, size_t row, const std::string& col) {
    auto fail = [&](const std::string& why) -> DecimalCell {
        throw ParseError("row " + std::to_string(row + 1) + ", column '" + col + "': " + why +
                         " ('" + std::string(text) + "')");
    };
    if (text.empty()) return fail("empty cell");
    size_t i = 0;
    bool neg = false;
    if (text[0] == '+' || text[0] == '-') {
        neg = text[0] == '-';
        i = 1;
    }
    DecimalCell cell;
    bool any_digit = false, seen_point = false;
    int digits = 0;
    for (; i < text.size(); ++i) {
        const char c = text[i];
        if (c == '.') {
            if (seen_point) return fail("two decimal points");
            seen_point = true;
            continue;
        }
        if (c < '0' || c > '9') return fail("not a plain decimal number");
        if (++digits > 18) return fail("more than 18 significant digits");
        cell.mantissa = cell.mantissa * 10 + (c - '0');
        if (seen_point) ++cell.decimals;
        any_digit = true;
    }
    if (!any_digit) return fail("no digits");
    if (neg) cell.mantissa = -cell.mantissa;
    return cell;
}

} // namespace

ScaledDataset preprocess_scale(const CsvTable& table, const std::vector<size_t>& columns) {
    ScaledDataset out;
    out.transforms.reserve(columns.size());
    std::vector<std::vector<DecimalCell>> cells(columns.size());

    for (size_t ci = 0; ci < columns.size(); ++ci) {
        const size_t col = columns[ci];
        ColumnTransform tr;
        tr.name = table.header[col];
        cells[ci].reserve(table.rows.size());
        for (size_t r = 0; r < table.rows.size(); ++r) {
            DecimalCell c = parse_decimal(table.rows[r][col], r, tr.name);
            tr.decimals = std::max(tr.decimals, c.decimals);
            cells[ci].push_back(c);
        }
        out.transforms.push_back(tr);
    }

    out.rows.assign(table.rows.size(), std::vector<int64_t>(columns.size()));
    for (size_t ci = 0; ci < columns.size(); ++ci) {
        ColumnTransform& tr = out.transforms[ci];
        int64_t min_v = 0;
        for (size_t r = 0; r < cells[ci].size(); ++r) {
            // scaling to the column-wide decimal count is exact
            int64_t v = cells[ci][r].mantissa;
            for (int e = cells[ci][r].decimals; e < tr.decimals; ++e) v *= 10;
            out.rows[r][ci] = v;
            min_v = std::min(min_v, v);
        }
        if (min_v < 0) {
            tr.shift = -min_v;
            for (auto& row : out.rows) row[ci] += tr.shift;
        }
    }
    return out;
}

std::vector<unsigned long> first_primes(size_t k) {
    std::vector<unsigned long> primes;
    primes.reserve(k);
    unsigned long candidate = 2;
    while (primes.size() < k) {
        bool prime = true;
        for (unsigned long p : primes) {
            if (p * p > candidate) break;
            if (candidate % p == 0) {
                prime = false;
                break;
            }
        }
        if (prime) primes.push_back(candidate);
        candidate += candidate == 2 ? 1 : 2;
    }
    return primes;
}

mpz_class godel_encode(std::span<const int64_t> exps) {
    if (exps.empty()) throw PreconditionError("encoding needs at least one feature");
    for (int64_t e : exps) {
        if (e < 0) throw PreconditionError("encoding needs non-negative integers, got " + std::to_string(e));
    }
    const auto primes = first_primes(exps.size());
    mpz_class g = 1, t;
    for (size_t i = 0; i < exps.size(); ++i) {
        mpz_ui_pow_ui(t.get_mpz_t(), primes[i], static_cast<unsigned long>(exps[i]));
        g *= t;
    }
    return g;
}

std::vector<int64_t> godel_decode(const mpz_class& g, size_t k) {
    if (g < 1) throw PreconditionError("only positive integers decode");
    if (k == 0) throw PreconditionError("decoding needs at least one feature");
    const auto primes = first_primes(k);
    mpz_class rest = g, p;
    std::vector<int64_t> exps(k, 0);
    for (size_t i = 0; i < k; ++i) {
        p = primes[i];
        exps[i] = static_cast<int64_t>(mpz_remove(rest.get_mpz_t(), rest.get_mpz_t(), p.get_mpz_t()));
    }
    if (rest != 1) {
        throw PreconditionError("not an encoding over " + std::to_string(k) +
                                " features: leftover factor " + rest.get_str());
    }
    return exps;
}

GodelFrame build_frame(const std::vector<mpz_class>& numbers, int split_size,
                       bool pad_to_multiple, size_t digit_cap) {
    if (split_size < 1) throw PreconditionError("split size must be positive");
    GodelFrame f;
    f.godel = numbers;
    f.digits.split_size = split_size;
    f.digits.pad_to_multiple = pad_to_multiple;

    size_t width = 1;
    for (size_t r = 0; r < numbers.size(); ++r) {
        if (numbers[r] < 0) throw PreconditionError("row " + std::to_string(r + 1) + " is negative");
        const size_t len = mpz_sizeinbase(numbers[r].get_mpz_t(), 10);
        if (digit_cap > 0 && len > digit_cap) {
            throw BudgetError("row " + std::to_string(r + 1) + " encodes to " + std::to_string(len) +
                              " digits, above the cap of " + std::to_string(digit_cap) +
                              "; rescale features or raise the cap");
        }
        width = std::max(width, len);
    }
    if (pad_to_multiple) {
        const size_t s = static_cast<size_t>(split_size);
        width = (width + s - 1) / s * s;
    }
    f.digits.width = width;
    f.digits.rows.reserve(numbers.size());
    for (const mpz_class& v : numbers) {
        std::string s = v.get_str();
        f.digits.rows.push_back(std::string(width - s.size(), '0') + s);
    }
    return f;
}

Clustering sort_godel_clusters(const std::vector<mpz_class>& numbers, uint32_t k) {
    const size_t n = numbers.size();
    if (k < 1 || k > n) {
        throw PreconditionError("cluster count k=" + std::to_string(k) + " out of range 1.." +
                                std::to_string(n));
    }
    std::set<mpz_class> distinct(numbers.begin(), numbers.end());
    if (k > distinct.size()) {
        throw PreconditionError("k=" + std::to_string(k) + " exceeds the " +
                                std::to_string(distinct.size()) + " distinct values");
    }

    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        const int c = cmp(numbers[a], numbers[b]);
        return c != 0 ? c < 0 : a < b;
    });

    // k-1 largest gaps between consecutive sorted values; ties leftmost
    std::vector<size_t> gap_idx(n > 0 ? n - 1 : 0);
    std::iota(gap_idx.begin(), gap_idx.end(), 0);
    std::vector<mpz_class> gaps(gap_idx.size());
    for (size_t i = 0; i + 1 < n; ++i) gaps[i] = numbers[order[i + 1]] - numbers[order[i]];
    std::sort(gap_idx.begin(), gap_idx.end(), [&](size_t a, size_t b) {
        const int c = cmp(gaps[a], gaps[b]);
        return c != 0 ? c > 0 : a < b;
    });
    std::vector<bool> cut(n, false);
    for (uint32_t i = 0; i + 1 < k; ++i) cut[gap_idx[i]] = true;

    Clustering out;
    out.labels.assign(n, 0);
    uint32_t label = 0;
    for (size_t i = 0; i < n; ++i) {
        out.labels[order[i]] = label;
        if (i + 1 < n && cut[i]) ++label;
    }
    out.k = label + 1;
    out.provenance = {"sort-godel(k=" + std::to_string(k) + ")"};
    return out;
}

uint32_t densify_labels(std::vector<uint32_t>& labels) {
    std::vector<int64_t> remap;
    uint32_t next = 0;
    for (uint32_t l : labels) {
        if (l >= remap.size()) remap.resize(l + 1, -1);
        if (remap[l] < 0) remap[l] = next++;
    }
    for (uint32_t& l : labels) l = static_cast<uint32_t>(remap[l]);
    return next;
}

bool is_valid_partition(const Clustering& c) {
    if (c.k == 0) return c.labels.empty();
    std::vector<bool> seen(c.k, false);
    for (uint32_t l : c.labels) {
        if (l >= c.k) return false;
        seen[l] = true;
    }
    return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

} // namespace fdca
