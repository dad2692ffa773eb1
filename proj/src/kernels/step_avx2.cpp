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

#include <immintrin.h>

#include "fdca/kernels.hpp"

namespace fdca::kernels::detail {

namespace {

// floor(v/10) for v in [0, 2^18) via multiply-high: (v * 52429) >> 19.
inline __m256i mod10_u16(__m256i v) {
    const __m256i magic = _mm256_set1_epi16(static_cast<short>(52429u));
    const __m256i ten = _mm256_set1_epi16(10);
    __m256i q = _mm256_srli_epi16(_mm256_mulhi_epu16(v, magic), 3);
    return _mm256_sub_epi16(v, _mm256_mullo_epi16(q, ten));
}

// One 16-lane u16 evaluation of the degree-1 polynomial. All terms stay
// below 2^14, so the full sum fits u16 without intermediate reduction.
inline __m256i eval_poly_u16(__m256i x, __m256i y, __m256i z, const __m256i c[8]) {
    __m256i xy = _mm256_mullo_epi16(x, y);
    __m256i t = _mm256_mullo_epi16(_mm256_mullo_epi16(xy, z), c[0]);
    t = _mm256_add_epi16(t, _mm256_mullo_epi16(xy, c[1]));
    t = _mm256_add_epi16(t, _mm256_mullo_epi16(_mm256_mullo_epi16(x, z), c[2]));
    t = _mm256_add_epi16(t, _mm256_mullo_epi16(_mm256_mullo_epi16(y, z), c[3]));
    t = _mm256_add_epi16(t, _mm256_mullo_epi16(x, c[4]));
    t = _mm256_add_epi16(t, _mm256_mullo_epi16(y, c[5]));
    t = _mm256_add_epi16(t, _mm256_mullo_epi16(z, c[6]));
    t = _mm256_add_epi16(t, c[7]);
    return mod10_u16(t);
}

inline __m256i widen_lo(__m256i bytes) {
    return _mm256_cvtepu8_epi16(_mm256_castsi256_si128(bytes));
}
inline __m256i widen_hi(__m256i bytes) {
    return _mm256_cvtepu8_epi16(_mm256_extracti128_si256(bytes, 1));
}

inline __m256i pack_u16(__m256i lo, __m256i hi) {
    __m256i packed = _mm256_packus_epi16(lo, hi);
    return _mm256_permute4x64_epi64(packed, 0b11011000);
}

} // namespace

void step_planes_avx2(const FdcaRule& rule, const RuleTable& table, int n,
                      const uint8_t* in, uint8_t* out, size_t stride, size_t lanes) {
    __m256i c[8];
    for (int i = 0; i < 8; ++i) c[i] = _mm256_set1_epi16(rule.param(i));
    const __m256i zero = _mm256_setzero_si256();

    const size_t vec_lanes = lanes & ~size_t{31};
    for (int pos = 0; pos < n; ++pos) {
        const uint8_t* self = in + static_cast<size_t>(pos) * stride;
        const uint8_t* left = pos > 0 ? self - stride : nullptr;
        const uint8_t* right = pos + 1 < n ? self + stride : nullptr;
        uint8_t* dst = out + static_cast<size_t>(pos) * stride;
        for (size_t l = 0; l < vec_lanes; l += 32) {
            __m256i xs = left ? _mm256_loadu_si256(reinterpret_cast<const __m256i*>(left + l)) : zero;
            __m256i ys = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(self + l));
            __m256i zs = right ? _mm256_loadu_si256(reinterpret_cast<const __m256i*>(right + l)) : zero;
            __m256i lo = eval_poly_u16(widen_lo(xs), widen_lo(ys), widen_lo(zs), c);
            __m256i hi = eval_poly_u16(widen_hi(xs), widen_hi(ys), widen_hi(zs), c);
            _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + l), pack_u16(lo, hi));
        }
    }
    if (vec_lanes < lanes) {
        // remainder lanes go through the table path
        for (int pos = 0; pos < n; ++pos) {
            const uint8_t* self = in + static_cast<size_t>(pos) * stride;
            const uint8_t* left = pos > 0 ? self - stride : nullptr;
            const uint8_t* right = pos + 1 < n ? self + stride : nullptr;
            uint8_t* dst = out + static_cast<size_t>(pos) * stride;
            for (size_t l = vec_lanes; l < lanes; ++l) {
                const unsigned x = left ? left[l] : 0u;
                const unsigned y = self[l];
                const unsigned z = right ? right[l] : 0u;
                dst[l] = table.data()[100 * x + 10 * y + z];
            }
        }
    }
}

} // namespace fdca::kernels::detail
