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

#include "fdca/kernels.hpp"

namespace fdca::kernels::detail {

void step_planes_scalar(const RuleTable& table, int n, const uint8_t* in,
                        uint8_t* out, size_t stride, size_t lanes) {
    const uint8_t* t = table.data().data();
    for (int pos = 0; pos < n; ++pos) {
        const uint8_t* self = in + static_cast<size_t>(pos) * stride;
        const uint8_t* left = pos > 0 ? self - stride : nullptr;
        const uint8_t* right = pos + 1 < n ? self + stride : nullptr;
        uint8_t* dst = out + static_cast<size_t>(pos) * stride;
        for (size_t l = 0; l < lanes; ++l) {
            const unsigned x = left ? left[l] : 0u;
            const unsigned y = self[l];
            const unsigned z = right ? right[l] : 0u;
            dst[l] = t[100 * x + 10 * y + z];
        }
    }
}

} // namespace fdca::kernels::detail
