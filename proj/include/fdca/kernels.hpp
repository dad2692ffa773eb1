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

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "fdca/rule.hpp"

namespace fdca::kernels {

enum class Backend { scalar, avx2 };

/// Advances many n-cell configurations by one step under a fixed rule, null
/// boundary. Configurations are stored as byte planes, one plane per cell
/// position: in[pos * stride + lane] is cell `pos` of configuration `lane`.
///
/// The scalar backend walks the precomputed 1000-entry rule table; the AVX2
/// backend evaluates the degree-1 polynomial in 16-bit lanes, 32
/// configurations per pass. Both are equivalence-tested against each other
/// and against single-configuration stepping.
class BatchStepper {
public:
    BatchStepper(const FdcaRule& rule, int n);

    /// in and out must not alias. stride >= lanes; planes for positions
    /// 0..n-1 must be valid in both buffers.
    void step(const uint8_t* in, uint8_t* out, size_t stride, size_t lanes) const;

    Backend backend() const { return backend_; }
    const RuleTable& table() const { return table_; }
    int n() const { return n_; }

    /// True when the AVX2 path is compiled in and the CPU supports it.
    static bool avx2_available();
    /// Active default backend name, "avx2" or "scalar".
    static std::string active_backend_name();
    /// Test hook: pin the backend for subsequently constructed steppers.
    /// nullopt restores runtime detection. Throws if avx2 is forced but
    /// unavailable.
    static void force_backend(std::optional<Backend> b);

private:
    FdcaRule rule_;
    RuleTable table_;
    int n_;
    Backend backend_;
};

namespace detail {
void step_planes_scalar(const RuleTable& table, int n, const uint8_t* in,
                        uint8_t* out, size_t stride, size_t lanes);
#if defined(FDCA_HAVE_AVX2_BUILD)
void step_planes_avx2(const FdcaRule& rule, const RuleTable& table, int n,
                      const uint8_t* in, uint8_t* out, size_t stride, size_t lanes);
#endif
} // namespace detail

} // namespace fdca::kernels
