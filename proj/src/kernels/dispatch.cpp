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

#include "fdca/errors.hpp"

namespace fdca::kernels {

namespace {
std::optional<Backend> g_forced;

Backend detect_backend() {
    if (g_forced) return *g_forced;
#if defined(FDCA_HAVE_AVX2_BUILD)
    if (__builtin_cpu_supports("avx2")) return Backend::avx2;
#endif
    return Backend::scalar;
}
} // namespace

BatchStepper::BatchStepper(const FdcaRule& rule, int n)
    : rule_(rule), table_(RuleTable::expand(rule)), n_(n), backend_(detect_backend()) {
    if (n < 1 || n > 19) {
        throw PreconditionError("cell length out of supported range 1..19: " + std::to_string(n));
    }
}

void BatchStepper::step(const uint8_t* in, uint8_t* out, size_t stride, size_t lanes) const {
#if defined(FDCA_HAVE_AVX2_BUILD)
    if (backend_ == Backend::avx2) {
        detail::step_planes_avx2(rule_, table_, n_, in, out, stride, lanes);
        return;
    }
#endif
    detail::step_planes_scalar(table_, n_, in, out, stride, lanes);
}

bool BatchStepper::avx2_available() {
#if defined(FDCA_HAVE_AVX2_BUILD)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

std::string BatchStepper::active_backend_name() {
    return detect_backend() == Backend::avx2 ? "avx2" : "scalar";
}

void BatchStepper::force_backend(std::optional<Backend> b) {
    if (b == Backend::avx2 && !avx2_available()) {
        throw PreconditionError("avx2 backend not available on this host");
    }
    g_forced = b;
}

} // namespace fdca::kernels
