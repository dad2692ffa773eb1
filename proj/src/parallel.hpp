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

#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace fdca::detail {

/// Runs f(i) for i in [begin, end) across worker threads. Work items are
/// claimed atomically; callers make results deterministic by writing into
/// per-index slots. The first exception wins and is rethrown.
template <typename F>
void parallel_for(size_t begin, size_t end, int threads, F&& f) {
    if (begin >= end) return;
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    size_t nthreads = threads > 0 ? static_cast<size_t>(threads) : hw;
    nthreads = std::min(nthreads, end - begin);
    if (nthreads <= 1) {
        for (size_t i = begin; i < end; ++i) f(i);
        return;
    }

    std::atomic<size_t> next(begin);
    std::exception_ptr error;
    std::atomic<bool> failed(false);
    auto worker = [&] {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= end || failed.load()) return;
            try {
                f(i);
            } catch (...) {
                if (!failed.exchange(true)) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (size_t t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failed.load() && error) std::rethrow_exception(error);
}

} // namespace fdca::detail
