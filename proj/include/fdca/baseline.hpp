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

#include <cstdint>

#include "fdca/clustering.hpp"
#include "fdca/metrics.hpp"

namespace fdca {

struct KMeansResult {
    Clustering clustering;
    double inertia = 0.0;
    int iterations = 0;
};

/// Lloyd's algorithm with k-means++ seeding and a fixed number of seeded
/// restarts; the restart with the lowest inertia wins. Deterministic for a
/// fixed seed.
KMeansResult kmeans(const Points& points, uint32_t k, uint64_t seed, int restarts = 10,
                    int max_iter = 100);

} // namespace fdca
