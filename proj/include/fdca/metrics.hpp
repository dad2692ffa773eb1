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
#include <vector>

#include "fdca/errors.hpp"

namespace fdca {

/// Raised when a score is undefined for the given partition (single
/// cluster, zero dispersion, coincident centroids, ...); the message says
/// which degeneracy. Distinct from PreconditionError so reports can flag
/// the score instead of failing the run.
class MetricError : public PreconditionError {
public:
    explicit MetricError(const std::string& what) : PreconditionError(what) {}
};

using Points = std::vector<std::vector<double>>;

/// Mean silhouette over all points, Euclidean distances. Per point,
/// a = mean intra-cluster distance excluding self, b = smallest mean
/// distance to another cluster, score = (b-a)/max(a,b). Singletons score 0.
double silhouette(const Points& points, const std::vector<uint32_t>& labels);

/// Davies-Bouldin: mean over clusters of the worst (d_i + d_j) / centroid
/// distance ratio, d = mean member distance to centroid.
double davies_bouldin(const Points& points, const std::vector<uint32_t>& labels);

/// Calinski-Harabasz: between-cluster dispersion over within-cluster
/// dispersion, both with squared Euclidean norms, scaled by (K-1) and
/// (N-K).
double calinski_harabasz(const Points& points, const std::vector<uint32_t>& labels);

/// Dunn: smallest inter-cluster point-to-point distance divided by the
/// largest cluster diameter.
double dunn(const Points& points, const std::vector<uint32_t>& labels);

} // namespace fdca
