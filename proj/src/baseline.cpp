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

#include "fdca/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

namespace fdca {

namespace {

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

std::vector<std::vector<double>> seed_plus_plus(const Points& pts, uint32_t k,
                                                std::mt19937_64& rng) {
    std::vector<std::vector<double>> centers;
    centers.reserve(k);
    std::uniform_int_distribution<size_t> first(0, pts.size() - 1);
    centers.push_back(pts[first(rng)]);
    std::vector<double> d2(pts.size());
    while (centers.size() < k) {
        double total = 0;
        for (size_t i = 0; i < pts.size(); ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& c : centers) best = std::min(best, sq_dist(pts[i], c));
            d2[i] = best;
            total += best;
        }
        size_t pick = 0;
        if (total > 0) {
            std::uniform_real_distribution<double> u(0.0, total);
            double r = u(rng), acc = 0;
            for (size_t i = 0; i < pts.size(); ++i) {
                acc += d2[i];
                if (acc >= r) {
                    pick = i;
                    break;
                }
            }
        } else {
            std::uniform_int_distribution<size_t> any(0, pts.size() - 1);
            pick = any(rng);
        }
        centers.push_back(pts[pick]);
    }
    return centers;
}

} // namespace

KMeansResult kmeans(const Points& points, uint32_t k, uint64_t seed, int restarts, int max_iter) {
    if (points.empty()) throw PreconditionError("no points");
    if (k < 1 || k > points.size()) {
        throw PreconditionError("k=" + std::to_string(k) + " out of range 1.." +
                                std::to_string(points.size()));
    }
    std::set<std::vector<double>> distinct(points.begin(), points.end());
    if (k > distinct.size()) {
        throw PreconditionError("k=" + std::to_string(k) + " exceeds the " +
                                std::to_string(distinct.size()) + " distinct points");
    }
    const size_t n = points.size(), dim = points[0].size();

    KMeansResult best;
    best.inertia = std::numeric_limits<double>::infinity();
    std::mt19937_64 rng(seed);

    for (int r = 0; r < restarts; ++r) {
        auto centers = seed_plus_plus(points, k, rng);
        std::vector<uint32_t> labels(n, 0);
        int iter = 0;
        for (; iter < max_iter; ++iter) {
            bool changed = false;
            for (size_t i = 0; i < n; ++i) {
                uint32_t bestc = 0;
                double bestd = std::numeric_limits<double>::infinity();
                for (uint32_t c = 0; c < k; ++c) {
                    const double d = sq_dist(points[i], centers[c]);
                    if (d < bestd) {
                        bestd = d;
                        bestc = c;
                    }
                }
                if (labels[i] != bestc) {
                    labels[i] = bestc;
                    changed = true;
                }
            }
            std::vector<std::vector<double>> sums(k, std::vector<double>(dim, 0.0));
            std::vector<size_t> counts(k, 0);
            for (size_t i = 0; i < n; ++i) {
                ++counts[labels[i]];
                for (size_t d = 0; d < dim; ++d) sums[labels[i]][d] += points[i][d];
            }
            for (uint32_t c = 0; c < k; ++c) {
                if (counts[c] == 0) {
                    // revive an empty cluster with the point farthest from its center
                    size_t far = 0;
                    double fard = -1;
                    for (size_t i = 0; i < n; ++i) {
                        const double d = sq_dist(points[i], centers[labels[i]]);
                        if (d > fard) {
                            fard = d;
                            far = i;
                        }
                    }
                    centers[c] = points[far];
                    labels[far] = c;
                    changed = true;
                    continue;
                }
                for (size_t d = 0; d < dim; ++d) centers[c][d] = sums[c][d] / static_cast<double>(counts[c]);
            }
            if (!changed) break;
        }
        double inertia = 0;
        for (size_t i = 0; i < n; ++i) inertia += sq_dist(points[i], centers[labels[i]]);
        if (inertia < best.inertia) {
            best.inertia = inertia;
            best.iterations = iter;
            best.clustering.labels = labels;
            best.clustering.k = k;
        }
    }
    best.clustering.k = densify_labels(best.clustering.labels);
    best.clustering.provenance = {"kmeans(k=" + std::to_string(k) + ",seed=" + std::to_string(seed) +
                                  ")"};
    return best;
}

} // namespace fdca
