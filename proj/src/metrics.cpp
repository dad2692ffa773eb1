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

#include "fdca/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fdca {

namespace {

struct Groups {
    uint32_t k = 0;
    std::vector<std::vector<size_t>> members;
};

Groups validate(const Points& points, const std::vector<uint32_t>& labels) {
    if (points.size() != labels.size()) {
        throw PreconditionError("points and labels differ in length");
    }
    if (points.empty()) throw PreconditionError("no points");
    const size_t dim = points[0].size();
    for (const auto& p : points) {
        if (p.size() != dim) throw PreconditionError("points differ in dimension");
    }
    Groups g;
    for (uint32_t l : labels) g.k = std::max(g.k, l + 1);
    g.members.resize(g.k);
    for (size_t i = 0; i < labels.size(); ++i) g.members[labels[i]].push_back(i);
    for (uint32_t c = 0; c < g.k; ++c) {
        if (g.members[c].empty()) {
            throw PreconditionError("cluster " + std::to_string(c) + " is empty");
        }
    }
    if (g.k < 2) throw MetricError("scores need at least 2 clusters, got " + std::to_string(g.k));
    return g;
}

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

double dist(const std::vector<double>& a, const std::vector<double>& b) {
    return std::sqrt(sq_dist(a, b));
}

std::vector<std::vector<double>> centroids(const Points& points, const Groups& g) {
    const size_t dim = points[0].size();
    std::vector<std::vector<double>> cents(g.k, std::vector<double>(dim, 0.0));
    for (uint32_t c = 0; c < g.k; ++c) {
        for (size_t i : g.members[c]) {
            for (size_t d = 0; d < dim; ++d) cents[c][d] += points[i][d];
        }
        for (size_t d = 0; d < dim; ++d) cents[c][d] /= static_cast<double>(g.members[c].size());
    }
    return cents;
}

} // namespace

double silhouette(const Points& points, const std::vector<uint32_t>& labels) {
    const Groups g = validate(points, labels);
    const size_t n = points.size();
    double total = 0;
    std::vector<double> mean_to(g.k);
    for (size_t i = 0; i < n; ++i) {
        std::fill(mean_to.begin(), mean_to.end(), 0.0);
        for (size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            mean_to[labels[j]] += dist(points[i], points[j]);
        }
        const uint32_t own = labels[i];
        const size_t own_size = g.members[own].size();
        if (own_size <= 1) continue; // singleton scores 0
        const double a = mean_to[own] / static_cast<double>(own_size - 1);
        double b = std::numeric_limits<double>::infinity();
        for (uint32_t c = 0; c < g.k; ++c) {
            if (c == own) continue;
            b = std::min(b, mean_to[c] / static_cast<double>(g.members[c].size()));
        }
        const double m = std::max(a, b);
        total += m > 0 ? (b - a) / m : 0.0;
    }
    return total / static_cast<double>(n);
}

double davies_bouldin(const Points& points, const std::vector<uint32_t>& labels) {
    const Groups g = validate(points, labels);
    const auto cents = centroids(points, g);
    std::vector<double> spread(g.k, 0.0);
    for (uint32_t c = 0; c < g.k; ++c) {
        for (size_t i : g.members[c]) spread[c] += dist(points[i], cents[c]);
        spread[c] /= static_cast<double>(g.members[c].size());
    }
    double sum = 0;
    for (uint32_t i = 0; i < g.k; ++i) {
        double worst = 0;
        for (uint32_t j = 0; j < g.k; ++j) {
            if (i == j) continue;
            const double sep = dist(cents[i], cents[j]);
            if (sep == 0.0) {
                throw MetricError("clusters " + std::to_string(i) + " and " + std::to_string(j) +
                                  " have coincident centroids");
            }
            worst = std::max(worst, (spread[i] + spread[j]) / sep);
        }
        sum += worst;
    }
    return sum / static_cast<double>(g.k);
}

double calinski_harabasz(const Points& points, const std::vector<uint32_t>& labels) {
    const Groups g = validate(points, labels);
    const size_t n = points.size(), dim = points[0].size();
    if (n == g.k) throw MetricError("every point is a singleton cluster; N-K is zero");
    const auto cents = centroids(points, g);
    std::vector<double> global(dim, 0.0);
    for (const auto& p : points) {
        for (size_t d = 0; d < dim; ++d) global[d] += p[d];
    }
    for (size_t d = 0; d < dim; ++d) global[d] /= static_cast<double>(n);

    double between = 0, within = 0;
    for (uint32_t c = 0; c < g.k; ++c) {
        between += static_cast<double>(g.members[c].size()) * sq_dist(cents[c], global);
        for (size_t i : g.members[c]) within += sq_dist(points[i], cents[c]);
    }
    if (within == 0.0) {
        throw MetricError("zero within-cluster dispersion; the score is infinite");
    }
    return (between / static_cast<double>(g.k - 1)) / (within / static_cast<double>(n - g.k));
}

double dunn(const Points& points, const std::vector<uint32_t>& labels) {
    const Groups g = validate(points, labels);
    double min_inter = std::numeric_limits<double>::infinity();
    double max_diam = 0;
    const size_t n = points.size();
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            const double d = dist(points[i], points[j]);
            if (labels[i] == labels[j]) {
                max_diam = std::max(max_diam, d);
            } else {
                min_inter = std::min(min_inter, d);
            }
        }
    }
    if (max_diam == 0.0) {
        throw MetricError("every cluster has zero diameter; the index is undefined");
    }
    return min_inter / max_diam;
}

} // namespace fdca
