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

#include <doctest.h>

#include <cmath>
#include <random>

#include "fdca/metrics.hpp"
#include "naive_metrics.hpp"

using namespace fdca;

namespace {
Points line(std::initializer_list<double> xs) {
    Points p;
    for (double x : xs) p.push_back({x});
    return p;
}
} // namespace

TEST_CASE("silhouette on the two-pair line") {
    const Points p = line({0, 1, 10, 11});
    const std::vector<uint32_t> l{0, 0, 1, 1};
    // per point: a = 1, b = 10.5 or 9.5; mean = (19/21 + 17/19) / 2
    const double expect = (19.0 / 21.0 + 17.0 / 19.0) / 2.0;
    CHECK(silhouette(p, l) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("coincident duplicates across clusters score zero") {
    const Points p{{5, 5}, {5, 5}, {0, 0}, {10, 10}};
    const std::vector<uint32_t> l{0, 1, 0, 1};
    // the duplicated pair has a == b, contributing 0 each
    const double s = silhouette(p, l);
    const double naive = testoracle::naive_silhouette(p, l);
    CHECK(s == doctest::Approx(naive).epsilon(1e-12));
}

TEST_CASE("separated blobs approach a silhouette of 1") {
    Points p;
    std::vector<uint32_t> l;
    for (int i = 0; i < 10; ++i) {
        p.push_back({static_cast<double>(i) * 0.001});
        l.push_back(0);
        p.push_back({1e6 + static_cast<double>(i) * 0.001});
        l.push_back(1);
    }
    CHECK(silhouette(p, l) > 0.999);
}

TEST_CASE("davies-bouldin on the two-pair line") {
    CHECK(davies_bouldin(line({0, 1, 10, 11}), {0, 0, 1, 1}) == doctest::Approx(0.1).epsilon(1e-12));
    // tight far clusters tend to zero
    CHECK(davies_bouldin(line({0, 0.001, 1000, 1000.001}), {0, 0, 1, 1}) < 1e-5);
}

TEST_CASE("davies-bouldin rejects coincident centroids") {
    const Points p{{0}, {2}, {1}, {1}};
    CHECK_THROWS_WITH_AS(davies_bouldin(p, {0, 0, 1, 1}), doctest::Contains("coincident"),
                         MetricError);
}

TEST_CASE("calinski-harabasz on the two-pair line") {
    CHECK(calinski_harabasz(line({0, 2, 10, 12}), {0, 0, 1, 1}) == doctest::Approx(50.0).epsilon(1e-12));
    // doubling the separation increases the score
    CHECK(calinski_harabasz(line({0, 2, 20, 22}), {0, 0, 1, 1}) > 50.0);
}

TEST_CASE("calinski-harabasz degenerate cases") {
    CHECK_THROWS_AS(calinski_harabasz(line({0, 1, 2}), {0, 1, 2}), MetricError); // all singletons
    CHECK_THROWS_WITH_AS(calinski_harabasz(line({1, 1, 5, 5}), {0, 0, 1, 1}),
                         doctest::Contains("zero within-cluster"), MetricError);
}

TEST_CASE("dunn on the two-pair line") {
    CHECK(dunn(line({0, 1, 10, 11}), {0, 0, 1, 1}) == doctest::Approx(9.0).epsilon(1e-12));
    // clusters sharing a coordinate touch
    CHECK(dunn(line({0, 5, 5, 10}), {0, 0, 1, 1}) == 0.0);
    CHECK_THROWS_AS(dunn(line({1, 1, 2, 2}), {0, 0, 1, 1}), MetricError); // zero diameters
}

TEST_CASE("single-cluster inputs are rejected by all four") {
    const Points p = line({1, 2, 3});
    const std::vector<uint32_t> l{0, 0, 0};
    CHECK_THROWS_AS(silhouette(p, l), MetricError);
    CHECK_THROWS_AS(davies_bouldin(p, l), MetricError);
    CHECK_THROWS_AS(calinski_harabasz(p, l), MetricError);
    CHECK_THROWS_AS(dunn(p, l), MetricError);
}

TEST_CASE("translation and scaling invariances") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> coord(-5, 5);
    Points p(12, std::vector<double>(3));
    std::vector<uint32_t> l(12);
    for (size_t i = 0; i < p.size(); ++i) {
        for (auto& x : p[i]) x = coord(rng);
        l[i] = static_cast<uint32_t>(i % 3);
    }
    Points shifted = p, scaled = p;
    for (auto& row : shifted) {
        for (auto& x : row) x += 17.5;
    }
    for (auto& row : scaled) {
        for (auto& x : row) x *= 3.25;
    }
    CHECK(silhouette(shifted, l) == doctest::Approx(silhouette(p, l)).epsilon(1e-9));
    CHECK(davies_bouldin(shifted, l) == doctest::Approx(davies_bouldin(p, l)).epsilon(1e-9));
    CHECK(calinski_harabasz(shifted, l) ==
          doctest::Approx(calinski_harabasz(p, l)).epsilon(1e-9));
    CHECK(dunn(shifted, l) == doctest::Approx(dunn(p, l)).epsilon(1e-9));
    CHECK(silhouette(scaled, l) == doctest::Approx(silhouette(p, l)).epsilon(1e-9));
    CHECK(davies_bouldin(scaled, l) == doctest::Approx(davies_bouldin(p, l)).epsilon(1e-9));
    CHECK(dunn(scaled, l) == doctest::Approx(dunn(p, l)).epsilon(1e-9));
}

TEST_CASE("optimized paths match the naive recomputation on random labeled sets") {
    std::mt19937 rng(101);
    std::uniform_real_distribution<double> coord(-10, 10);
    for (int trial = 0; trial < 50; ++trial) {
        std::uniform_int_distribution<size_t> sz(4, 20);
        std::uniform_int_distribution<int> dims(1, 4);
        const size_t n = sz(rng);
        const int d = dims(rng);
        std::uniform_int_distribution<uint32_t> kk(2, static_cast<uint32_t>(n / 2));
        const uint32_t k = kk(rng);
        Points p(n, std::vector<double>(static_cast<size_t>(d)));
        std::vector<uint32_t> l(n);
        for (size_t i = 0; i < n; ++i) {
            for (auto& x : p[i]) x = coord(rng);
            l[i] = i < k ? static_cast<uint32_t>(i) // every cluster occupied
                         : static_cast<uint32_t>(rng() % k);
        }
        CHECK(silhouette(p, l) == doctest::Approx(testoracle::naive_silhouette(p, l)).epsilon(1e-12));
        CHECK(davies_bouldin(p, l) ==
              doctest::Approx(testoracle::naive_davies_bouldin(p, l)).epsilon(1e-12));
        if (n > k) {
            CHECK(calinski_harabasz(p, l) ==
                  doctest::Approx(testoracle::naive_calinski_harabasz(p, l)).epsilon(1e-12));
        }
        CHECK(dunn(p, l) == doctest::Approx(testoracle::naive_dunn(p, l)).epsilon(1e-12));

        // per-point silhouette values stay in [-1, 1]
        for (double s : testoracle::naive_silhouette_per_point(p, l)) {
            CHECK(s >= -1.0);
            CHECK(s <= 1.0);
        }
    }
}
