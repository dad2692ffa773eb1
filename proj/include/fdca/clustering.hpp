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
#include <string>
#include <vector>

namespace fdca {

/// A partition of dataset rows: one label per row, labels dense in [0, k).
/// provenance records which rules and metric produced it, stage by stage.
struct Clustering {
    std::vector<uint32_t> labels;
    uint32_t k = 0;
    std::vector<std::string> provenance;

    size_t size() const { return labels.size(); }
};

/// Densifies labels to [0, k) keeping first-occurrence order and returns k.
uint32_t densify_labels(std::vector<uint32_t>& labels);

/// Checks the partition invariants: every label < k and every id occupied.
bool is_valid_partition(const Clustering& c);

} // namespace fdca
