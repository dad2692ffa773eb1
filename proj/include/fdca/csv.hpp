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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fdca {

/// Comma-separated, header row required, '.' decimal separator. Cells are
/// kept as raw text so decimal places can be counted exactly downstream.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    static CsvTable parse(std::string_view content);
    static CsvTable read_file(const std::string& path);

    /// Column indices for the requested names, or all columns when empty.
    /// Unknown names raise a ParseError naming the column.
    std::vector<size_t> select_columns(const std::vector<std::string>& names) const;
};

} // namespace fdca
