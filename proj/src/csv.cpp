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

#include "fdca/csv.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "fdca/errors.hpp"

namespace fdca {

namespace {

std::string trim(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_line(std::string_view line) {
    std::vector<std::string> out;
    size_t start = 0;
    for (size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            out.push_back(trim(line.substr(start, i - start)));
            start = i + 1;
        }
    }
    return out;
}

} // namespace

CsvTable CsvTable::parse(std::string_view content) {
    CsvTable t;
    size_t pos = 0, line_no = 0;
    while (pos <= content.size()) {
        size_t nl = content.find('\n', pos);
        std::string_view line = content.substr(pos, nl == std::string_view::npos ? std::string_view::npos
                                                                                 : nl - pos);
        pos = nl == std::string_view::npos ? content.size() + 1 : nl + 1;
        if (trim(line).empty()) continue;
        ++line_no;
        auto cells = split_line(line);
        if (line_no == 1) {
            t.header = std::move(cells);
        } else {
            if (cells.size() != t.header.size()) {
                throw ParseError("row " + std::to_string(line_no - 1) + " has " +
                                 std::to_string(cells.size()) + " cells, header has " +
                                 std::to_string(t.header.size()));
            }
            t.rows.push_back(std::move(cells));
        }
    }
    if (t.header.empty()) throw ParseError("CSV input is empty; a header row is required");
    return t;
}

CsvTable CsvTable::read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PreconditionError("cannot open dataset file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

std::vector<size_t> CsvTable::select_columns(const std::vector<std::string>& names) const {
    std::vector<size_t> out;
    if (names.empty()) {
        out.resize(header.size());
        for (size_t i = 0; i < header.size(); ++i) out[i] = i;
        return out;
    }
    for (const std::string& name : names) {
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) {
            throw ParseError("dataset has no column named '" + name + "'");
        }
        out.push_back(static_cast<size_t>(it - header.begin()));
    }
    return out;
}

} // namespace fdca
