// Copyright 2026 The cohrx Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>

#include "cohrx/cli.hpp"
#include "json.hpp"

namespace cohrx::cli {

std::string format_number(double value) {
    if (std::isnan(value)) {
        return "nan";
    }
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

namespace {

std::string cell_text(const Cell& cell) {
    if (std::holds_alternative<std::int64_t>(cell)) {
        return std::to_string(std::get<std::int64_t>(cell));
    }
    if (std::holds_alternative<double>(cell)) {
        return format_number(std::get<double>(cell));
    }
    return "";
}

nlohmann::ordered_json cell_json(const Cell& cell) {
    if (std::holds_alternative<std::int64_t>(cell)) {
        return std::get<std::int64_t>(cell);
    }
    if (std::holds_alternative<double>(cell)) {
        const double v = std::get<double>(cell);
        // JSON has no infinities; the infinite-gain sentinel is spelled out.
        if (!std::isfinite(v)) {
            return format_number(v);
        }
        return v;
    }
    return nullptr;
}

}  // namespace

std::string to_csv(const Table& table) {
    std::string text;
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        text += (c ? "," : "") + table.columns[c];
    }
    text += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) {
                text += ',';
            }
            text += cell_text(row[c]);
        }
        text += '\n';
    }
    return text;
}

std::string to_json(const Table& table) {
    nlohmann::ordered_json records = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        nlohmann::ordered_json record = nlohmann::ordered_json::object();
        for (std::size_t c = 0; c < row.size(); ++c) {
            record[table.columns[c]] = cell_json(row[c]);
        }
        records.push_back(std::move(record));
    }
    return records.dump(2) + "\n";
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << text;
        out.flush();
        return;
    }
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) {
        throw UsageError("cannot open output file: " + path);
    }
    file << text;
    if (!file.flush()) {
        throw UsageError("failed writing output file: " + path);
    }
}

}  // namespace cohrx::cli
