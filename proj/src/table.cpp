/* Copyright 2026 The Zefoz Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "zefoz/table.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "zefoz/error.hpp"

namespace zefoz {

void Table::validate() const {
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != columns.size())
      throw InvalidParameter("table row " + std::to_string(r) + " has " +
                             std::to_string(rows[r].size()) + " cells, schema has " +
                             std::to_string(columns.size()));
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (rows[r][c].index() != static_cast<std::size_t>(columns[c].kind))
        throw InvalidParameter("table row " + std::to_string(r) + ": column '" + columns[c].name +
                               "' has the wrong type");
    }
  }
}

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // drop the sign of -0
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 9);
  return std::string(buf, res.ptr);
}

namespace {

std::string csv_cell(const Cell& cell) {
  if (auto d = std::get_if<double>(&cell)) return format_real(*d);
  if (auto i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
  const auto& s = std::get<std::string>(cell);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char ch : s) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  return quoted + '"';
}

nlohmann::ordered_json json_cell(const Cell& cell) {
  if (auto d = std::get_if<double>(&cell)) {
    if (!std::isfinite(*d)) return nullptr;
    return *d;
  }
  if (auto i = std::get_if<std::int64_t>(&cell)) return *i;
  return std::get<std::string>(cell);
}

}  // namespace

void write_table(std::ostream& out, const Table& table, TableFormat format,
                 const std::vector<std::string>& provenance) {
  table.validate();
  if (format == TableFormat::Csv) {
    for (const auto& line : provenance) out << "# " << line << '\n';
    for (std::size_t c = 0; c < table.columns.size(); ++c)
      out << (c ? "," : "") << table.columns[c].name;
    out << '\n';
    for (const auto& row : table.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << csv_cell(row[c]);
      out << '\n';
    }
    return;
  }
  nlohmann::ordered_json doc;
  doc["provenance"] = provenance;
  doc["records"] = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json rec = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < row.size(); ++c) rec[table.columns[c].name] = json_cell(row[c]);
    doc["records"].push_back(std::move(rec));
  }
  out << doc.dump(2) << '\n';
}

void write_table(const std::filesystem::path& path, const Table& table, TableFormat format,
                 const std::vector<std::string>& provenance) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_table(out, table, format, provenance);
  out.flush();
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

}  // namespace zefoz
