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

#ifndef ZEFOZ_TABLE_HPP_
#define ZEFOZ_TABLE_HPP_

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace zefoz {

enum class ColumnKind { Real, Integer, Text };

struct Column {
  std::string name;
  ColumnKind kind = ColumnKind::Real;
};

using Cell = std::variant<double, std::int64_t, std::string>;

struct Table {
  std::vector<Column> columns;
  std::vector<std::vector<Cell>> rows;

  /// Throws InvalidParameter when a row does not match the schema.
  void validate() const;
};

enum class TableFormat { Csv, JsonRecords };

/// CSV: provenance as "# " lines, a header row, reals with 9 significant
/// digits in the C locale. JSON: {"provenance": [...], "records": [...]}.
void write_table(std::ostream& out, const Table& table, TableFormat format,
                 const std::vector<std::string>& provenance = {});

/// Writes to `path`; I/O failures raise IoError naming the path.
void write_table(const std::filesystem::path& path, const Table& table, TableFormat format,
                 const std::vector<std::string>& provenance = {});

/// Real formatted as in CSV output.
std::string format_real(double v);

}  // namespace zefoz

#endif
