// Copyright 2026 The actlab Authors
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

#ifndef ACTLAB_TOOLS_REPORT_H_
#define ACTLAB_TOOLS_REPORT_H_

// Flat report tables and their CSV/JSON renderings.

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace actlab::tools {

// A table cell; monostate renders as an empty CSV field and JSON null.
using Cell = std::variant<std::monostate, double, std::int64_t, std::uint64_t,
                          bool, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

// "%.17g" for finite values; "nan", "inf" and "-inf" otherwise.
std::string FormatDouble(double value);

// Quotes a CSV field when it holds a comma, quote, CR or LF.
std::string CsvEscape(const std::string& field);

std::string RenderCsv(const Table& table);

// Array of row objects keyed by column name, in column order.
nlohmann::ordered_json RowsToJson(const Table& table);

}  // namespace actlab::tools

#endif  // ACTLAB_TOOLS_REPORT_H_
