// Copyright 2026 The maxineq Authors.
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

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "maxineq/montecarlo.hpp"

namespace maxineq {

// %.17g, with non-finite values spelled inf, -inf and nan.
std::string format_double(double v);

// Canonical JSON: keys sorted, floats at 17 significant digits, two-space
// indentation, trailing newline. Non-finite floats are written as strings.
std::string canonical_json(const nlohmann::json& value);

// RFC 4180 table with a header row and CRLF line endings.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  CsvTable& row(std::vector<std::string> cells);
  std::string str() const;
  std::size_t rows() const { return rows_.size(); }

  static std::string cell(double v) { return format_double(v); }
  static std::string cell(std::size_t v) { return std::to_string(v); }
  static std::string cell(std::string_view v) { return std::string(v); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

std::string csv_quote(std::string_view field);

// Writes to a sibling temporary file and renames it over `path`, creating
// parent directories as needed.
void write_atomic(const std::filesystem::path& path, std::string_view content);

// Ratio envelope with its confidence band on log-log axes.
std::string envelope_svg(const RatioEnvelope& envelope, std::string_view title);

}  // namespace maxineq
