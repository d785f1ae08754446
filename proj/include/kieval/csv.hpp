// Copyright 2026 The kieval Authors
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
//

#ifndef KIEVAL_CSV_HPP_
#define KIEVAL_CSV_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "kieval/error.hpp"

namespace kieval {

using CsvRow = std::vector<std::string>;

// RFC 4180 records: quoted fields may hold commas, doubled quotes and line
// breaks. CRLF and LF endings are both accepted; blank lines are skipped.
inline std::vector<CsvRow> parse_csv(std::string_view text) {
  std::vector<CsvRow> rows;
  CsvRow row;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  std::size_t line = 1;

  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_row = [&] {
    if (!(row.empty() && field.empty() && !field_started)) {
      end_field();
      rows.push_back(std::move(row));
    }
    row.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (ch == '\n') ++line;
        field += ch;
      }
      continue;
    }
    switch (ch) {
      case '"':
        if (!field.empty()) {
          throw ParseError("csv line " + std::to_string(line) + ": quote inside unquoted field");
        }
        quoted = true;
        field_started = true;
        break;
      case ',':
        end_field();
        field_started = true;
        break;
      case '\r':
        break;
      case '\n':
        end_row();
        ++line;
        break;
      default:
        field += ch;
        field_started = true;
    }
  }
  if (quoted) throw ParseError("csv: unterminated quoted field");
  end_row();
  return rows;
}

}  // namespace kieval

#endif  // KIEVAL_CSV_HPP_
