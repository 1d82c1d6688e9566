// Copyright 2026 The torus_secagg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TORUS_SECAGG_CSV_H_
#define TORUS_SECAGG_CSV_H_

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace torus_secagg {

// Shortest decimal text that parses back to exactly `x`; "nan", "inf" and
// "-inf" for non-finite values.
std::string FormatDouble(double x);

// Minimal RFC 4180 writer: fields containing ',', '"' or a newline are
// quoted, rows end with "\n".
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(&out) {}

  void Row(const std::vector<std::string>& fields);

 private:
  std::ostream* out_;
};

// Splits one CSV line (no embedded newlines) honouring quotes.
std::vector<std::string> ParseCsvLine(std::string_view line);

}  // namespace torus_secagg

#endif  // TORUS_SECAGG_CSV_H_
