/*
 * Copyright 2026 The satfl Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

// Minimal RFC 4180 writer: CRLF line endings, fields quoted only when they
// contain a comma, quote, CR or LF.

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace satfl::csv {

std::string escape(std::string_view field);

/// Fixed-point rendering with the given number of decimals; "nan"/"inf" for
/// non-finite values.
std::string num(double value, int decimals = 6);

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(&out) {}

  void row(const std::vector<std::string>& fields);

 private:
  std::ostream* out_;
};

/// Splits one RFC 4180 record (no embedded newlines). Used by tests and tools.
std::vector<std::string> parse_line(std::string_view line);

}  // namespace satfl::csv
