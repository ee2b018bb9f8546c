// Copyright 2026 The plapreg Authors
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

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace plapreg::csv {

struct Document {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// RFC 4180 style reader: comma separated, double-quoted fields may contain
// commas, quotes ("") and newlines. Accepts LF or CRLF line endings and a
// leading UTF-8 BOM. Throws MalformedCsv on ragged rows or an unterminated
// quote.
Document Parse(std::string_view text);

// Quotes the field only when it contains a comma, quote, or line break.
std::string EscapeField(std::string_view field);

void WriteRow(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace plapreg::csv
