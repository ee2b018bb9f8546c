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

#include <optional>
#include <string>
#include <string_view>

namespace plapreg {

// Shortest representation that parses back to the same double; "inf",
// "-inf" and "nan" for non-finite values.
std::string FormatDouble(double value);

// Parses a full decimal/scientific literal (surrounding blanks allowed) or
// "inf"/"infinity" in any case. Returns nullopt on anything else.
std::optional<double> ParseDouble(std::string_view text);

std::string ToLower(std::string_view text);
std::string_view Trim(std::string_view text);

}  // namespace plapreg
