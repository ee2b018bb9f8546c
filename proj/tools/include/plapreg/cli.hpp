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

#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace plapreg::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitEvalError = 3;

// Runs one command line. args[0] is the program name. Output files go under
// the directory given by --out; tables and messages go to out and err.
int Run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

int Main(int argc, char** argv);

// "2,2.5,inf", "2:0.5:10" (inclusive range) or a mix of both.
std::vector<double> ParseRealList(const std::string& text);
std::vector<std::size_t> ParseCountList(const std::string& text);

}  // namespace plapreg::cli
