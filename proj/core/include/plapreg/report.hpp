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

#include <span>
#include <string>
#include <string_view>

#include "plapreg/eval.hpp"

namespace plapreg {

// JSON array of report objects. config_json, when non-empty, must be a JSON
// document and is embedded in every report under "config".
std::string ReportsToJson(std::span<const EvalReport> reports,
                          std::string_view config_json = {});

// Header: target,dataset,model,p,k,gamma,c,lambda,degree,training_pct,
// rmse_mean,rmse_std,nonconverged_count. Parameters that do not apply to a
// model are empty cells; p = inf is written as "inf".
std::string ReportsToCsv(std::span<const EvalReport> reports);

// training_pct,best_p,best_k,rmse_mean
std::string OptimaToCsv(std::span<const SweepOptimum> optima);

// p,rmse_mean,rmse_std,nonconverged_count
std::string SeriesToCsv(const AsymptoticSeries& series);

std::string AsymptoticToJson(const AsymptoticResult& result,
                             std::string_view config_json = {});

}  // namespace plapreg
