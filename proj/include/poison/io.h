// Copyright 2026 The Poison Authors. All rights reserved.
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

#ifndef POISON_IO_H_
#define POISON_IO_H_

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "poison/model.h"

namespace poison {

// Shortest text that parses back to the same double ("%.17g").
std::string FormatDouble(double value);
double ParseDouble(const std::string& text);
std::vector<std::string> SplitCsvLine(const std::string& line);

// History CSV: header "round,arm,reward_pre,reward_post"; arms 1-based.
void WriteHistoryCsv(const History& history, std::ostream& out);
History ReadHistoryCsv(std::istream& in, int num_arms = 0);

// Plan CSV: header "arm,index,y,epsilon"; arm and index are 1-based, index
// counts pulls of that arm in round order.
struct PlanTable {
  std::vector<std::vector<double>> rewards;
  std::vector<std::vector<double>> poison;
};
void WritePlanCsv(const std::vector<std::vector<double>>& rewards,
                  const std::vector<std::vector<double>>& poison,
                  std::ostream& out);
PlanTable ReadPlanCsv(std::istream& in);

}  // namespace poison

#endif  // POISON_IO_H_
