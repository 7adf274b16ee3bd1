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

#include "poison/io.h"

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <map>

#include "poison/errors.h"

namespace poison {
namespace {

void ExpectHeader(std::istream& in, const std::string& expected) {
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty CSV, expected header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != expected) {
    throw IoError("unexpected CSV header '" + line + "', wanted '" +
                  expected + "'");
  }
}

long ParseInt(const std::string& text) {
  char* end = nullptr;
  errno = 0;
  const long v = std::strtol(text.c_str(), &end, 10);
  if (errno != 0 || end == text.c_str() || *end != '\0') {
    throw IoError("not an integer: '" + text + "'");
  }
  return v;
}

}  // namespace

std::string FormatDouble(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

double ParseDouble(const std::string& text) {
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(text.c_str(), &end);
  if (errno == ERANGE || end == text.c_str() || *end != '\0') {
    throw IoError("not a number: '" + text + "'");
  }
  return v;
}

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  fields.push_back(field);
  return fields;
}

void WriteHistoryCsv(const History& history, std::ostream& out) {
  out << "round,arm,reward_pre,reward_post\n";
  for (const History::Record& r : history.records()) {
    out << r.round << ',' << r.arm + 1 << ',' << FormatDouble(r.reward_pre)
        << ',' << FormatDouble(r.reward_post) << '\n';
  }
}

History ReadHistoryCsv(std::istream& in, int num_arms) {
  ExpectHeader(in, "round,arm,reward_pre,reward_post");
  struct Row {
    int arm;
    double pre, post;
  };
  std::vector<Row> rows;
  std::string line;
  int max_arm = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto f = SplitCsvLine(line);
    if (f.size() != 4) throw IoError("history row needs 4 fields: " + line);
    if (ParseInt(f[0]) != static_cast<long>(rows.size()) + 1) {
      throw IoError("history rounds must be 1..T in order, got " + f[0]);
    }
    const int arm = static_cast<int>(ParseInt(f[1]));
    if (arm < 1) throw IoError("arm numbers start at 1, got " + f[1]);
    max_arm = std::max(max_arm, arm);
    rows.push_back({arm - 1, ParseDouble(f[2]), ParseDouble(f[3])});
  }
  if (num_arms == 0) num_arms = max_arm;
  if (max_arm > num_arms) throw IoError("history arm exceeds arm count");
  History history(num_arms);
  for (const Row& r : rows) history.Append(r.arm, r.pre, r.post);
  return history;
}

void WritePlanCsv(const std::vector<std::vector<double>>& rewards,
                  const std::vector<std::vector<double>>& poison,
                  std::ostream& out) {
  if (rewards.size() != poison.size()) {
    throw UsageError("plan rewards and poison differ in arm count");
  }
  out << "arm,index,y,epsilon\n";
  for (size_t a = 0; a < rewards.size(); ++a) {
    if (rewards[a].size() != poison[a].size()) {
      throw UsageError("plan rewards and poison differ in length");
    }
    for (size_t j = 0; j < rewards[a].size(); ++j) {
      out << a + 1 << ',' << j + 1 << ',' << FormatDouble(rewards[a][j]) << ','
          << FormatDouble(poison[a][j]) << '\n';
    }
  }
}

PlanTable ReadPlanCsv(std::istream& in) {
  ExpectHeader(in, "arm,index,y,epsilon");
  std::map<int, std::map<long, std::pair<double, double>>> cells;
  std::string line;
  int max_arm = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto f = SplitCsvLine(line);
    if (f.size() != 4) throw IoError("plan row needs 4 fields: " + line);
    const int arm = static_cast<int>(ParseInt(f[0]));
    const long index = ParseInt(f[1]);
    if (arm < 1 || index < 1) throw IoError("plan arm/index start at 1");
    if (!cells[arm].emplace(index, std::make_pair(ParseDouble(f[2]),
                                                  ParseDouble(f[3])))
             .second) {
      throw IoError("duplicate plan entry: " + line);
    }
    max_arm = std::max(max_arm, arm);
  }
  PlanTable table;
  table.rewards.resize(max_arm);
  table.poison.resize(max_arm);
  for (const auto& [arm, entries] : cells) {
    long expected = 1;
    for (const auto& [index, cell] : entries) {
      if (index != expected++) {
        throw IoError("plan indices for arm " + std::to_string(arm) +
                      " are not contiguous");
      }
      table.rewards[arm - 1].push_back(cell.first);
      table.poison[arm - 1].push_back(cell.second);
    }
  }
  return table;
}

}  // namespace poison
