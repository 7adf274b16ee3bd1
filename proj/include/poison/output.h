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

#ifndef POISON_OUTPUT_H_
#define POISON_OUTPUT_H_

#include <ostream>
#include <string>
#include <vector>

#include "poison/experiment.h"

namespace poison {

// trials.csv columns.
//   offline: trial,success,effort_ratio,objective,target_probability,
//            required_probability,std_error,target_pulls,suboptimal
//   online:  gap,trial,target_fraction,total_cost,regret,concentration_held,
//            then cost_<t> and target_pulls_<t> for each checkpoint t
void WriteTrialsCsv(const ExperimentReport& report, std::ostream& out);
// summary.csv: group,metric,checkpoint,value
void WriteSummaryCsv(const std::vector<SummaryRow>& rows, std::ostream& out);

struct Histogram {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<int64_t> counts;
};
// Equal-width bins over [min, max]; bins = 0 picks ceil(sqrt(n)).
Histogram MakeHistogram(const std::vector<double>& values, int bins);

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};
std::string HistogramSvg(const Histogram& histogram, const std::string& title,
                         const std::string& x_label);
// Log-scaled x axis when log_x is set.
std::string LineChartSvg(const std::vector<Series>& series,
                         const std::string& title, const std::string& x_label,
                         const std::string& y_label, bool log_x);

// Writes config.json, trials.csv, summary.csv and the charts; offline
// artifacts go to plans/plan_<trial>.csv and plans/history_<trial>.csv.
// Returns the paths written, in order.
std::vector<std::string> EmitOutputs(const ExperimentReport& report,
                                     const std::string& directory);

}  // namespace poison

#endif  // POISON_OUTPUT_H_
