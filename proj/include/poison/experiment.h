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

#ifndef POISON_EXPERIMENT_H_
#define POISON_EXPERIMENT_H_

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "poison/bandit.h"
#include "poison/model.h"
#include "poison/offline.h"
#include "poison/online.h"
#include "poison/parallel.h"

namespace poison {

enum class Mode { kOffline, kOnline };
std::string ModeName(Mode mode);
Mode ParseMode(const std::string& name);

// How trial instances get their arm means.
//   kUniformUnit: target mean 0, every other arm uniform on [0, 1].
//   kExplicit:    `means` as given.
//   kGapGrid:     two arms with means (gap, 0), target arm 2, one group per
//                 gap value.
enum class MeansRule { kUniformUnit, kExplicit, kGapGrid };
std::string MeansRuleName(MeansRule rule);
MeansRule ParseMeansRule(const std::string& name);

struct GapGrid {
  double start = 0.1;
  double stop = 1.0;
  double step = 0.1;
  std::vector<double> Values() const;
};
// "start:stop:step", or a single value.
GapGrid ParseGapGrid(const std::string& text);

struct ExperimentConfig {
  Mode mode = Mode::kOffline;
  int k = 5;
  double sigma = 0.1;
  int64_t horizon = 1000;
  int64_t trials = 200;
  double delta = 0.05;
  double xi = 0.001;
  Algorithm algo = Algorithm::kUcb;
  AttackKind attack = AttackKind::kAce;
  int target = -1;  // 0-based; -1 selects the last arm
  MeansRule means_rule = MeansRule::kUniformUnit;
  std::vector<double> means;
  GapGrid gap_grid;
  uint64_t seed = 42;
  std::string out_dir;
  std::vector<int64_t> checkpoints;  // empty: 1-2-5 log spacing
  int64_t mc_samples = 100000;
  TsPosterior ts_posterior = TsPosterior::kScaled;
  TsRelaxation ts_relaxation = TsRelaxation::kUnion;
  std::vector<double> constants;  // constant attack, one per non-target arm
  double eps_rate = 1.0;
  int hist_bins = 0;     // 0: ceil(sqrt(trials))
  int64_t emit_plans = 0;  // offline: dump plan/history CSVs for this many trials
  int workers = 0;       // 0: OpenMP default; never affects results

  static ExperimentConfig Defaults(Mode mode);
  // Full-size study: 1000 offline trials; online T = 1e5 with 100 trials.
  void ApplyPaperScale();

  int ResolvedTarget() const;
  int ResolvedArms() const;
  AgentParams Agent() const;
  std::vector<int64_t> ResolvedCheckpoints() const;
  // Throws UsageError describing the first invalid field.
  void Validate() const;
};

nlohmann::json ConfigToJson(const ExperimentConfig& config);
// Missing fields keep the defaults of the document's mode.
ExperimentConfig ConfigFromJson(const nlohmann::json& doc);

struct OfflineTrialRow {
  int64_t trial = 0;
  bool success = false;
  double effort_ratio = 0.0;
  double objective = 0.0;
  double target_probability = 0.0;
  double required_probability = 0.0;
  double std_error = 0.0;
  int64_t target_pulls = 0;
  bool suboptimal = false;
};

struct OnlineTrialRow {
  double gap = 0.0;
  int64_t trial = 0;
  double target_fraction = 0.0;
  double total_cost = 0.0;
  double regret = 0.0;
  bool concentration_held = true;
  std::vector<double> cost_at;
  std::vector<int64_t> target_pulls_at;
};

struct OfflineArtifact {
  int64_t trial = 0;
  History history{2};
  OfflineAttackPlan plan;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<int64_t> checkpoints;  // online only
  std::vector<OfflineTrialRow> offline;
  std::vector<OnlineTrialRow> online;
  std::vector<OfflineArtifact> artifacts;

  bool AllVerified() const;
};

struct SummaryRow {
  std::string group;
  std::string metric;
  int64_t checkpoint = 0;  // 0 when the metric is not per checkpoint
  double value = 0.0;
};

// Aggregates computed from the trial rows alone.
std::vector<SummaryRow> Summarize(const ExperimentReport& report);

// Linear interpolation between order statistics (Hyndman-Fan type 7).
double Percentile(std::vector<double> values, double q);
double Mean(const std::vector<double>& values);
// Standard error of the mean (sample standard deviation / sqrt(n)).
double StandardError(const std::vector<double>& values);

// Offline instance for one trial: the same means every time for kExplicit,
// fresh uniform draws otherwise.
BanditInstance OfflineInstance(const ExperimentConfig& config, Rng& rng);
// Unattacked run of the configured learner for config.horizon rounds.
History CollectHistory(const BanditInstance& instance,
                       const ExperimentConfig& config, Rng& rng);
OfflineAttackPlan AttackFor(const History& history,
                            const ExperimentConfig& config);

// One row per trial; trial i draws from stream (seed, i) and verifies with
// stream (seed, i, 1).
ExperimentReport RunOfflineExperiment(const ExperimentConfig& config,
                                      Execution exec = Execution::kParallel);
// One row per (group, trial); trial i of group g draws from (seed, g, i).
ExperimentReport RunOnlineExperiment(const ExperimentConfig& config,
                                     Execution exec = Execution::kParallel);
ExperimentReport RunExperiment(const ExperimentConfig& config,
                               Execution exec = Execution::kParallel);

}  // namespace poison

#endif  // POISON_EXPERIMENT_H_
