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

#ifndef POISON_OFFLINE_H_
#define POISON_OFFLINE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "poison/bandit.h"
#include "poison/model.h"
#include "poison/solver.h"

namespace poison {

enum class AttackProblem { kGreedyMargin, kUcbMargin, kTsUnion, kTsPerArm };

std::string AttackProblemName(AttackProblem problem);

// Which relaxation of the Thompson Sampling goal to solve.
enum class TsRelaxation { kUnion, kPerArm };
std::string TsRelaxationName(TsRelaxation relaxation);
TsRelaxation ParseTsRelaxation(const std::string& name);

struct VerificationRecord {
  double target_probability = 0.0;
  double std_error = 0.0;  // 0 for exact probabilities
  double required_probability = 0.0;
  bool exact = true;
  int64_t samples = 0;
  bool success = false;
};

struct OfflineAttackPlan {
  AttackProblem problem = AttackProblem::kGreedyMargin;
  int target = 0;
  // xi for the margin problems, delta for the Thompson Sampling problems.
  double parameter = 0.0;
  // Error tolerance the attack actually guarantees: (K-1)/K * alpha_{T+1}
  // for epsilon-greedy, 0 for UCB, delta for Thompson Sampling.
  double error_tolerance = 0.0;
  std::vector<double> shifts;
  // eps_a = shifts[a] repeated count(a) times.
  std::vector<std::vector<double>> poison;
  double objective = 0.0;  // sum_a ||eps_a||^2
  double effort_ratio = 0.0;
  SolverResult solver;
};

// Mean-shift problem for `history` (weights = pull counts, base means =
// pre-attack means). Throws IllPosedError if some arm was never pulled.
ReducedProblem BuildProblem(const History& history, int target,
                            AttackConstraint constraint);

// Target mean at least xi above every other arm.
OfflineAttackPlan AttackEpsGreedy(const History& history, int target,
                                  double xi, const AgentParams& params = {});

// Target UCB index at round T+1 at least xi above every other index.
OfflineAttackPlan AttackUcb(const History& history, int target, double xi,
                            double sigma);

OfflineAttackPlan AttackTs(const History& history, int target, double delta,
                           double sigma, TsRelaxation relaxation,
                           TsPosterior posterior = TsPosterior::kScaled);

// Applies the plan's poison, replays the learner and checks that the target
// is pulled next with probability at least the required level: exactly for
// epsilon-greedy (required 1 - (K-1)/K * alpha_{T+1}) and UCB (required
// 1 - delta), by Monte Carlo for Thompson Sampling (required 1 - delta,
// accepted when the estimate is within 3 standard errors of it).
VerificationRecord VerifyOffline(const std::vector<std::vector<double>>& poison,
                                 int target, const History& history,
                                 Algorithm algo, const AgentParams& params,
                                 double delta, int64_t mc_samples, Rng& rng,
                                 Execution exec = Execution::kParallel);

inline VerificationRecord VerifyOffline(const OfflineAttackPlan& plan,
                                        const History& history,
                                        Algorithm algo,
                                        const AgentParams& params,
                                        double delta, int64_t mc_samples,
                                        Rng& rng,
                                        Execution exec = Execution::kParallel) {
  return VerifyOffline(plan.poison, plan.target, history, algo, params, delta,
                       mc_samples, rng, exec);
}

}  // namespace poison

#endif  // POISON_OFFLINE_H_
