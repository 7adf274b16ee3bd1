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

#include "poison/offline.h"

#include <cmath>

#include "poison/errors.h"

namespace poison {
namespace {

OfflineAttackPlan Expand(const History& history, const ReducedProblem& problem,
                         AttackProblem kind, double parameter,
                         SolverResult solver) {
  OfflineAttackPlan plan;
  plan.problem = kind;
  plan.target = problem.target;
  plan.parameter = parameter;
  plan.shifts = solver.shifts;
  plan.poison.resize(history.num_arms());
  plan.objective = 0.0;
  for (int a = 0; a < history.num_arms(); ++a) {
    plan.poison[a].assign(history.count(a), solver.shifts[a]);
    for (double e : plan.poison[a]) plan.objective += e * e;
  }
  plan.effort_ratio = EffortRatio(plan.poison, history);
  plan.solver = std::move(solver);
  return plan;
}

}  // namespace

std::string AttackProblemName(AttackProblem problem) {
  switch (problem) {
    case AttackProblem::kGreedyMargin:
      return "greedy-margin";
    case AttackProblem::kUcbMargin:
      return "ucb-margin";
    case AttackProblem::kTsUnion:
      return "ts-union";
    case AttackProblem::kTsPerArm:
      return "ts-per-arm";
  }
  return "unknown";
}

std::string TsRelaxationName(TsRelaxation relaxation) {
  return relaxation == TsRelaxation::kUnion ? "union" : "per-arm";
}

TsRelaxation ParseTsRelaxation(const std::string& name) {
  if (name == "union") return TsRelaxation::kUnion;
  if (name == "per-arm") return TsRelaxation::kPerArm;
  throw UsageError("unknown ts relaxation '" + name +
                   "' (expected union or per-arm)");
}

ReducedProblem BuildProblem(const History& history, int target,
                            AttackConstraint constraint) {
  ReducedProblem problem;
  problem.target = target;
  problem.constraint = constraint;
  problem.weights.resize(history.num_arms());
  for (int a = 0; a < history.num_arms(); ++a) {
    if (history.count(a) == 0) {
      throw IllPosedError("arm " + std::to_string(a + 1) +
                          " was never pulled; attack problem is ill-posed");
    }
    problem.weights[a] = static_cast<double>(history.count(a));
  }
  problem.base_means = history.MeansPre();
  problem.Validate();
  return problem;
}

OfflineAttackPlan AttackEpsGreedy(const History& history, int target,
                                  double xi, const AgentParams& params) {
  const ReducedProblem problem =
      BuildProblem(history, target, GreedyMarginConstraint{xi});
  OfflineAttackPlan plan = Expand(history, problem,
                                  AttackProblem::kGreedyMargin, xi,
                                  SolveLinear(problem));
  const int k = history.num_arms();
  plan.error_tolerance = static_cast<double>(k - 1) / k *
                         EpsGreedyAlpha(params, history.rounds() + 1);
  return plan;
}

OfflineAttackPlan AttackUcb(const History& history, int target, double xi,
                            double sigma) {
  const ReducedProblem problem = BuildProblem(
      history, target, UcbMarginConstraint{xi, sigma, history.rounds()});
  OfflineAttackPlan plan = Expand(history, problem, AttackProblem::kUcbMargin,
                                  xi, SolveLinear(problem));
  plan.error_tolerance = 0.0;
  return plan;
}

OfflineAttackPlan AttackTs(const History& history, int target, double delta,
                           double sigma, TsRelaxation relaxation,
                           TsPosterior posterior) {
  OfflineAttackPlan plan;
  if (relaxation == TsRelaxation::kPerArm) {
    const ReducedProblem problem = BuildProblem(
        history, target, TsPerArmConstraint{delta, sigma, posterior});
    plan = Expand(history, problem, AttackProblem::kTsPerArm, delta,
                  SolveLinear(problem));
  } else {
    const ReducedProblem problem = BuildProblem(
        history, target, TsUnionConstraint{delta, sigma, posterior});
    plan = Expand(history, problem, AttackProblem::kTsUnion, delta,
                  SolveTsUnion(problem));
  }
  plan.error_tolerance = delta;
  return plan;
}

VerificationRecord VerifyOffline(const std::vector<std::vector<double>>& poison,
                                 int target, const History& history,
                                 Algorithm algo, const AgentParams& params,
                                 double delta, int64_t mc_samples, Rng& rng,
                                 Execution exec) {
  if (target < 0 || target >= history.num_arms()) {
    throw UsageError("target arm out of range");
  }
  const History poisoned = history.WithPoison(poison);
  const AgentState state = AgentState::FromHistory(poisoned);
  const PullDistribution dist =
      NextPullDistribution(state, algo, params, mc_samples, rng, exec);

  VerificationRecord record;
  record.target_probability = dist.probabilities[target];
  record.std_error = dist.std_errors[target];
  record.exact = dist.exact;
  record.samples = dist.samples;
  const int k = history.num_arms();
  if (algo == Algorithm::kEpsGreedy) {
    record.required_probability =
        1.0 - static_cast<double>(k - 1) / k *
                  EpsGreedyAlpha(params, history.rounds() + 1);
  } else {
    record.required_probability = 1.0 - delta;
  }
  if (record.exact) {
    record.success =
        record.target_probability >= record.required_probability - 1e-12;
  } else {
    record.success = record.target_probability >=
                     record.required_probability - 3.0 * record.std_error;
  }
  return record;
}

}  // namespace poison
