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

#include "poison/online.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "poison/errors.h"

namespace poison {
namespace {

double PositivePart(double x) { return x > 0.0 ? x : 0.0; }

class NoAttacker : public Attacker {
 public:
  double Poison(int, double) override { return 0.0; }
};

class OracleAttacker : public Attacker {
 public:
  OracleAttacker(std::vector<double> means, int target, double xi)
      : means_(std::move(means)), target_(target), xi_(xi) {}
  double Poison(int arm, double) override {
    return OracleAttack(arm, means_, target_, xi_);
  }

 private:
  std::vector<double> means_;
  int target_;
  double xi_;
};

class ConstantAttacker : public Attacker {
 public:
  ConstantAttacker(std::vector<double> constants, int target)
      : constants_(std::move(constants)), target_(target) {}
  double Poison(int arm, double) override {
    return ConstantAttack(arm, constants_, target_);
  }

 private:
  std::vector<double> constants_;
  int target_;
};

class AceAttacker : public Attacker {
 public:
  AceAttacker(int num_arms, double sigma, double delta, int target)
      : state_(num_arms, sigma, delta, target) {}
  double Poison(int arm, double pre_reward) override {
    return AceAttack(state_, arm, pre_reward);
  }

 private:
  AceState state_;
};

}  // namespace

double Beta(int64_t n, double sigma, int num_arms, double delta) {
  if (n < 1) throw DomainError("beta(n) needs n >= 1");
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("beta needs 0 < delta < 1");
  const double nd = static_cast<double>(n);
  return std::sqrt(2.0 * sigma * sigma / nd *
                   std::log(std::numbers::pi * std::numbers::pi * num_arms *
                            nd * nd / (3.0 * delta)));
}

double OracleAttack(int arm, const std::vector<double>& means, int target,
                    double xi) {
  if (arm == target) return 0.0;
  return -PositivePart(means.at(arm) - means.at(target) + xi);
}

double ConstantAttack(int arm, const std::vector<double>& constants,
                      int target) {
  if (arm == target) return 0.0;
  return -constants.at(arm);
}

AceState::AceState(int num_arms, double sigma, double delta, int target)
    : counts_(num_arms, 0),
      sums_(num_arms, 0.0),
      sigma_(sigma),
      delta_(delta),
      target_(target) {
  if (num_arms < 2) throw UsageError("ACE needs at least two arms");
  if (target < 0 || target >= num_arms) throw UsageError("target out of range");
  if (!(delta > 0.0 && delta < 1.0)) throw UsageError("ACE needs 0 < delta < 1");
  if (!(sigma >= 0.0)) throw UsageError("ACE needs sigma >= 0");
}

void AceState::ObservePre(int arm, double reward) {
  ++counts_.at(arm);
  sums_[arm] += reward;
}

void AceState::Charge(double epsilon) {
  cost_ += std::abs(epsilon);
  epsilons_.push_back(epsilon);
}

double AceState::mean(int arm) const {
  return counts_[arm] > 0 ? sums_[arm] / counts_[arm] : 0.0;
}

double AceEpsilon(const AceState& state, int arm) {
  const int t = state.target();
  if (arm == t) return 0.0;
  if (state.count(t) == 0 || state.count(arm) == 0) {
    throw UsageError("ACE needs the pulled arm and the target observed");
  }
  const int k = state.num_arms();
  return -PositivePart(
      state.mean(arm) - state.mean(t) +
      Beta(state.count(arm), state.sigma(), k, state.delta()) +
      Beta(state.count(t), state.sigma(), k, state.delta()));
}

double AceAttack(AceState& state, int arm, double pre_reward) {
  state.ObservePre(arm, pre_reward);
  const double eps =
      state.count(state.target()) == 0 ? 0.0 : AceEpsilon(state, arm);
  state.Charge(eps);
  return eps;
}

std::string AttackKindName(AttackKind kind) {
  switch (kind) {
    case AttackKind::kNone:
      return "none";
    case AttackKind::kOracle:
      return "oracle";
    case AttackKind::kConstant:
      return "constant";
    case AttackKind::kAce:
      return "ace";
  }
  return "unknown";
}

AttackKind ParseAttackKind(const std::string& name) {
  if (name == "none") return AttackKind::kNone;
  if (name == "oracle") return AttackKind::kOracle;
  if (name == "constant") return AttackKind::kConstant;
  if (name == "ace") return AttackKind::kAce;
  throw UsageError("unknown attack '" + name +
                   "' (expected none, oracle, constant or ace)");
}

std::unique_ptr<Attacker> MakeAttacker(const AttackerConfig& config,
                                       const BanditInstance& instance) {
  switch (config.kind) {
    case AttackKind::kNone:
      return std::make_unique<NoAttacker>();
    case AttackKind::kOracle:
      if (!(config.xi > 0.0)) throw UsageError("oracle attack needs xi > 0");
      return std::make_unique<OracleAttacker>(instance.means(),
                                              instance.target(), config.xi);
    case AttackKind::kConstant:
      if (static_cast<int>(config.constants.size()) != instance.num_arms()) {
        throw UsageError("constant attack needs one constant per arm");
      }
      for (double c : config.constants) {
        if (!(c >= 0.0)) throw UsageError("attack constants must be >= 0");
      }
      return std::make_unique<ConstantAttacker>(config.constants,
                                                instance.target());
    case AttackKind::kAce:
      return std::make_unique<AceAttacker>(instance.num_arms(),
                                           instance.sigma(), config.delta,
                                           instance.target());
  }
  throw UsageError("unknown attack kind");
}

std::vector<int64_t> LogCheckpoints(int64_t horizon) {
  std::vector<int64_t> points;
  for (int64_t decade = 1; decade <= horizon; decade *= 10) {
    for (int64_t m : {1, 2, 5}) {
      if (m * decade <= horizon) points.push_back(m * decade);
    }
    if (decade > horizon / 10) break;
  }
  if (points.empty() || points.back() != horizon) points.push_back(horizon);
  return points;
}

OnlineTrialRecord RunOnlineTrial(const BanditInstance& instance,
                                 Algorithm algo, const AgentParams& params,
                                 const OnlineTrialOptions& options,
                                 int64_t horizon, Rng& rng) {
  const int k = instance.num_arms();
  const int target = instance.target();
  if (horizon < k) throw UsageError("horizon must be at least the arm count");

  OnlineTrialRecord record;
  record.checkpoints =
      options.checkpoints.empty() ? LogCheckpoints(horizon) : options.checkpoints;
  if (!std::is_sorted(record.checkpoints.begin(), record.checkpoints.end()) ||
      record.checkpoints.front() < 1 || record.checkpoints.back() > horizon) {
    throw UsageError("checkpoints must be increasing within 1..T");
  }

  Agent agent(algo, params, k);
  std::unique_ptr<Attacker> attacker = MakeAttacker(options.attacker, instance);
  const bool is_ace = options.attacker.kind == AttackKind::kAce;
  const double delta = options.attacker.delta;

  // Independent pre-attack tracker for the concentration event.
  std::vector<int64_t> pre_counts(k, 0);
  std::vector<double> pre_sums(k, 0.0);
  std::vector<int64_t> pulls(k, 0);
  double cost = 0.0;
  size_t next_checkpoint = 0;

  for (int64_t round = 1; round <= horizon; ++round) {
    const int arm = agent.SelectArm(rng);
    const double reward = DrawReward(instance, arm, rng);
    const double eps = attacker->Poison(arm, reward);
    agent.Observe(arm, reward + eps);
    ++pulls[arm];
    cost += std::abs(eps);

    ++pre_counts[arm];
    pre_sums[arm] += reward;
    if (record.concentration_held) {
      const double radius = Beta(pre_counts[arm], instance.sigma(), k, delta);
      const double mean = pre_sums[arm] / pre_counts[arm];
      if (!(std::abs(mean - instance.mean(arm)) < radius)) {
        record.concentration_held = false;
      }
    }
    if (is_ace && record.concentration_held && arm != target &&
        pre_counts[target] > 0) {
      const double bound =
          PositivePart(instance.mean(arm) - instance.mean(target)) +
          2.0 * Beta(pre_counts[arm], instance.sigma(), k, delta) +
          2.0 * Beta(pre_counts[target], instance.sigma(), k, delta);
      if (std::abs(eps) > bound + 1e-12) ++record.cost_bound_violations;
    }
    if (options.eps_log_stride > 0 && round % options.eps_log_stride == 0) {
      record.epsilons.push_back(eps);
    }
    while (next_checkpoint < record.checkpoints.size() &&
           record.checkpoints[next_checkpoint] == round) {
      record.cost_at.push_back(cost);
      record.target_pulls_at.push_back(pulls[target]);
      ++next_checkpoint;
    }
  }

  record.pulls = pulls;
  record.total_cost = cost;
  const double best = instance.best_mean();
  for (int a = 0; a < k; ++a) {
    record.regret += (best - instance.mean(a)) * static_cast<double>(pulls[a]);
  }
  return record;
}

}  // namespace poison
