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

#ifndef POISON_ONLINE_H_
#define POISON_ONLINE_H_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "poison/bandit.h"
#include "poison/model.h"

namespace poison {

// Confidence radius on pre-attack empirical means:
// beta(n) = sqrt(2 sigma^2 / n * ln(pi^2 K n^2 / (3 delta))).
double Beta(int64_t n, double sigma, int num_arms, double delta);

// -1{arm != target} [means[arm] - means[target] + xi]^+ (needs true means).
double OracleAttack(int arm, const std::vector<double>& means, int target,
                    double xi);

// -1{arm != target} constants[arm]. constants has one entry per arm; the
// target's entry is ignored.
double ConstantAttack(int arm, const std::vector<double>& constants,
                      int target);

// The attacker's own view: pre-attack counts and means plus the running l1
// cost of what it has emitted.
class AceState {
 public:
  AceState(int num_arms, double sigma, double delta, int target);

  void ObservePre(int arm, double reward);
  void Charge(double epsilon);

  int num_arms() const { return static_cast<int>(counts_.size()); }
  double sigma() const { return sigma_; }
  double delta() const { return delta_; }
  int target() const { return target_; }
  int64_t count(int arm) const { return counts_[arm]; }
  double mean(int arm) const;
  double cumulative_cost() const { return cost_; }
  const std::vector<double>& epsilons() const { return epsilons_; }

 private:
  std::vector<int64_t> counts_;
  std::vector<double> sums_;
  double sigma_;
  double delta_;
  int target_;
  double cost_ = 0.0;
  std::vector<double> epsilons_;
};

// -1{arm != target} [mu^_arm - mu^_target + beta(N_arm) + beta(N_target)]^+
// from the current state. Throws UsageError if either arm is unobserved.
double AceEpsilon(const AceState& state, int arm);

// Records the pre-attack reward, then computes and charges the ACE poison
// for this round. Before the target has been observed non-target rounds get
// 0.
double AceAttack(AceState& state, int arm, double pre_reward);

enum class AttackKind { kNone, kOracle, kConstant, kAce };
std::string AttackKindName(AttackKind kind);
AttackKind ParseAttackKind(const std::string& name);

// Sits between environment and learner; sees (arm, pre-attack reward) and
// returns the poison to add.
class Attacker {
 public:
  virtual ~Attacker() = default;
  virtual double Poison(int arm, double pre_reward) = 0;
};

struct AttackerConfig {
  AttackKind kind = AttackKind::kNone;
  double xi = 0.1;                  // oracle margin
  std::vector<double> constants;    // constant attack, one per arm
  double delta = 0.05;              // ACE confidence level
};

std::unique_ptr<Attacker> MakeAttacker(const AttackerConfig& config,
                                       const BanditInstance& instance);

struct OnlineTrialOptions {
  AttackerConfig attacker;
  std::vector<int64_t> checkpoints;  // empty: LogCheckpoints(horizon)
  // Keep every eps_log_stride-th poison value (0 keeps none).
  int64_t eps_log_stride = 0;
};

struct OnlineTrialRecord {
  std::vector<int64_t> pulls;  // N_a(T)
  std::vector<int64_t> checkpoints;
  std::vector<double> cost_at;           // sum |eps_t| up to checkpoint
  std::vector<int64_t> target_pulls_at;  // N_target up to checkpoint
  double total_cost = 0.0;
  double regret = 0.0;
  // |mu^_a(t) - mu_a| < beta(N_a(t)) held for every arm and round.
  bool concentration_held = true;
  // Rounds, while the concentration event held, whose ACE poison exceeded
  // [mu_a - mu_target]^+ + 2 beta(N_a) + 2 beta(N_target).
  int64_t cost_bound_violations = 0;
  std::vector<double> epsilons;
};

// 1, 2, 5, 10, 20, 50, ... up to and including `horizon`.
std::vector<int64_t> LogCheckpoints(int64_t horizon);

// agent picks -> environment draws -> attacker poisons -> agent observes.
OnlineTrialRecord RunOnlineTrial(const BanditInstance& instance,
                                 Algorithm algo, const AgentParams& params,
                                 const OnlineTrialOptions& options,
                                 int64_t horizon, Rng& rng);

}  // namespace poison

#endif  // POISON_ONLINE_H_
