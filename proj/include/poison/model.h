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

#ifndef POISON_MODEL_H_
#define POISON_MODEL_H_

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "poison/rng.h"

// Arms are 0-based everywhere inside the library. Files and the command line
// use 1-based arm numbers and convert at the boundary.
namespace poison {

// Ground truth of a stochastic bandit: r_t = means[a_t] + N(0, sigma^2).
class BanditInstance {
 public:
  // Requires at least two arms, sigma >= 0 and a target strictly below the
  // best mean. sigma == 0 gives a noise-free environment.
  BanditInstance(std::vector<double> means, double sigma, int target);

  int num_arms() const { return static_cast<int>(means_.size()); }
  const std::vector<double>& means() const { return means_; }
  double mean(int arm) const { return means_.at(arm); }
  double sigma() const { return sigma_; }
  int target() const { return target_; }
  double best_mean() const;

 private:
  std::vector<double> means_;
  double sigma_;
  int target_;
};

double DrawReward(const BanditInstance& instance, int arm, Rng& rng);

// Pull log with both the environment's reward and the reward the learner saw.
class History {
 public:
  struct Record {
    int64_t round;  // 1-based
    int arm;
    double reward_pre;
    double reward_post;
  };

  explicit History(int num_arms);

  void Append(int arm, double reward_pre, double reward_post);
  void Append(int arm, double reward) { Append(arm, reward, reward); }

  int num_arms() const { return static_cast<int>(counts_.size()); }
  int64_t rounds() const { return static_cast<int64_t>(records_.size()); }
  const std::vector<Record>& records() const { return records_; }

  int64_t count(int arm) const { return counts_.at(arm); }
  const std::vector<int64_t>& counts() const { return counts_; }
  double sum_pre(int arm) const { return sum_pre_.at(arm); }
  double sum_post(int arm) const { return sum_post_.at(arm); }
  // Means of an unpulled arm are reported as 0.
  double MeanPre(int arm) const;
  double MeanPost(int arm) const;
  std::vector<double> MeansPre() const;

  // y_a: pre-attack rewards of `arm` in round order.
  std::vector<double> RewardVector(int arm) const;
  std::vector<std::vector<double>> RewardVectors() const;

  // Copy whose post-attack rewards are reward_pre + poison[arm][j], where j
  // indexes the pulls of `arm` in round order. Dimensions must match counts.
  History WithPoison(const std::vector<std::vector<double>>& poison) const;

  // Recomputes every per-arm summary from the records and compares exactly.
  bool SummariesConsistent() const;

 private:
  std::vector<Record> records_;
  std::vector<int64_t> counts_;
  std::vector<double> sum_pre_;
  std::vector<double> sum_post_;
};

// (sum |eps_t|^p)^(1/p); p == infinity gives the max-norm.
double PNorm(std::span<const double> values, double p);

class CostLedger {
 public:
  static constexpr double kMaxNorm = std::numeric_limits<double>::infinity();

  explicit CostLedger(double p);

  void Add(double epsilon) { epsilons_.push_back(epsilon); }
  double p() const { return p_; }
  const std::vector<double>& epsilons() const { return epsilons_; }
  double Total() const { return PNorm(epsilons_, p_); }

 private:
  double p_;
  std::vector<double> epsilons_;
};

// ||eps||_2 / ||y||_2 over all arms. Throws DomainError when every reward is
// exactly zero.
double EffortRatio(const std::vector<std::vector<double>>& poison,
                   const History& history);

// sum_a (max_i mu_i - mu_a) N_a(T) with ground-truth means.
double Regret(const History& history, const BanditInstance& instance);

}  // namespace poison

#endif  // POISON_MODEL_H_
