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

#include "poison/model.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "poison/errors.h"

namespace poison {

BanditInstance::BanditInstance(std::vector<double> means, double sigma,
                               int target)
    : means_(std::move(means)), sigma_(sigma), target_(target) {
  if (means_.size() < 2) throw UsageError("bandit needs at least two arms");
  if (!(sigma_ >= 0.0) || !std::isfinite(sigma_)) {
    throw UsageError("sigma must be finite and nonnegative");
  }
  if (target_ < 0 || target_ >= num_arms()) {
    throw UsageError("target arm out of range");
  }
  for (double m : means_) {
    if (!std::isfinite(m)) throw UsageError("arm means must be finite");
  }
  if (!(means_[target_] < best_mean())) {
    throw UsageError("target arm must be suboptimal");
  }
}

double BanditInstance::best_mean() const {
  return *std::max_element(means_.begin(), means_.end());
}

double DrawReward(const BanditInstance& instance, int arm, Rng& rng) {
  if (arm < 0 || arm >= instance.num_arms()) {
    throw UsageError("arm " + std::to_string(arm) + " out of range");
  }
  return instance.mean(arm) + instance.sigma() * rng.Normal();
}

History::History(int num_arms)
    : counts_(num_arms, 0), sum_pre_(num_arms, 0.0), sum_post_(num_arms, 0.0) {
  if (num_arms < 1) throw UsageError("history needs at least one arm");
}

void History::Append(int arm, double reward_pre, double reward_post) {
  if (arm < 0 || arm >= num_arms()) throw UsageError("arm out of range");
  records_.push_back({rounds() + 1, arm, reward_pre, reward_post});
  ++counts_[arm];
  sum_pre_[arm] += reward_pre;
  sum_post_[arm] += reward_post;
}

double History::MeanPre(int arm) const {
  return counts_.at(arm) > 0 ? sum_pre_[arm] / counts_[arm] : 0.0;
}

double History::MeanPost(int arm) const {
  return counts_.at(arm) > 0 ? sum_post_[arm] / counts_[arm] : 0.0;
}

std::vector<double> History::MeansPre() const {
  std::vector<double> means(num_arms());
  for (int a = 0; a < num_arms(); ++a) means[a] = MeanPre(a);
  return means;
}

std::vector<double> History::RewardVector(int arm) const {
  std::vector<double> y;
  y.reserve(counts_.at(arm));
  for (const Record& r : records_) {
    if (r.arm == arm) y.push_back(r.reward_pre);
  }
  return y;
}

std::vector<std::vector<double>> History::RewardVectors() const {
  std::vector<std::vector<double>> y(num_arms());
  for (int a = 0; a < num_arms(); ++a) y[a].reserve(counts_[a]);
  for (const Record& r : records_) y[r.arm].push_back(r.reward_pre);
  return y;
}

History History::WithPoison(
    const std::vector<std::vector<double>>& poison) const {
  if (static_cast<int>(poison.size()) != num_arms()) {
    throw UsageError("poison has wrong number of arms");
  }
  for (int a = 0; a < num_arms(); ++a) {
    if (static_cast<int64_t>(poison[a].size()) != counts_[a]) {
      throw UsageError("poison vector for arm " + std::to_string(a + 1) +
                       " does not match its pull count");
    }
  }
  History out(num_arms());
  std::vector<size_t> next(num_arms(), 0);
  for (const Record& r : records_) {
    out.Append(r.arm, r.reward_pre, r.reward_pre + poison[r.arm][next[r.arm]++]);
  }
  return out;
}

bool History::SummariesConsistent() const {
  std::vector<int64_t> counts(num_arms(), 0);
  std::vector<double> pre(num_arms(), 0.0), post(num_arms(), 0.0);
  for (size_t i = 0; i < records_.size(); ++i) {
    const Record& r = records_[i];
    if (r.round != static_cast<int64_t>(i) + 1) return false;
    ++counts[r.arm];
    pre[r.arm] += r.reward_pre;
    post[r.arm] += r.reward_post;
  }
  return counts == counts_ && pre == sum_pre_ && post == sum_post_;
}

double PNorm(std::span<const double> values, double p) {
  if (!(p >= 1.0)) throw DomainError("norm order must be >= 1");
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }
  if (p == 1.0) {
    double s = 0.0;
    for (double v : values) s += std::abs(v);
    return s;
  }
  if (p == 2.0) {
    double s = 0.0;
    for (double v : values) s += v * v;
    return std::sqrt(s);
  }
  double s = 0.0;
  for (double v : values) s += std::pow(std::abs(v), p);
  return std::pow(s, 1.0 / p);
}

CostLedger::CostLedger(double p) : p_(p) {
  if (!(p >= 1.0)) throw DomainError("norm order must be >= 1");
}

double EffortRatio(const std::vector<std::vector<double>>& poison,
                   const History& history) {
  if (static_cast<int>(poison.size()) != history.num_arms()) {
    throw UsageError("poison has wrong number of arms");
  }
  double eps_sq = 0.0;
  double y_sq = 0.0;
  for (int a = 0; a < history.num_arms(); ++a) {
    if (static_cast<int64_t>(poison[a].size()) != history.count(a)) {
      throw UsageError("poison vector for arm " + std::to_string(a + 1) +
                       " does not match its pull count");
    }
    for (double e : poison[a]) eps_sq += e * e;
  }
  for (const History::Record& r : history.records()) {
    y_sq += r.reward_pre * r.reward_pre;
  }
  if (y_sq == 0.0) throw DomainError("effort ratio undefined: all rewards zero");
  return std::sqrt(eps_sq / y_sq);
}

double Regret(const History& history, const BanditInstance& instance) {
  if (history.num_arms() != instance.num_arms()) {
    throw UsageError("history and instance disagree on arm count");
  }
  const double best = instance.best_mean();
  double regret = 0.0;
  for (int a = 0; a < instance.num_arms(); ++a) {
    regret += (best - instance.mean(a)) * static_cast<double>(history.count(a));
  }
  return regret;
}

}  // namespace poison
