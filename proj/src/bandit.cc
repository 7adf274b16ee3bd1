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

#include "poison/bandit.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "poison/errors.h"

namespace poison {
namespace {

constexpr int64_t kPosteriorChunk = 8192;

int ArgMax(const std::vector<double>& values) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(values.size()); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

PullDistribution PointMass(int num_arms, int arm) {
  PullDistribution d;
  d.probabilities.assign(num_arms, 0.0);
  d.std_errors.assign(num_arms, 0.0);
  d.probabilities[arm] = 1.0;
  return d;
}

}  // namespace

std::string AlgorithmName(Algorithm algo) {
  switch (algo) {
    case Algorithm::kEpsGreedy:
      return "eps-greedy";
    case Algorithm::kUcb:
      return "ucb";
    case Algorithm::kThompson:
      return "ts";
  }
  return "unknown";
}

Algorithm ParseAlgorithm(const std::string& name) {
  if (name == "eps-greedy") return Algorithm::kEpsGreedy;
  if (name == "ucb") return Algorithm::kUcb;
  if (name == "ts") return Algorithm::kThompson;
  throw UsageError("unknown algorithm '" + name +
                   "' (expected eps-greedy, ucb or ts)");
}

std::string TsPosteriorName(TsPosterior posterior) {
  return posterior == TsPosterior::kScaled ? "scaled" : "standard";
}

TsPosterior ParseTsPosterior(const std::string& name) {
  if (name == "scaled") return TsPosterior::kScaled;
  if (name == "standard") return TsPosterior::kStandard;
  throw UsageError("unknown ts posterior '" + name +
                   "' (expected scaled or standard)");
}

double EpsGreedyAlpha(const AgentParams& params, int64_t round) {
  return std::min(1.0, params.eps_rate / static_cast<double>(round));
}

AgentState::AgentState(int num_arms) : counts_(num_arms, 0), sums_(num_arms, 0.0) {
  if (num_arms < 2) throw UsageError("agent needs at least two arms");
}

AgentState AgentState::FromHistory(const History& history) {
  AgentState state(history.num_arms());
  for (const History::Record& r : history.records()) {
    state.Observe(r.arm, r.reward_post);
  }
  return state;
}

void AgentState::Observe(int arm, double reward) {
  if (arm < 0 || arm >= num_arms()) throw UsageError("arm out of range");
  ++counts_[arm];
  sums_[arm] += reward;
  ++rounds_;
}

double AgentState::mean(int arm) const {
  return counts_[arm] > 0 ? sums_[arm] / counts_[arm] : 0.0;
}

int GreedyArm(const AgentState& state) {
  int best = 0;
  for (int a = 1; a < state.num_arms(); ++a) {
    if (state.mean(a) > state.mean(best)) best = a;
  }
  return best;
}

int SelectEpsGreedy(const AgentState& state, double alpha, Rng& rng) {
  if (rng.Uniform() < alpha) {
    return static_cast<int>(rng.UniformInt(state.num_arms()));
  }
  return GreedyArm(state);
}

double UcbIndex(const AgentState& state, int arm, double sigma,
                int64_t round) {
  if (state.count(arm) == 0) return std::numeric_limits<double>::infinity();
  return state.mean(arm) +
         3.0 * sigma *
             std::sqrt(std::log(static_cast<double>(round)) /
                       static_cast<double>(state.count(arm)));
}

int SelectUcb(const AgentState& state, double sigma) {
  const int64_t round = state.rounds() + 1;
  int best = 0;
  double best_index = UcbIndex(state, 0, sigma, round);
  for (int a = 1; a < state.num_arms(); ++a) {
    const double index = UcbIndex(state, a, sigma, round);
    if (index > best_index) {
      best = a;
      best_index = index;
    }
  }
  return best;
}

double TsPosteriorMean(double empirical_mean, double sigma,
                       TsPosterior posterior) {
  return posterior == TsPosterior::kScaled ? empirical_mean / (sigma * sigma)
                                           : empirical_mean;
}

int SelectTsGaussian(const AgentState& state, double sigma,
                     TsPosterior posterior, Rng& rng) {
  std::vector<double> theta(state.num_arms());
  for (int a = 0; a < state.num_arms(); ++a) {
    if (state.count(a) == 0) {
      throw UsageError("Thompson Sampling needs every arm pulled once");
    }
    theta[a] = TsPosteriorMean(state.mean(a), sigma, posterior) +
               sigma / std::sqrt(static_cast<double>(state.count(a))) *
                   rng.Normal();
  }
  return ArgMax(theta);
}

Agent::Agent(Algorithm algo, AgentParams params, int num_arms)
    : algo_(algo), params_(params), state_(num_arms) {
  if (algo_ != Algorithm::kEpsGreedy && !(params_.sigma > 0.0)) {
    throw UsageError("UCB and Thompson Sampling need sigma > 0");
  }
  if (!(params_.eps_rate > 0.0)) throw UsageError("eps_rate must be > 0");
}

int Agent::SelectArm(Rng& rng) {
  const int64_t round = state_.rounds() + 1;
  if (round <= state_.num_arms()) return static_cast<int>(round - 1);
  switch (algo_) {
    case Algorithm::kEpsGreedy:
      return SelectEpsGreedy(state_, EpsGreedyAlpha(params_, round), rng);
    case Algorithm::kUcb:
      return SelectUcb(state_, params_.sigma);
    case Algorithm::kThompson:
      return SelectTsGaussian(state_, params_.sigma, params_.ts_posterior, rng);
  }
  return 0;
}

std::vector<int64_t> CountPosteriorWins(const std::vector<double>& means,
                                        const std::vector<double>& stddevs,
                                        int64_t samples, uint64_t key,
                                        Execution exec) {
  const int k = static_cast<int>(means.size());
  const int64_t chunks = (samples + kPosteriorChunk - 1) / kPosteriorChunk;
  std::vector<std::vector<int64_t>> wins(chunks, std::vector<int64_t>(k, 0));
  ForEachIndex(chunks, exec, [&](int64_t c) {
    Rng rng = Rng::ForStream(key, {static_cast<uint64_t>(c)});
    const int64_t begin = c * kPosteriorChunk;
    const int64_t end = std::min(samples, begin + kPosteriorChunk);
    std::vector<int64_t>& local = wins[c];
    for (int64_t s = begin; s < end; ++s) {
      int best = 0;
      double best_theta = means[0] + stddevs[0] * rng.Normal();
      for (int a = 1; a < k; ++a) {
        const double theta = means[a] + stddevs[a] * rng.Normal();
        if (theta > best_theta) {
          best = a;
          best_theta = theta;
        }
      }
      ++local[best];
    }
  });
  std::vector<int64_t> total(k, 0);
  for (const auto& local : wins) {
    for (int a = 0; a < k; ++a) total[a] += local[a];
  }
  return total;
}

PullDistribution NextPullDistribution(const AgentState& state, Algorithm algo,
                                      const AgentParams& params,
                                      int64_t mc_samples, Rng& rng,
                                      Execution exec) {
  const int k = state.num_arms();
  const int64_t round = state.rounds() + 1;
  if (algo == Algorithm::kThompson && mc_samples < kMinTsSamples) {
    throw UsageError("Thompson Sampling probe needs at least 1000 samples");
  }
  // Forced initialization still in progress.
  if (round <= k) return PointMass(k, static_cast<int>(round - 1));

  switch (algo) {
    case Algorithm::kEpsGreedy: {
      const double alpha = EpsGreedyAlpha(params, round);
      PullDistribution d;
      d.probabilities.assign(k, alpha / k);
      d.std_errors.assign(k, 0.0);
      d.probabilities[GreedyArm(state)] += 1.0 - alpha;
      return d;
    }
    case Algorithm::kUcb:
      return PointMass(k, SelectUcb(state, params.sigma));
    case Algorithm::kThompson: {
      std::vector<double> means(k), stddevs(k);
      for (int a = 0; a < k; ++a) {
        if (state.count(a) == 0) {
          throw UsageError("Thompson Sampling needs every arm pulled once");
        }
        means[a] = TsPosteriorMean(state.mean(a), params.sigma,
                                   params.ts_posterior);
        stddevs[a] =
            params.sigma / std::sqrt(static_cast<double>(state.count(a)));
      }
      const std::vector<int64_t> wins =
          CountPosteriorWins(means, stddevs, mc_samples, rng.Next(), exec);
      PullDistribution d;
      d.exact = false;
      d.samples = mc_samples;
      d.probabilities.resize(k);
      d.std_errors.resize(k);
      for (int a = 0; a < k; ++a) {
        const double p = static_cast<double>(wins[a]) / mc_samples;
        d.probabilities[a] = p;
        d.std_errors[a] = std::sqrt(p * (1.0 - p) / mc_samples);
      }
      return d;
    }
  }
  return PointMass(k, 0);
}

}  // namespace poison
