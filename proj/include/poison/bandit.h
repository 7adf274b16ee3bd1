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

#ifndef POISON_BANDIT_H_
#define POISON_BANDIT_H_

#include <cstdint>
#include <string>
#include <vector>

#include "poison/model.h"
#include "poison/parallel.h"
#include "poison/rng.h"

namespace poison {

enum class Algorithm { kEpsGreedy, kUcb, kThompson };

// Gaussian Thompson Sampling posterior N(m, sigma^2 / N_a) where the mean m is
// either the empirical mean divided by sigma^2 (kScaled) or the empirical mean
// itself (kStandard).
enum class TsPosterior { kScaled, kStandard };

std::string AlgorithmName(Algorithm algo);
Algorithm ParseAlgorithm(const std::string& name);
std::string TsPosteriorName(TsPosterior posterior);
TsPosterior ParseTsPosterior(const std::string& name);

struct AgentParams {
  // Noise scale known to UCB and Thompson Sampling.
  double sigma = 0.1;
  // Exploration rate of epsilon-greedy: alpha_t = min(1, eps_rate / t).
  double eps_rate = 1.0;
  TsPosterior ts_posterior = TsPosterior::kScaled;
};

double EpsGreedyAlpha(const AgentParams& params, int64_t round);

// What the learner knows: counts and means of the rewards it was shown.
class AgentState {
 public:
  explicit AgentState(int num_arms);
  // Replays the post-attack column of `history`.
  static AgentState FromHistory(const History& history);

  void Observe(int arm, double reward);

  int num_arms() const { return static_cast<int>(counts_.size()); }
  // Number of completed rounds; the next decision is for round rounds() + 1.
  int64_t rounds() const { return rounds_; }
  int64_t count(int arm) const { return counts_[arm]; }
  double sum(int arm) const { return sums_[arm]; }
  double mean(int arm) const;

 private:
  std::vector<int64_t> counts_;
  std::vector<double> sums_;
  int64_t rounds_ = 0;
};

// With probability alpha a uniform arm, otherwise the greedy arm (lowest
// index among ties).
int SelectEpsGreedy(const AgentState& state, double alpha, Rng& rng);
int GreedyArm(const AgentState& state);

// mean + 3 sigma sqrt(ln t / N); +infinity for an unpulled arm.
double UcbIndex(const AgentState& state, int arm, double sigma, int64_t round);
// Arm with the largest index for round state.rounds() + 1.
int SelectUcb(const AgentState& state, double sigma);

double TsPosteriorMean(double empirical_mean, double sigma,
                       TsPosterior posterior);
// One posterior draw per arm, argmax. Every arm must have been pulled.
int SelectTsGaussian(const AgentState& state, double sigma,
                     TsPosterior posterior, Rng& rng);

// A learner with forced initialization: rounds 1..K pull arms 1..K in order,
// then the algorithm's own rule applies.
class Agent {
 public:
  Agent(Algorithm algo, AgentParams params, int num_arms);

  int SelectArm(Rng& rng);
  void Observe(int arm, double reward) { state_.Observe(arm, reward); }

  Algorithm algorithm() const { return algo_; }
  const AgentParams& params() const { return params_; }
  const AgentState& state() const { return state_; }

 private:
  Algorithm algo_;
  AgentParams params_;
  AgentState state_;
};

struct PullDistribution {
  std::vector<double> probabilities;
  // Monte Carlo standard errors; all zero when `exact`.
  std::vector<double> std_errors;
  bool exact = true;
  int64_t samples = 0;
};

inline constexpr int64_t kMinTsSamples = 1000;

// Distribution of the arm chosen at round state.rounds() + 1. Exact for
// epsilon-greedy and UCB; Monte Carlo with `mc_samples` draws for Thompson
// Sampling (at least kMinTsSamples).
PullDistribution NextPullDistribution(const AgentState& state, Algorithm algo,
                                      const AgentParams& params,
                                      int64_t mc_samples, Rng& rng,
                                      Execution exec = Execution::kParallel);

// Monte Carlo kernel behind the Thompson Sampling branch: counts how often
// each arm wins among `samples` joint posterior draws. Samples are processed
// in fixed-size chunks, each with its own stream derived from `key`.
std::vector<int64_t> CountPosteriorWins(const std::vector<double>& means,
                                        const std::vector<double>& stddevs,
                                        int64_t samples, uint64_t key,
                                        Execution exec);

}  // namespace poison

#endif  // POISON_BANDIT_H_
