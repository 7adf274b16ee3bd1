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

#ifndef POISON_SOLVER_H_
#define POISON_SOLVER_H_

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "poison/bandit.h"

namespace poison {

// Per-arm mean-shift form of the offline attack problems. A poison vector that
// is constant within each arm, eps_a = shift_a * 1, is optimal whenever the
// constraints only see per-arm means, so every problem reduces to
//
//   minimize   sum_a weight_a * shift_a^2
//   subject to constraints on post_mean_a = base_mean_a + shift_a.
//
// Constraint kinds, with post means m~ and the target arm t:

// Greedy leader: m~_t >= m~_a + xi for every a != t.
struct GreedyMarginConstraint {
  double xi;
};

// UCB leader at round horizon + 1:
// m~_t + bonus_t >= m~_a + bonus_a + xi, bonus_a = 3 sigma sqrt(ln(T+1) / w_a).
struct UcbMarginConstraint {
  double xi;
  double sigma;
  int64_t horizon;
};

// Thompson Sampling union bound:
// sum_{a != t} Phi((m~_a - m~_t) / c_a) <= delta and m~_a <= m~_t,
// c_a = scale * sqrt(1/w_a + 1/w_t), scale = sigma^3 for the scaled
// posterior and sigma for the standard one.
struct TsUnionConstraint {
  double delta;
  double sigma;
  TsPosterior posterior = TsPosterior::kScaled;
};

// Per-arm split of the union bound: each term <= delta / (K - 1), i.e.
// m~_a - m~_t <= c_a * PhiInv(delta / (K - 1)). Linear.
struct TsPerArmConstraint {
  double delta;
  double sigma;
  TsPosterior posterior = TsPosterior::kScaled;
};

using AttackConstraint =
    std::variant<GreedyMarginConstraint, UcbMarginConstraint,
                 TsUnionConstraint, TsPerArmConstraint>;

struct ReducedProblem {
  std::vector<double> weights;     // pull counts, >= 1
  std::vector<double> base_means;  // pre-attack per-arm means
  int target = 0;
  AttackConstraint constraint;

  int num_arms() const { return static_cast<int>(weights.size()); }
  // Throws UsageError / DomainError on malformed input.
  void Validate() const;
};

enum class SolverStatus { kOptimal, kSuboptimal };

struct SolverResult {
  std::vector<double> shifts;
  double objective = 0.0;
  // Worst constraint slack at `shifts`; >= 0 means feasible.
  double feasibility_margin = 0.0;
  // Stationarity violation relative to the objective gradient norm.
  double kkt_residual = 0.0;
  int iterations = 0;
  SolverStatus status = SolverStatus::kOptimal;
  std::string diagnostics;
};

double ShiftObjective(const ReducedProblem& problem,
                      const std::vector<double>& shifts);

// Scale of the posterior-difference denominator: sigma^3 or sigma.
double TsDenominatorScale(double sigma, TsPosterior posterior);

// sum_{a != target} Phi((means_a - means_target) /
//                       (scale * sqrt(1/counts_a + 1/counts_target))).
double TsUnionBound(const std::vector<double>& post_means,
                    const std::vector<double>& counts, double sigma,
                    int target, TsPosterior posterior = TsPosterior::kScaled);

// For the linear kinds, offsets b with constraints shift_a <= shift_t + b_a
// (b_target is 0). Throws UsageError for TsUnionConstraint.
std::vector<double> LinearOffsets(const ReducedProblem& problem);

double FeasibilityMargin(const ReducedProblem& problem,
                         const std::vector<double>& shifts);

// Exact global optimum for the linear kinds. For a fixed target shift s the
// best other shifts are min(0, s + b_a), leaving the convex piecewise
// quadratic h(s) = w_t s^2 + sum_a w_a min(0, s + b_a)^2, which is minimized
// in closed form on the piece that contains its root of h'.
SolverResult SolveLinear(const ReducedProblem& problem);

struct BarrierOptions {
  double tolerance = 1e-6;      // relative objective accuracy requested
  double initial_mu = 1.0;      // barrier weight, halved every outer step
  double final_mu = 1e-10;
  int max_newton_iterations = 4000;  // total over all outer steps
};

// Log-barrier interior-point method for TsUnionConstraint, warm-started from
// the per-arm split (always feasible for the union bound). On failure the
// per-arm solution is returned with status kSuboptimal.
SolverResult SolveTsUnion(const ReducedProblem& problem,
                          const BarrierOptions& options = {});

}  // namespace poison

#endif  // POISON_SOLVER_H_
