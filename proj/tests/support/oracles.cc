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

#include "support/oracles.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <variant>

#include "poison/errors.h"

namespace poison::testing {
namespace {

double Density(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

double Cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

// Posterior-difference scale for the Thompson Sampling kinds.
double Scale(double sigma, TsPosterior posterior) {
  return posterior == TsPosterior::kScaled ? sigma * sigma * sigma : sigma;
}

// Smallest target shift s making (d, s) feasible; +inf if none.
class TargetShift {
 public:
  explicit TargetShift(const ReducedProblem& p) : p_(p), k_(p.num_arms()) {
    const int t = p.target;
    c_.assign(k_, 0.0);
    bonus_.assign(k_, 0.0);
    if (const auto* ucb = std::get_if<UcbMarginConstraint>(&p.constraint)) {
      for (int a = 0; a < k_; ++a) {
        bonus_[a] = 3.0 * ucb->sigma *
                    std::sqrt(std::log(ucb->horizon + 1.0) / p.weights[a]);
      }
    }
    if (const auto* u = std::get_if<TsUnionConstraint>(&p.constraint)) {
      union_ = true;
      delta_ = u->delta;
      for (int a = 0; a < k_; ++a) {
        c_[a] = Scale(u->sigma, u->posterior) *
                std::sqrt(1.0 / p.weights[a] + 1.0 / p.weights[t]);
      }
    }
    if (const auto* q = std::get_if<TsPerArmConstraint>(&p.constraint)) {
      quantile_ = SimpsonPhiInv(q->delta / (k_ - 1));
      for (int a = 0; a < k_; ++a) {
        c_[a] = Scale(q->sigma, q->posterior) *
                std::sqrt(1.0 / p.weights[a] + 1.0 / p.weights[t]);
      }
    }
    if (const auto* g = std::get_if<GreedyMarginConstraint>(&p.constraint)) {
      xi_ = g->xi;
    }
    if (const auto* u = std::get_if<UcbMarginConstraint>(&p.constraint)) {
      xi_ = u->xi;
    }
  }

  // `shifts[target]` is ignored.
  double Min(const std::vector<double>& shifts) const {
    const double s = LinearBound(shifts);
    return union_ ? Refine(shifts, s) : s;
  }

  // Smallest s meeting the linear part of the constraints; equals Min for
  // every kind except the union bound, where it is a lower bound.
  double LinearBound(const std::vector<double>& shifts) const {
    const int t = p_.target;
    // Every kind requires post_a - post_t <= rhs_a for a linear rhs.
    double s = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < k_; ++a) {
      if (a == t) continue;
      const double gap = p_.base_means[a] + shifts[a] - p_.base_means[t];
      double need;
      if (std::holds_alternative<TsPerArmConstraint>(p_.constraint)) {
        need = gap - c_[a] * quantile_;
      } else if (union_) {
        need = gap;
      } else {
        need = gap + bonus_[a] - bonus_[t] + xi_;
      }
      s = std::max(s, need);
    }
    return s;
  }

 private:
  double Refine(const std::vector<double>& shifts, double s) const {
    const int t = p_.target;
    auto lhs = [&](double st) {
      double sum = 0.0;
      for (int a = 0; a < k_; ++a) {
        if (a == t) continue;
        sum += Cdf((p_.base_means[a] + shifts[a] - p_.base_means[t] - st) /
                   c_[a]);
      }
      return sum;
    };
    if (lhs(s) <= delta_) return s;
    double lo = s, width = 1e-6;
    double hi = s + width;
    while (lhs(hi) > delta_) {
      lo = hi;
      width *= 2.0;
      hi = s + width;
    }
    for (int i = 0; i < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi));
         ++i) {
      const double mid = 0.5 * (lo + hi);
      (lhs(mid) <= delta_ ? hi : lo) = mid;
    }
    return hi;
  }

  const ReducedProblem& p_;
  int k_;
  bool union_ = false;
  double delta_ = 0.0;
  double quantile_ = 0.0;
  double xi_ = 0.0;
  std::vector<double> c_;
  std::vector<double> bonus_;
};

}  // namespace

double SimpsonPhi(double x, int intervals) {
  if (x < 0.0) return 1.0 - SimpsonPhi(-x, intervals);
  if (x == 0.0) return 0.5;
  if (intervals % 2) ++intervals;
  const double h = x / intervals;
  double sum = Density(0.0) + Density(x);
  for (int i = 1; i < intervals; ++i) {
    sum += (i % 2 ? 4.0 : 2.0) * Density(i * h);
  }
  return 0.5 + sum * h / 3.0;
}

double SimpsonPhiInv(double p) {
  double lo = -40.0, hi = 40.0;
  for (int i = 0; i < 200 && hi - lo > 1e-14; ++i) {
    const double mid = 0.5 * (lo + hi);
    (SimpsonPhi(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

bool OracleFeasible(const ReducedProblem& problem,
                    const std::vector<double>& shifts, double tol) {
  const TargetShift target_shift(problem);
  return shifts[problem.target] >= target_shift.Min(shifts) - tol;
}

namespace {

struct Incumbent {
  double objective = std::numeric_limits<double>::infinity();
  std::vector<double> shifts;
};

// One exhaustive pass over the box prod_a [lo_a, lo_a + (n-1) step] for the
// free arms, with the target shift confined to [t_lo, t_hi].
Incumbent GridPass(const ReducedProblem& problem, const TargetShift& target_shift,
                   const std::vector<double>& lo, double step, int64_t n,
                   double t_lo, double t_hi, const Incumbent& seed,
                   Execution exec) {
  const int k = problem.num_arms();
  const int t = problem.target;
  std::vector<int> free_arms;
  for (int a = 0; a < k; ++a) {
    if (a != t) free_arms.push_back(a);
  }
  std::vector<Incumbent> per_outer(n, seed);
  ForEachIndex(n, exec, [&](int64_t i0) {
    Incumbent& best = per_outer[i0];
    std::vector<double> d(k, 0.0);
    auto visit = [&](double partial) {
      const double bound = std::min(std::max(0.0, target_shift.LinearBound(d)), t_hi);
      if (partial + problem.weights[t] * bound * bound >= best.objective) return;
      const double s_min = std::max(t_lo, target_shift.Min(d));
      if (s_min > t_hi) return;
      const double s = std::min(std::max(0.0, s_min), t_hi);
      const double obj = partial + problem.weights[t] * s * s;
      if (obj < best.objective) {
        best.objective = obj;
        best.shifts = d;
        best.shifts[t] = s;
      }
    };
    const int a0 = free_arms[0];
    d[a0] = lo[a0] + i0 * step;
    const double part0 = problem.weights[a0] * d[a0] * d[a0];
    if (free_arms.size() == 1) {
      visit(part0);
      return;
    }
    const int a1 = free_arms[1];
    for (int64_t i1 = 0; i1 < n; ++i1) {
      d[a1] = lo[a1] + i1 * step;
      const double part1 = part0 + problem.weights[a1] * d[a1] * d[a1];
      if (part1 >= best.objective) continue;
      if (free_arms.size() == 2) {
        visit(part1);
        continue;
      }
      const int a2 = free_arms[2];
      for (int64_t i2 = 0; i2 < n; ++i2) {
        d[a2] = lo[a2] + i2 * step;
        const double part2 = part1 + problem.weights[a2] * d[a2] * d[a2];
        if (part2 >= best.objective) continue;
        visit(part2);
      }
    }
  }, 0);
  Incumbent best = seed;
  for (const Incumbent& b : per_outer) {
    if (b.objective < best.objective) best = b;
  }
  return best;
}

}  // namespace

SolverResult BruteForceOracle(const ReducedProblem& problem,
                              const GridSpec& grid, Execution exec) {
  const int k = problem.num_arms();
  if (k < 2 || k > 4) throw UsageError("oracle supports 2 <= K <= 4");
  const TargetShift target_shift(problem);
  const auto n = static_cast<int64_t>(
                     std::floor((grid.hi - grid.lo) / grid.step + 1e-9)) + 1;
  // Incumbent from the grid point nearest to leaving every other arm alone.
  Incumbent seed;
  {
    std::vector<double> d(k);
    for (int a = 0; a < k; ++a) {
      const double i = std::clamp(std::round(-grid.lo / grid.step), 0.0,
                                  static_cast<double>(n - 1));
      d[a] = grid.lo + i * grid.step;
    }
    const double s_min = std::max(grid.lo, target_shift.Min(d));
    if (s_min <= grid.hi) {
      d[problem.target] = std::min(std::max(0.0, s_min), grid.hi);
      seed.shifts = d;
      seed.objective = 0.0;
      for (int a = 0; a < k; ++a) seed.objective += problem.weights[a] * d[a] * d[a];
    }
  }
  Incumbent best = GridPass(problem, target_shift, std::vector<double>(k, grid.lo),
                            grid.step, n, grid.lo, grid.hi, seed, exec);
  if (!std::isfinite(best.objective)) {
    throw OracleEmptyError("no feasible grid point; widen the grid");
  }
  double step = grid.step;
  for (int level = 0; level < grid.refinements; ++level) {
    const double window = 5.0 * step;
    step /= 10.0;
    std::vector<double> lo(k);
    for (int a = 0; a < k; ++a) lo[a] = best.shifts[a] - window;
    const Incumbent finer = GridPass(problem, target_shift, lo, step, 101,
                                     grid.lo, grid.hi, best, exec);
    best = finer;
  }
  SolverResult result;
  result.shifts = best.shifts;
  result.objective = best.objective;
  result.iterations = static_cast<int>(n);
  return result;
}

}  // namespace poison::testing
