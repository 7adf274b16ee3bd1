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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "poison/experiment.h"
#include "poison/normal.h"
#include "poison/rng.h"
#include "poison/solver.h"
#include "support/oracles.h"

namespace poison {
namespace {

using Clock = std::chrono::steady_clock;

const std::vector<Algorithm> kAlgorithms = {
    Algorithm::kEpsGreedy, Algorithm::kUcb, Algorithm::kThompson};

struct Verdict {
  bool pass = true;
  std::ostringstream detail;
  void Require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [fail: " << what << "]";
    }
  }
};

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string Fmt(double v, const char* spec = "%.4g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

ExperimentConfig OfflineConfig(Algorithm algo) {
  ExperimentConfig c = ExperimentConfig::Defaults(Mode::kOffline);
  c.algo = algo;
  c.k = 5;
  c.sigma = 0.1;
  c.horizon = 1000;
  c.xi = 0.001;
  c.delta = 0.05;
  c.trials = 200;
  c.mc_samples = 100000;
  c.seed = 42;
  return c;
}

ExperimentConfig OnlineConfig(Algorithm algo, double gap, int64_t horizon) {
  ExperimentConfig c = ExperimentConfig::Defaults(Mode::kOnline);
  c.algo = algo;
  c.sigma = 0.1;
  c.delta = 0.05;
  c.trials = 20;
  c.horizon = horizon;
  c.gap_grid = {gap, gap, 0.0};
  c.seed = 7;
  return c;
}

// Mean target fraction per gap group, in grid order.
std::vector<double> FractionByGroup(const ExperimentReport& r) {
  std::vector<double> out;
  for (const SummaryRow& row : Summarize(r)) {
    if (row.metric == "target_fraction_mean") out.push_back(row.value);
  }
  return out;
}

double RSquaredLogFit(const std::vector<double>& t, const std::vector<double>& y) {
  const size_t n = t.size();
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mx += std::log(t[i]) / n;
    my += y[i] / n;
  }
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double dx = std::log(t[i]) - mx, dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  return syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
}

void Report(int id, const std::string& name, Verdict& v) {
  std::printf("%s criterion %d (%s):%s\n", v.pass ? "PASS" : "FAIL", id,
              name.c_str(), v.detail.str().c_str());
  std::fflush(stdout);
}

bool Criteria1And2() {
  Verdict success, effort;
  const double limits[] = {0.10, 0.02, 0.05};
  const auto start = Clock::now();
  for (size_t i = 0; i < kAlgorithms.size(); ++i) {
    const ExperimentReport r = RunOfflineExperiment(OfflineConfig(kAlgorithms[i]));
    int64_t ok = 0;
    std::vector<double> ratios;
    for (const auto& row : r.offline) {
      ok += row.success;
      ratios.push_back(row.effort_ratio);
    }
    const std::string name = AlgorithmName(kAlgorithms[i]);
    success.detail << ' ' << name << ' ' << ok << '/' << r.offline.size();
    success.Require(ok == static_cast<int64_t>(r.offline.size()),
                    name + " verification");
    const double p95 = Percentile(ratios, 0.95);
    effort.detail << ' ' << name << " p95=" << Fmt(p95) << " (<" << limits[i]
                  << ")";
    effort.Require(p95 < limits[i], name + " effort ratio");
  }
  const double secs = Seconds(start);
  success.detail << " time=" << Fmt(secs, "%.1f") << "s (<300s)";
  success.Require(secs < 300.0, "runtime");
  Report(1, "offline success rate", success);
  Report(2, "offline effort ratios", effort);
  return success.pass && effort.pass;
}

bool Criterion3() {
  Verdict v;
  const auto start = Clock::now();
  for (Algorithm algo : kAlgorithms) {
    ExperimentConfig c = OnlineConfig(algo, 0.1, 10000);
    c.gap_grid = {0.1, 1.0, 0.1};
    c.attack = AttackKind::kAce;
    const std::vector<double> attacked = FractionByGroup(RunOnlineExperiment(c));
    c.attack = AttackKind::kNone;
    const std::vector<double> control = FractionByGroup(RunOnlineExperiment(c));
    const double min_attacked = *std::min_element(attacked.begin(), attacked.end());
    const auto worst = std::max_element(control.begin(), control.end());
    const double max_control = *worst;
    const std::vector<double> gaps = c.gap_grid.Values();
    const std::string name = AlgorithmName(algo);
    v.detail << ' ' << name << " min(ace)=" << Fmt(min_attacked)
             << " max(none)=" << Fmt(max_control) << "@gap="
             << gaps[worst - control.begin()];
    v.Require(attacked.size() == 10 && min_attacked >= 0.9, name + " ace fraction");
    v.Require(max_control <= 0.1, name + " control fraction");
  }
  const double secs = Seconds(start);
  v.detail << " time=" << Fmt(secs, "%.1f") << "s (<600s)";
  v.Require(secs < 600.0, "runtime");
  Report(3, "ACE hijacking", v);
  return v.pass;
}

bool Criterion4() {
  Verdict v;
  const std::vector<double> t = {1e3, 1e4, 1e5};
  for (Algorithm algo : kAlgorithms) {
    ExperimentConfig c = OnlineConfig(algo, 1.0, 100000);
    c.attack = AttackKind::kAce;
    c.checkpoints = {1000, 10000, 100000};
    const ExperimentReport r = RunOnlineExperiment(c);
    std::vector<double> cost;
    for (const SummaryRow& row : Summarize(r)) {
      if (row.metric == "cost_mean") cost.push_back(row.value);
    }
    const double r2 = RSquaredLogFit(t, cost);
    bool decreasing = true;
    for (size_t i = 1; i < cost.size(); ++i) {
      decreasing = decreasing && cost[i] / t[i] < cost[i - 1] / t[i - 1];
    }
    const std::string name = AlgorithmName(algo);
    v.detail << ' ' << name << " cost=(" << Fmt(cost[0]) << ',' << Fmt(cost[1])
             << ',' << Fmt(cost[2]) << ") R2=" << Fmt(r2);
    v.Require(r2 >= 0.9, name + " log fit");
    v.Require(decreasing, name + " cost/T decreasing");
  }
  Report(4, "ACE cost growth", v);
  return v.pass;
}

bool Criterion5() {
  Verdict v;
  for (Algorithm algo : kAlgorithms) {
    ExperimentConfig c = OnlineConfig(algo, 0.5, 100000);
    c.attack = AttackKind::kConstant;
    c.constants = {0.6};
    const double high = FractionByGroup(RunOnlineExperiment(c)).at(0);
    c.constants = {0.4};
    const double low = FractionByGroup(RunOnlineExperiment(c)).at(0);
    const std::string name = AlgorithmName(algo);
    v.detail << ' ' << name << " C=0.6:" << Fmt(high) << " C=0.4:" << Fmt(low);
    v.Require(high >= 0.9, name + " C above the gap");
    v.Require(low <= 0.5, name + " C below the gap");
  }
  Report(5, "constant attack iff", v);
  return v.pass;
}

bool Criterion6() {
  Verdict v;
  Rng rng(2024);
  auto random_problem = [&](int k, AttackConstraint c) {
    ReducedProblem p;
    for (int a = 0; a < k; ++a) {
      p.weights.push_back(1.0 + static_cast<double>(rng.UniformInt(20)));
      p.base_means.push_back(rng.Uniform());
    }
    p.target = static_cast<int>(rng.UniformInt(k));
    p.constraint = c;
    return p;
  };
  const testing::GridSpec grid{-1.5, 1.5, 1e-3};
  int linear_ok = 0;
  double worst_kkt = 0.0;
  for (int i = 0; i < 100; ++i) {
    const AttackConstraint c =
        i % 2 ? AttackConstraint{UcbMarginConstraint{0.001, 0.1, 1000}}
              : AttackConstraint{GreedyMarginConstraint{0.001}};
    const ReducedProblem p = random_problem(2, c);
    const SolverResult exact = SolveLinear(p);
    const SolverResult oracle = testing::BruteForceOracle(p, grid);
    const double tol = 2.0 * grid.step * grid.step *
                       std::max(p.weights[0], p.weights[1]);
    linear_ok += std::abs(exact.objective - oracle.objective) <= tol &&
                 exact.objective <= oracle.objective + 1e-12;
    worst_kkt = std::max(worst_kkt, exact.kkt_residual);
  }
  int union_ok = 0;
  double worst_gap = 0.0;
  for (int i = 0; i < 20; ++i) {
    ReducedProblem p = random_problem(3, TsUnionConstraint{0.05, 0.1});
    for (double& w : p.weights) w = 1.0 + std::fmod(w, 10.0);
    const SolverResult r = SolveTsUnion(p);
    const SolverResult oracle = testing::BruteForceOracle(p, grid);
    const double gap = std::abs(r.objective - oracle.objective);
    worst_gap = std::max(worst_gap, gap);
    union_ok += gap <= 1e-4 && r.feasibility_margin >= -1e-9;
  }
  int shift_ok = 0;
  for (int i = 0; i < 100; ++i) {
    const int k = 2 + static_cast<int>(rng.UniformInt(2));
    double shift_cost = 0.0, sample_cost = 0.0;
    for (int a = 0; a < k; ++a) {
      const int m = 1 + static_cast<int>(rng.UniformInt(12));
      const double delta = rng.Normal();
      std::vector<double> eps(m);
      double sum = 0.0;
      for (double& e : eps) {
        e = delta + rng.Normal();
        sum += e;
      }
      for (double& e : eps) e += delta - sum / m;
      for (double e : eps) sample_cost += e * e;
      shift_cost += m * delta * delta;
    }
    shift_ok += sample_cost >= shift_cost * (1.0 - 1e-12);
  }
  v.detail << " linear " << linear_ok << "/100 max_kkt=" << Fmt(worst_kkt)
           << " union " << union_ok << "/20 max_gap=" << Fmt(worst_gap)
           << " mean-shift " << shift_ok << "/100";
  v.Require(linear_ok == 100, "solve_linear vs oracle");
  v.Require(worst_kkt <= 1e-8, "kkt residual");
  v.Require(union_ok == 20, "solve_p3 vs oracle");
  v.Require(shift_ok == 100, "mean-shift optimality");
  Report(6, "solver correctness", v);
  return v.pass;
}

bool Criterion7() {
  Verdict v;
  for (Algorithm algo : kAlgorithms) {
    ExperimentConfig c = OnlineConfig(algo, 0.5, 10000);
    c.attack = AttackKind::kNone;
    c.trials = 500;
    const ExperimentReport r = RunOnlineExperiment(c);
    double held = 0.0;
    for (const auto& row : r.online) held += row.concentration_held;
    const double freq = held / r.online.size();
    const std::string name = AlgorithmName(algo);
    v.detail << ' ' << name << ' ' << Fmt(freq) << " (>=" << Fmt(1.0 - 0.05 - 0.03)
             << ")";
    v.Require(freq >= 1.0 - 0.05 - 0.03, name + " event frequency");
  }
  Report(7, "concentration event", v);
  return v.pass;
}

bool Criterion8() {
  Verdict v;
  Rng rng(8);
  double worst = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double p = 1e-8 + (1.0 - 2e-8) * rng.Uniform();
    worst = std::max(worst, std::abs(Phi(PhiInv(p)) - p));
  }
  int convex_ok = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const int k = 2 + static_cast<int>(rng.UniformInt(4));
    std::vector<double> c(k - 1), x(k), y(k), mid(k);
    for (double& ci : c) ci = 0.05 + 20.0 * rng.Uniform();
    x[k - 1] = 2.0 * rng.Normal();
    y[k - 1] = 2.0 * rng.Normal();
    for (int i = 0; i + 1 < k; ++i) {
      x[i] = x[k - 1] - std::abs(rng.Normal());
      y[i] = y[k - 1] - std::abs(rng.Normal());
    }
    for (int i = 0; i < k; ++i) mid[i] = 0.5 * (x[i] + y[i]);
    auto f = [&](const std::vector<double>& z) {
      double s = 0.0;
      for (int i = 0; i + 1 < k; ++i) s += Phi(c[i] * z[i] - c[i] * z[k - 1]);
      return s;
    };
    convex_ok += f(mid) <= 0.5 * (f(x) + f(y)) + 1e-12;
  }
  v.detail << " round-trip max=" << Fmt(worst) << " (<=1e-10) convexity "
           << convex_ok << "/10000";
  v.Require(worst <= 1e-10, "round trip");
  v.Require(convex_ok == 10000, "midpoint convexity");
  Report(8, "numerical toolkit", v);
  return v.pass;
}

}  // namespace
}  // namespace poison

int main() {
  const std::vector<std::function<bool()>> criteria = {
      poison::Criteria1And2, poison::Criterion3, poison::Criterion4,
      poison::Criterion5,    poison::Criterion6, poison::Criterion7,
      poison::Criterion8};
  bool all = true;
  for (const auto& run : criteria) all = run() && all;
  return all ? 0 : 1;
}
