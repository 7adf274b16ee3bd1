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

#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "poison/errors.h"
#include "poison/online.h"
#include "poison/rng.h"

namespace poison {
namespace {

double BetaByHand(double n, double sigma, double k, double delta) {
  const double pi2 = std::numbers::pi * std::numbers::pi;
  return std::sqrt(2.0 * sigma * sigma / n * std::log(pi2 * k * n * n / (3.0 * delta)));
}

TEST_CASE("beta") {
  CHECK(std::abs(Beta(1, 0.1, 2, 0.05) - 0.31240) <= 1e-4);
  CHECK(std::abs(Beta(100, 0.1, 2, 0.05) - 0.05309) <= 1e-4);
  CHECK(Beta(10, 0.1, 2, 0.05) == doctest::Approx(BetaByHand(10, 0.1, 2, 0.05)));
  for (int64_t n = 1; n <= 1000000; ++n) {
    if (!(Beta(n, 0.1, 2, 0.05) > Beta(4 * n, 0.1, 2, 0.05))) {
      FAIL("beta(n) <= beta(4n) at n = " << n);
    }
  }
  CHECK(Beta(7, 0.3, 5, 0.01) > 0.0);
  CHECK_THROWS_AS(Beta(0, 0.1, 2, 0.05), DomainError);
  CHECK_THROWS_AS(Beta(1, 0.1, 2, 1.0), DomainError);
}

TEST_CASE("oracle attack") {
  const std::vector<double> means = {0.5, 0.0};
  CHECK(OracleAttack(1, means, 1, 0.1) == 0.0);
  CHECK(OracleAttack(0, means, 1, 0.1) == doctest::Approx(-0.6));
  CHECK(OracleAttack(0, {0.0, 0.5}, 0, 0.1) == 0.0);
  CHECK(OracleAttack(1, {0.2, 0.0, 0.5}, 2, 0.1) == 0.0);
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    const std::vector<double> m = {rng.Uniform(), rng.Uniform(), rng.Uniform()};
    for (int a = 0; a < 3; ++a) CHECK(OracleAttack(a, m, 2, 0.1) <= 0.0);
  }
}

TEST_CASE("constant attack") {
  const std::vector<double> c = {0.7, 0.0};
  CHECK(ConstantAttack(1, c, 1) == 0.0);
  CHECK(ConstantAttack(0, c, 1) == -0.7);
}

TEST_CASE("ace rule") {
  SUBCASE("hand example") {
    AceState s(2, 0.1, 0.05, 1);
    for (int i = 0; i < 10; ++i) {
      s.ObservePre(0, 0.6);
      s.ObservePre(1, 0.1);
    }
    const double beta10 = Beta(10, 0.1, 2, 0.05);
    // sqrt(0.002 * ln(200 pi^2 / 0.15))
    CHECK(std::abs(beta10 - 0.13773) <= 1e-4);
    CHECK(std::abs(AceEpsilon(s, 0) - (-0.77546)) <= 1e-4);
    CHECK(AceEpsilon(s, 0) == doctest::Approx(-(0.5 + 2.0 * beta10)));
  }
  SUBCASE("target pulls are free") {
    AceState s(2, 0.1, 0.05, 1);
    s.ObservePre(0, 0.6);
    CHECK(AceAttack(s, 1, 0.1) == 0.0);
    CHECK(s.cumulative_cost() == 0.0);
  }
  SUBCASE("clamp") {
    AceState s(2, 0.0, 0.05, 1);  // sigma 0: beta terms vanish
    s.ObservePre(0, 0.0);
    s.ObservePre(1, 1.0);
    CHECK(AceEpsilon(s, 0) == 0.0);
    AceState wide(2, 0.1, 0.05, 1);
    for (int i = 0; i < 1000; ++i) {
      wide.ObservePre(0, 0.0);
      wide.ObservePre(1, 1.0);
    }
    // gap -1 with beta terms well under 1
    CHECK(AceEpsilon(wide, 0) == 0.0);
  }
  SUBCASE("current reward counts before the poison") {
    AceState s(2, 0.1, 0.05, 1);
    s.ObservePre(1, 0.0);
    s.ObservePre(0, 1.0);
    const double before = AceEpsilon(s, 0);
    AceState t(2, 0.1, 0.05, 1);
    t.ObservePre(1, 0.0);
    t.ObservePre(0, 1.0);
    const double eps = AceAttack(t, 0, 3.0);
    CHECK(t.count(0) == 2);
    CHECK(t.mean(0) == doctest::Approx(2.0));
    CHECK(eps < before);
    CHECK(eps == doctest::Approx(AceEpsilon(t, 0)));
    CHECK(t.cumulative_cost() == doctest::Approx(-eps));
  }
  SUBCASE("uninitialized target") {
    AceState s(2, 0.1, 0.05, 1);
    s.ObservePre(0, 0.3);
    CHECK_THROWS_AS(AceEpsilon(s, 0), UsageError);
    AceState t(2, 0.1, 0.05, 1);
    CHECK(AceAttack(t, 0, 0.3) == 0.0);
    CHECK(t.cumulative_cost() == 0.0);
  }
  SUBCASE("noise-free ace matches the oracle with zero margin") {
    const std::vector<double> means = {0.9, 0.4, 0.0, 0.2};
    AceState s(4, 0.0, 0.05, 2);
    Rng rng(2);
    bool seen_target = false;
    for (int t = 0; t < 200; ++t) {
      const int arm = t < 4 ? t : static_cast<int>(rng.UniformInt(4));
      seen_target = seen_target || arm == 2;
      const double eps = AceAttack(s, arm, means[arm]);
      if (seen_target) {
        CHECK(eps == doctest::Approx(-std::max(0.0, means[arm] - means[2])));
      }
    }
  }
  SUBCASE("ledger is the l1 sum") {
    AceState s(3, 0.1, 0.05, 2);
    Rng rng(3);
    double sum = 0.0;
    for (int t = 0; t < 500; ++t) {
      const int arm = static_cast<int>(rng.UniformInt(3));
      sum += std::abs(AceAttack(s, arm, rng.Normal(0.3 * (2 - arm), 0.1)));
    }
    CHECK(s.cumulative_cost() == doctest::Approx(sum).epsilon(1e-12));
    double logged = 0.0;
    for (double e : s.epsilons()) logged += std::abs(e);
    CHECK(logged == doctest::Approx(sum).epsilon(1e-12));
  }
}

TEST_CASE("ace never poisons the target") {
  BanditInstance inst({0.8, 0.3, 0.0}, 0.1, 2);
  AttackerConfig config;
  config.kind = AttackKind::kAce;
  auto attacker = MakeAttacker(config, inst);
  Rng rng(4);
  for (int t = 0; t < 20000; ++t) {
    const int arm = static_cast<int>(rng.UniformInt(3));
    const double eps = attacker->Poison(arm, DrawReward(inst, arm, rng));
    if (arm == 2) REQUIRE(eps == 0.0);
    REQUIRE(eps <= 0.0);
  }
}

TEST_CASE("log checkpoints") {
  CHECK(LogCheckpoints(1000) ==
        std::vector<int64_t>{1, 2, 5, 10, 20, 50, 100, 200, 500, 1000});
  CHECK(LogCheckpoints(30) == std::vector<int64_t>{1, 2, 5, 10, 20, 30});
}

TEST_CASE("online trials") {
  const std::vector<Algorithm> algos = {Algorithm::kEpsGreedy, Algorithm::kUcb,
                                        Algorithm::kThompson};
  const BanditInstance inst({0.5, 0.0}, 0.1, 1);
  const int64_t horizon = 10000;
  auto mean_fraction = [&](Algorithm algo, const AttackerConfig& attacker,
                           const AgentParams& params = {}) {
    OnlineTrialOptions options;
    options.attacker = attacker;
    double total = 0.0;
    for (uint64_t seed = 0; seed < 20; ++seed) {
      Rng rng = Rng::ForStream(5, {seed});
      const OnlineTrialRecord r =
          RunOnlineTrial(inst, algo, params, options, horizon, rng);
      total += static_cast<double>(r.pulls[1]) / horizon;
    }
    return total / 20.0;
  };
  for (Algorithm algo : algos) {
    CAPTURE(AlgorithmName(algo));
    CHECK(mean_fraction(algo, {AttackKind::kNone}) <= 0.1);
    AttackerConfig oracle;
    oracle.kind = AttackKind::kOracle;
    oracle.xi = 0.1;
    // The scaled posterior barely explores: a target whose first reward
    // lands below the attacked arm's mean is rarely revisited, so the oracle
    // claim is checked against the standard posterior.
    AgentParams params;
    params.ts_posterior = TsPosterior::kStandard;
    CHECK(mean_fraction(algo, oracle, params) >= 0.9);
  }
}

TEST_CASE("online trial bookkeeping") {
  const BanditInstance inst({0.9, 0.4, 0.0}, 0.1, 2);
  SUBCASE("constant attack cost identity") {
    OnlineTrialOptions options;
    options.attacker.kind = AttackKind::kConstant;
    options.attacker.constants = {1.0, 0.5, 0.0};
    Rng rng(6);
    const OnlineTrialRecord r =
        RunOnlineTrial(inst, Algorithm::kUcb, {}, options, 3000, rng);
    CHECK(r.total_cost == doctest::Approx(1.0 * r.pulls[0] + 0.5 * r.pulls[1]));
  }
  SUBCASE("checkpoints and cost bound") {
    OnlineTrialOptions options;
    options.attacker.kind = AttackKind::kAce;
    options.eps_log_stride = 1;
    for (Algorithm algo :
         {Algorithm::kEpsGreedy, Algorithm::kUcb, Algorithm::kThompson}) {
      Rng rng(7);
      const OnlineTrialRecord r = RunOnlineTrial(inst, algo, {}, options, 5000, rng);
      CHECK(r.checkpoints == LogCheckpoints(5000));
      CHECK(r.cost_at.back() == doctest::Approx(r.total_cost));
      CHECK(r.target_pulls_at.back() == r.pulls[2]);
      for (size_t i = 1; i < r.cost_at.size(); ++i) {
        CHECK(r.cost_at[i] >= r.cost_at[i - 1]);
        CHECK(r.target_pulls_at[i] >= r.target_pulls_at[i - 1]);
      }
      CHECK(r.epsilons.size() == 5000);
      double sum = 0.0;
      for (double e : r.epsilons) sum += std::abs(e);
      CHECK(sum == doctest::Approx(r.total_cost).epsilon(1e-12));
      if (r.concentration_held) CHECK(r.cost_bound_violations == 0);
    }
  }
  SUBCASE("bad input") {
    OnlineTrialOptions options;
    Rng rng(8);
    CHECK_THROWS_AS(RunOnlineTrial(inst, Algorithm::kUcb, {}, options, 2, rng),
                    UsageError);
    options.checkpoints = {5, 3};
    CHECK_THROWS_AS(RunOnlineTrial(inst, Algorithm::kUcb, {}, options, 10, rng),
                    UsageError);
    options.checkpoints = {};
    options.attacker.kind = AttackKind::kConstant;
    options.attacker.constants = {1.0};
    CHECK_THROWS_AS(RunOnlineTrial(inst, Algorithm::kUcb, {}, options, 10, rng),
                    UsageError);
  }
}

TEST_CASE("attack names") {
  for (AttackKind k : {AttackKind::kNone, AttackKind::kOracle,
                       AttackKind::kConstant, AttackKind::kAce}) {
    CHECK(ParseAttackKind(AttackKindName(k)) == k);
  }
  CHECK_THROWS_AS(ParseAttackKind("jun"), UsageError);
}

}  // namespace
}  // namespace poison
