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

// poison: offline/online reward-poisoning experiments and plan verification.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "poison/errors.h"
#include "poison/experiment.h"
#include "poison/io.h"
#include "poison/offline.h"
#include "poison/output.h"

namespace {

using poison::ExperimentConfig;

constexpr int kExitOk = 0;
constexpr int kExitFailedVerification = 1;
constexpr int kExitUsage = 2;

template <typename T>
std::vector<T> ParseList(const std::string& text) {
  std::vector<T> out;
  for (const std::string& field : poison::SplitCsvLine(text)) {
    if (field.empty()) continue;
    if constexpr (std::is_integral_v<T>) {
      const double v = poison::ParseDouble(field);
      if (v != static_cast<double>(static_cast<T>(v))) {
        throw poison::UsageError("expected an integer, got '" + field + "'");
      }
      out.push_back(static_cast<T>(v));
    } else {
      out.push_back(poison::ParseDouble(field));
    }
  }
  return out;
}

// Raw flag values; only flags the user actually passed are applied.
struct Flags {
  std::string config_path;
  std::string algo, attack, ts_posterior, ts_relaxation;
  int k = 0, target = 0, hist_bins = 0, workers = 0;
  double sigma = 0, xi = 0, delta = 0, eps_rate = 0;
  int64_t horizon = 0, trials = 0, mc_samples = 0, emit_plans = 0;
  uint64_t seed = 0;
  std::string out, delta_grid, constants, checkpoints, means;
  bool paper_scale = false;
};

void AddExperimentFlags(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config_path, "JSON config; flags override it");
  app->add_option("--algo", f.algo, "eps-greedy | ucb | ts");
  app->add_option("--attack", f.attack, "none | oracle | constant | ace");
  app->add_option("--k", f.k, "number of arms");
  app->add_option("--sigma", f.sigma, "reward noise standard deviation");
  app->add_option("--t", f.horizon, "rounds per trial");
  app->add_option("--xi", f.xi, "attack margin");
  app->add_option("--delta", f.delta, "failure probability");
  app->add_option("--trials", f.trials, "trials (per gap for online)");
  app->add_option("--seed", f.seed, "master seed");
  app->add_option("--out", f.out, "output directory");
  app->add_option("--target", f.target, "target arm, 1-based (default: last)");
  app->add_option("--means", f.means, "explicit arm means, comma separated");
  app->add_option("--delta-grid", f.delta_grid,
                  "two-arm gap grid start:stop:step");
  app->add_option("--constant-c", f.constants,
                  "constant attack offsets, one per non-target arm");
  app->add_option("--checkpoints", f.checkpoints,
                  "comma separated rounds (default: 1-2-5 log spacing)");
  app->add_option("--mc-samples", f.mc_samples,
                  "Monte Carlo samples for Thompson Sampling verification");
  app->add_option("--ts-posterior", f.ts_posterior, "scaled | standard");
  app->add_option("--ts-relaxation", f.ts_relaxation, "union | per-arm");
  app->add_option("--eps-rate", f.eps_rate, "epsilon-greedy exploration rate");
  app->add_option("--hist-bins", f.hist_bins,
                  "effort-ratio histogram bins (0: square-root rule)");
  app->add_option("--emit-plans", f.emit_plans,
                  "dump plan and history CSVs for the first N offline trials");
  app->add_option("--workers", f.workers, "worker threads (0: all cores)");
  app->add_flag("--paper-scale", f.paper_scale,
                "1000 offline trials; online T=1e5 with 100 trials");
}

ExperimentConfig BuildConfig(poison::Mode mode, const CLI::App* app,
                             const Flags& f) {
  ExperimentConfig c = ExperimentConfig::Defaults(mode);
  if (!f.config_path.empty()) {
    std::ifstream in(f.config_path);
    if (!in) throw poison::IoError("cannot read config '" + f.config_path + "'");
    nlohmann::json doc;
    try {
      in >> doc;
    } catch (const nlohmann::json::exception& e) {
      throw poison::UsageError("config '" + f.config_path +
                               "' is not valid JSON: " + e.what());
    }
    if (!doc.contains("mode")) doc["mode"] = poison::ModeName(mode);
    c = poison::ConfigFromJson(doc);
    if (c.mode != mode) {
      throw poison::UsageError("config mode is " + poison::ModeName(c.mode));
    }
  }
  auto given = [app](const char* name) { return app->count(name) > 0; };
  if (f.paper_scale) c.ApplyPaperScale();
  if (given("--algo")) c.algo = poison::ParseAlgorithm(f.algo);
  if (given("--attack")) c.attack = poison::ParseAttackKind(f.attack);
  if (given("--k")) c.k = f.k;
  if (given("--sigma")) c.sigma = f.sigma;
  if (given("--t")) c.horizon = f.horizon;
  if (given("--xi")) c.xi = f.xi;
  if (given("--delta")) c.delta = f.delta;
  if (given("--trials")) c.trials = f.trials;
  if (given("--seed")) c.seed = f.seed;
  if (given("--out")) c.out_dir = f.out;
  if (given("--target")) c.target = f.target - 1;
  if (given("--means")) {
    c.means = ParseList<double>(f.means);
    c.means_rule = poison::MeansRule::kExplicit;
    c.k = static_cast<int>(c.means.size());
  }
  if (given("--delta-grid")) {
    c.gap_grid = poison::ParseGapGrid(f.delta_grid);
    c.means_rule = poison::MeansRule::kGapGrid;
  }
  if (given("--constant-c")) c.constants = ParseList<double>(f.constants);
  if (given("--checkpoints")) c.checkpoints = ParseList<int64_t>(f.checkpoints);
  if (given("--mc-samples")) c.mc_samples = f.mc_samples;
  if (given("--ts-posterior")) {
    c.ts_posterior = poison::ParseTsPosterior(f.ts_posterior);
  }
  if (given("--ts-relaxation")) {
    c.ts_relaxation = poison::ParseTsRelaxation(f.ts_relaxation);
  }
  if (given("--eps-rate")) c.eps_rate = f.eps_rate;
  if (given("--hist-bins")) c.hist_bins = f.hist_bins;
  if (given("--emit-plans")) c.emit_plans = f.emit_plans;
  if (given("--workers")) c.workers = f.workers;
  c.Validate();
  return c;
}

int RunExperimentCommand(poison::Mode mode, const CLI::App* app,
                         const Flags& f) {
  const ExperimentConfig config = BuildConfig(mode, app, f);
  const poison::ExperimentReport report = poison::RunExperiment(config);
  if (!config.out_dir.empty()) {
    for (const std::string& path : poison::EmitOutputs(report, config.out_dir)) {
      std::cerr << "wrote " << path << '\n';
    }
  }
  for (const poison::SummaryRow& row : poison::Summarize(report)) {
    if (row.checkpoint != 0) continue;
    std::cout << row.group << ' ' << row.metric << ' '
              << poison::FormatDouble(row.value) << '\n';
  }
  if (mode == poison::Mode::kOffline && !report.AllVerified()) {
    int64_t failed = 0;
    for (const auto& r : report.offline) failed += r.success ? 0 : 1;
    std::cerr << failed << " of " << report.offline.size()
              << " trials failed verification\n";
    return kExitFailedVerification;
  }
  return kExitOk;
}

struct VerifyFlags {
  std::string plan, history, algo = "ucb", ts_posterior = "scaled";
  int target = 0;
  double sigma = 0.1, delta = 0.05, eps_rate = 1.0;
  int64_t mc_samples = 100000;
  uint64_t seed = 42;
};

int RunVerifyCommand(const VerifyFlags& f) {
  std::ifstream plan_in(f.plan);
  if (!plan_in) throw poison::IoError("cannot read plan '" + f.plan + "'");
  std::ifstream hist_in(f.history);
  if (!hist_in) throw poison::IoError("cannot read history '" + f.history + "'");
  const poison::PlanTable plan = poison::ReadPlanCsv(plan_in);
  const poison::History history =
      poison::ReadHistoryCsv(hist_in, static_cast<int>(plan.poison.size()));
  const int k = history.num_arms();
  if (static_cast<int>(plan.poison.size()) != k) {
    throw poison::UsageError("plan and history disagree on the number of arms");
  }
  for (int a = 0; a < k; ++a) {
    if (static_cast<int64_t>(plan.poison[a].size()) != history.count(a)) {
      throw poison::UsageError("plan and history disagree on pulls of arm " +
                               std::to_string(a + 1));
    }
  }
  const int target = f.target > 0 ? f.target - 1 : k - 1;
  if (target < 0 || target >= k) throw poison::UsageError("target out of range");

  poison::AgentParams params;
  params.sigma = f.sigma;
  params.eps_rate = f.eps_rate;
  params.ts_posterior = poison::ParseTsPosterior(f.ts_posterior);
  const poison::Algorithm algo = poison::ParseAlgorithm(f.algo);
  poison::Rng rng(f.seed);
  const poison::VerificationRecord v =
      poison::VerifyOffline(plan.poison, target, history, algo, params,
                            f.delta, f.mc_samples, rng);
  std::cout << (v.success ? "verified" : "FAILED") << " target_probability "
            << poison::FormatDouble(v.target_probability) << " required "
            << poison::FormatDouble(v.required_probability);
  if (!v.exact) std::cout << " std_error " << poison::FormatDouble(v.std_error);
  std::cout << '\n';
  return v.success ? kExitOk : kExitFailedVerification;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reward-poisoning attacks on stochastic bandits"};
  app.require_subcommand(1);

  Flags offline_flags, online_flags;
  CLI::App* offline = app.add_subcommand("offline", "offline attack trials");
  AddExperimentFlags(offline, offline_flags);
  CLI::App* online = app.add_subcommand("online", "online attack trials");
  AddExperimentFlags(online, online_flags);

  VerifyFlags vf;
  CLI::App* verify =
      app.add_subcommand("verify", "check a poisoning plan against a learner");
  verify->add_option("--plan", vf.plan, "plan CSV (arm,index,y,epsilon)")
      ->required();
  verify->add_option("--history", vf.history,
                     "history CSV (round,arm,reward_pre,reward_post)")
      ->required();
  verify->add_option("--algo", vf.algo, "eps-greedy | ucb | ts");
  verify->add_option("--target", vf.target, "target arm, 1-based (default: last)");
  verify->add_option("--sigma", vf.sigma, "learner noise scale");
  verify->add_option("--delta", vf.delta, "Thompson Sampling failure probability");
  verify->add_option("--eps-rate", vf.eps_rate, "epsilon-greedy exploration rate");
  verify->add_option("--ts-posterior", vf.ts_posterior, "scaled | standard");
  verify->add_option("--mc-samples", vf.mc_samples, "Monte Carlo samples");
  verify->add_option("--seed", vf.seed, "Monte Carlo seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*offline) {
      return RunExperimentCommand(poison::Mode::kOffline, offline, offline_flags);
    }
    if (*online) {
      return RunExperimentCommand(poison::Mode::kOnline, online, online_flags);
    }
    return RunVerifyCommand(vf);
  } catch (const std::exception& e) {
    std::cerr << "poison: " << e.what() << '\n';
    return kExitUsage;
  }
}
