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

#include "poison/experiment.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "poison/errors.h"
#include "poison/io.h"

namespace poison {
namespace {

using nlohmann::json;

constexpr uint64_t kVerifyStream = 1;

std::string GroupLabel(double gap) {
  std::ostringstream out;
  out << gap;
  return out.str();
}

// Per-arm constants from the configured list (K-1 non-target entries, or K).
std::vector<double> PerArmConstants(const ExperimentConfig& config, int k,
                                    int target) {
  const auto& c = config.constants;
  if (static_cast<int>(c.size()) == k) return c;
  std::vector<double> out(k, 0.0);
  size_t next = 0;
  for (int a = 0; a < k; ++a) {
    if (a != target) out[a] = c.at(next++);
  }
  return out;
}

template <typename T>
void Read(const json& doc, const char* key, T& field) {
  if (doc.contains(key)) field = doc.at(key).get<T>();
}

}  // namespace

std::string ModeName(Mode mode) {
  return mode == Mode::kOffline ? "offline" : "online";
}

Mode ParseMode(const std::string& name) {
  if (name == "offline") return Mode::kOffline;
  if (name == "online") return Mode::kOnline;
  throw UsageError("unknown mode '" + name + "'");
}

std::string MeansRuleName(MeansRule rule) {
  switch (rule) {
    case MeansRule::kUniformUnit:
      return "uniform-unit";
    case MeansRule::kExplicit:
      return "explicit";
    case MeansRule::kGapGrid:
      return "gap-grid";
  }
  return "unknown";
}

MeansRule ParseMeansRule(const std::string& name) {
  if (name == "uniform-unit") return MeansRule::kUniformUnit;
  if (name == "explicit") return MeansRule::kExplicit;
  if (name == "gap-grid") return MeansRule::kGapGrid;
  throw UsageError("unknown means rule '" + name + "'");
}

std::vector<double> GapGrid::Values() const {
  std::vector<double> values;
  if (!(step > 0.0)) {
    values.push_back(start);
    return values;
  }
  for (int64_t i = 0;; ++i) {
    const double v = start + static_cast<double>(i) * step;
    if (v > stop + 1e-9 * std::max(1.0, std::abs(stop))) break;
    // Snap to the decimal grid so labels read 0.3 rather than
    // 0.30000000000000004.
    values.push_back(std::round(v * 1e12) / 1e12);
  }
  return values;
}

GapGrid ParseGapGrid(const std::string& text) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(text);
  while (std::getline(in, part, ':')) parts.push_back(part);
  GapGrid grid;
  try {
    if (parts.size() == 1) {
      grid.start = grid.stop = ParseDouble(parts[0]);
      grid.step = 0.0;
    } else if (parts.size() == 3) {
      grid.start = ParseDouble(parts[0]);
      grid.stop = ParseDouble(parts[1]);
      grid.step = ParseDouble(parts[2]);
    } else {
      throw UsageError("");
    }
  } catch (const std::exception&) {
    throw UsageError("gap grid must be 'start:stop:step' or a number, got '" +
                     text + "'");
  }
  return grid;
}

ExperimentConfig ExperimentConfig::Defaults(Mode mode) {
  ExperimentConfig c;
  c.mode = mode;
  if (mode == Mode::kOnline) {
    c.k = 2;
    c.horizon = 10000;
    c.trials = 20;
    c.xi = 0.1;
    c.algo = Algorithm::kThompson;
    c.means_rule = MeansRule::kGapGrid;
  }
  return c;
}

void ExperimentConfig::ApplyPaperScale() {
  if (mode == Mode::kOffline) {
    trials = 1000;
  } else {
    horizon = 100000;
    trials = 100;
  }
}

int ExperimentConfig::ResolvedArms() const {
  if (means_rule == MeansRule::kGapGrid) return 2;
  if (means_rule == MeansRule::kExplicit) return static_cast<int>(means.size());
  return k;
}

int ExperimentConfig::ResolvedTarget() const {
  return target >= 0 ? target : ResolvedArms() - 1;
}

AgentParams ExperimentConfig::Agent() const {
  AgentParams params;
  params.sigma = sigma;
  params.eps_rate = eps_rate;
  params.ts_posterior = ts_posterior;
  return params;
}

std::vector<int64_t> ExperimentConfig::ResolvedCheckpoints() const {
  return checkpoints.empty() ? LogCheckpoints(horizon) : checkpoints;
}

void ExperimentConfig::Validate() const {
  const int arms = ResolvedArms();
  if (arms < 2) throw UsageError("need at least two arms");
  if (means_rule == MeansRule::kGapGrid && mode == Mode::kOffline) {
    throw UsageError("offline mode draws means uniformly or takes explicit means");
  }
  if (means_rule == MeansRule::kUniformUnit && mode == Mode::kOnline) {
    throw UsageError("online mode needs a gap grid or explicit means");
  }
  const int t = ResolvedTarget();
  if (t < 0 || t >= arms) throw UsageError("target arm out of range");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw UsageError("sigma must be > 0");
  }
  if (horizon < arms) throw UsageError("horizon T must be at least K");
  if (trials < 0) throw UsageError("trials must be >= 0");
  if (!(xi > 0.0)) throw UsageError("xi must be > 0");
  if (!(delta > 0.0 && delta < 1.0)) throw UsageError("delta must be in (0, 1)");
  if (mode == Mode::kOffline && algo == Algorithm::kThompson) {
    if (!(delta < 0.5 * (arms - 1))) {
      throw UsageError("Thompson Sampling attack needs delta < (K-1)/2");
    }
    if (mc_samples < kMinTsSamples) {
      throw UsageError("mc_samples must be >= 1000 for Thompson Sampling");
    }
  }
  if (!(eps_rate > 0.0)) throw UsageError("eps_rate must be > 0");
  if (means_rule == MeansRule::kExplicit) {
    BanditInstance probe(means, sigma, t);  // throws if target not suboptimal
  }
  if (means_rule == MeansRule::kGapGrid) {
    for (double gap : gap_grid.Values()) {
      if (!(gap > 0.0)) throw UsageError("gap values must be > 0");
    }
  }
  if (mode == Mode::kOnline && attack == AttackKind::kConstant) {
    if (static_cast<int>(constants.size()) != arms - 1 &&
        static_cast<int>(constants.size()) != arms) {
      throw UsageError("constant attack needs K-1 constants");
    }
    for (double c : constants) {
      if (!(c >= 0.0)) throw UsageError("attack constants must be >= 0");
    }
  }
  if (!checkpoints.empty()) {
    for (size_t i = 0; i < checkpoints.size(); ++i) {
      if (checkpoints[i] < 1 || checkpoints[i] > horizon ||
          (i > 0 && checkpoints[i] <= checkpoints[i - 1])) {
        throw UsageError("checkpoints must be strictly increasing in 1..T");
      }
    }
  }
  if (hist_bins < 0) throw UsageError("hist_bins must be >= 0");
  if (emit_plans < 0) throw UsageError("emit_plans must be >= 0");
  if (workers < 0) throw UsageError("workers must be >= 0");
}

json ConfigToJson(const ExperimentConfig& c) {
  json doc;
  doc["mode"] = ModeName(c.mode);
  doc["k"] = c.k;
  doc["sigma"] = c.sigma;
  doc["t"] = c.horizon;
  doc["trials"] = c.trials;
  doc["delta"] = c.delta;
  doc["xi"] = c.xi;
  doc["algo"] = AlgorithmName(c.algo);
  doc["attack"] = AttackKindName(c.attack);
  doc["target"] = c.target >= 0 ? json(c.target + 1) : json(nullptr);
  doc["means_rule"] = MeansRuleName(c.means_rule);
  doc["means"] = c.means;
  doc["gap_grid"] = {{"start", c.gap_grid.start},
                     {"stop", c.gap_grid.stop},
                     {"step", c.gap_grid.step}};
  doc["seed"] = c.seed;
  doc["out"] = c.out_dir;
  doc["checkpoints"] = c.checkpoints;
  doc["mc_samples"] = c.mc_samples;
  doc["ts_posterior"] = TsPosteriorName(c.ts_posterior);
  doc["ts_relaxation"] = TsRelaxationName(c.ts_relaxation);
  doc["constants"] = c.constants;
  doc["eps_rate"] = c.eps_rate;
  doc["hist_bins"] = c.hist_bins;
  doc["emit_plans"] = c.emit_plans;
  doc["workers"] = c.workers;
  return doc;
}

ExperimentConfig ConfigFromJson(const json& doc) {
  static const std::set<std::string> kKnown = {
      "mode",      "k",           "sigma",        "t",
      "trials",    "delta",       "xi",           "algo",
      "attack",    "target",      "means_rule",   "means",
      "gap_grid",  "seed",        "out",          "checkpoints",
      "mc_samples", "ts_posterior", "ts_relaxation", "constants",
      "eps_rate",  "hist_bins",   "emit_plans",   "workers"};
  if (!doc.is_object()) throw UsageError("config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (!kKnown.count(key)) throw UsageError("unknown config field '" + key + "'");
  }
  try {
    const Mode mode = doc.contains("mode")
                          ? ParseMode(doc.at("mode").get<std::string>())
                          : Mode::kOffline;
    ExperimentConfig c = ExperimentConfig::Defaults(mode);
    Read(doc, "k", c.k);
    Read(doc, "sigma", c.sigma);
    Read(doc, "t", c.horizon);
    Read(doc, "trials", c.trials);
    Read(doc, "delta", c.delta);
    Read(doc, "xi", c.xi);
    if (doc.contains("algo")) c.algo = ParseAlgorithm(doc.at("algo").get<std::string>());
    if (doc.contains("attack")) c.attack = ParseAttackKind(doc.at("attack").get<std::string>());
    if (doc.contains("target")) {
      c.target = doc.at("target").is_null() ? -1 : doc.at("target").get<int>() - 1;
    }
    if (doc.contains("means_rule")) {
      c.means_rule = ParseMeansRule(doc.at("means_rule").get<std::string>());
    }
    Read(doc, "means", c.means);
    if (doc.contains("gap_grid")) {
      const json& g = doc.at("gap_grid");
      if (g.is_string()) {
        c.gap_grid = ParseGapGrid(g.get<std::string>());
      } else {
        Read(g, "start", c.gap_grid.start);
        Read(g, "stop", c.gap_grid.stop);
        Read(g, "step", c.gap_grid.step);
      }
    }
    Read(doc, "seed", c.seed);
    Read(doc, "out", c.out_dir);
    Read(doc, "checkpoints", c.checkpoints);
    Read(doc, "mc_samples", c.mc_samples);
    if (doc.contains("ts_posterior")) {
      c.ts_posterior = ParseTsPosterior(doc.at("ts_posterior").get<std::string>());
    }
    if (doc.contains("ts_relaxation")) {
      c.ts_relaxation = ParseTsRelaxation(doc.at("ts_relaxation").get<std::string>());
    }
    Read(doc, "constants", c.constants);
    Read(doc, "eps_rate", c.eps_rate);
    Read(doc, "hist_bins", c.hist_bins);
    Read(doc, "emit_plans", c.emit_plans);
    Read(doc, "workers", c.workers);
    return c;
  } catch (const json::exception& e) {
    throw UsageError(std::string("bad config value: ") + e.what());
  }
}

bool ExperimentReport::AllVerified() const {
  return std::all_of(offline.begin(), offline.end(),
                     [](const OfflineTrialRow& r) { return r.success; });
}

double Mean(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

double StandardError(const std::vector<double>& values) {
  const size_t n = values.size();
  if (n < 2) return 0.0;
  const double m = Mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
}

double Percentile(std::vector<double> values, double q) {
  if (values.empty()) throw UsageError("percentile of an empty sample");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * q;
  const auto lo = static_cast<size_t>(std::floor(h));
  const size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

std::vector<SummaryRow> Summarize(const ExperimentReport& report) {
  std::vector<SummaryRow> rows;
  const ExperimentConfig& c = report.config;
  if (c.mode == Mode::kOffline) {
    if (report.offline.empty()) return rows;
    const std::string group = AlgorithmName(c.algo);
    std::vector<double> ratios, objectives;
    double successes = 0.0, suboptimal = 0.0;
    for (const OfflineTrialRow& r : report.offline) {
      ratios.push_back(r.effort_ratio);
      objectives.push_back(r.objective);
      successes += r.success ? 1.0 : 0.0;
      suboptimal += r.suboptimal ? 1.0 : 0.0;
    }
    const double n = static_cast<double>(report.offline.size());
    rows.push_back({group, "trials", 0, n});
    rows.push_back({group, "success_rate", 0, successes / n});
    rows.push_back({group, "effort_ratio_mean", 0, Mean(ratios)});
    rows.push_back({group, "effort_ratio_p50", 0, Percentile(ratios, 0.5)});
    rows.push_back({group, "effort_ratio_p95", 0, Percentile(ratios, 0.95)});
    rows.push_back({group, "effort_ratio_max", 0, Percentile(ratios, 1.0)});
    rows.push_back({group, "objective_mean", 0, Mean(objectives)});
    rows.push_back({group, "suboptimal_solves", 0, suboptimal});
    return rows;
  }

  // Online: one block per gap, in order of first appearance.
  std::vector<double> gaps;
  for (const OnlineTrialRow& r : report.online) {
    if (std::find(gaps.begin(), gaps.end(), r.gap) == gaps.end()) {
      gaps.push_back(r.gap);
    }
  }
  for (double gap : gaps) {
    std::vector<const OnlineTrialRow*> block;
    for (const OnlineTrialRow& r : report.online) {
      if (r.gap == gap) block.push_back(&r);
    }
    auto column = [&](auto getter) {
      std::vector<double> v;
      for (const OnlineTrialRow* r : block) v.push_back(getter(*r));
      return v;
    };
    const std::string group = GroupLabel(gap);
    const auto fraction = column([](const auto& r) { return r.target_fraction; });
    const auto cost = column([](const auto& r) { return r.total_cost; });
    const auto regret = column([](const auto& r) { return r.regret; });
    const auto held = column(
        [](const auto& r) { return r.concentration_held ? 1.0 : 0.0; });
    rows.push_back({group, "trials", 0, static_cast<double>(block.size())});
    rows.push_back({group, "target_fraction_mean", 0, Mean(fraction)});
    rows.push_back({group, "target_fraction_se", 0, StandardError(fraction)});
    rows.push_back({group, "total_cost_mean", 0, Mean(cost)});
    rows.push_back({group, "total_cost_se", 0, StandardError(cost)});
    rows.push_back({group, "regret_mean", 0, Mean(regret)});
    rows.push_back({group, "concentration_rate", 0, Mean(held)});
    for (size_t i = 0; i < report.checkpoints.size(); ++i) {
      const int64_t cp = report.checkpoints[i];
      const auto cost_i = column([i](const auto& r) { return r.cost_at[i]; });
      const auto pulls_i = column([i](const auto& r) {
        return static_cast<double>(r.target_pulls_at[i]);
      });
      rows.push_back({group, "cost_mean", cp, Mean(cost_i)});
      rows.push_back({group, "cost_se", cp, StandardError(cost_i)});
      rows.push_back({group, "target_pulls_mean", cp, Mean(pulls_i)});
      rows.push_back({group, "target_pulls_se", cp, StandardError(pulls_i)});
    }
  }
  return rows;
}

BanditInstance OfflineInstance(const ExperimentConfig& config, Rng& rng) {
  const int target = config.ResolvedTarget();
  if (config.means_rule == MeansRule::kExplicit) {
    return BanditInstance(config.means, config.sigma, target);
  }
  std::vector<double> means(config.k, 0.0);
  for (int a = 0; a < config.k; ++a) {
    if (a != target) means[a] = rng.Uniform();
  }
  return BanditInstance(std::move(means), config.sigma, target);
}

History CollectHistory(const BanditInstance& instance,
                       const ExperimentConfig& config, Rng& rng) {
  Agent agent(config.algo, config.Agent(), instance.num_arms());
  History history(instance.num_arms());
  for (int64_t round = 1; round <= config.horizon; ++round) {
    const int arm = agent.SelectArm(rng);
    const double reward = DrawReward(instance, arm, rng);
    agent.Observe(arm, reward);
    history.Append(arm, reward);
  }
  return history;
}

OfflineAttackPlan AttackFor(const History& history,
                            const ExperimentConfig& config) {
  const int target = config.ResolvedTarget();
  switch (config.algo) {
    case Algorithm::kEpsGreedy:
      return AttackEpsGreedy(history, target, config.xi, config.Agent());
    case Algorithm::kUcb:
      return AttackUcb(history, target, config.xi, config.sigma);
    case Algorithm::kThompson:
      return AttackTs(history, target, config.delta, config.sigma,
                      config.ts_relaxation, config.ts_posterior);
  }
  throw UsageError("unknown algorithm");
}

ExperimentReport RunOfflineExperiment(const ExperimentConfig& config,
                                      Execution exec) {
  if (config.mode != Mode::kOffline) throw UsageError("config is not offline");
  config.Validate();
  ExperimentReport report;
  report.config = config;
  report.offline.resize(config.trials);
  report.artifacts.resize(std::min(config.trials, config.emit_plans));

  ForEachIndex(
      config.trials, exec,
      [&](int64_t i) {
        Rng rng = Rng::ForStream(config.seed, {static_cast<uint64_t>(i)});
        const BanditInstance instance = OfflineInstance(config, rng);
        const History history = CollectHistory(instance, config, rng);
        OfflineAttackPlan plan = AttackFor(history, config);
        Rng verify_rng = Rng::ForStream(
            config.seed, {static_cast<uint64_t>(i), kVerifyStream});
        const VerificationRecord v =
            VerifyOffline(plan, history, config.algo, config.Agent(),
                          config.delta, config.mc_samples, verify_rng,
                          Execution::kSerial);
        OfflineTrialRow& row = report.offline[i];
        row.trial = i;
        row.success = v.success;
        row.effort_ratio = plan.effort_ratio;
        row.objective = plan.objective;
        row.target_probability = v.target_probability;
        row.required_probability = v.required_probability;
        row.std_error = v.std_error;
        row.target_pulls = history.count(instance.target());
        row.suboptimal = plan.solver.status == SolverStatus::kSuboptimal;
        if (i < static_cast<int64_t>(report.artifacts.size())) {
          report.artifacts[i] = {i, history, std::move(plan)};
        }
      },
      config.workers);
  return report;
}

ExperimentReport RunOnlineExperiment(const ExperimentConfig& config,
                                     Execution exec) {
  if (config.mode != Mode::kOnline) throw UsageError("config is not online");
  config.Validate();
  ExperimentReport report;
  report.config = config;
  report.checkpoints = config.ResolvedCheckpoints();

  std::vector<std::vector<double>> group_means;
  std::vector<double> group_gaps;
  const int target = config.ResolvedTarget();
  if (config.means_rule == MeansRule::kGapGrid) {
    for (double gap : config.gap_grid.Values()) {
      std::vector<double> means(2, 0.0);
      means[1 - target] = gap;
      group_means.push_back(means);
      group_gaps.push_back(gap);
    }
  } else {
    group_means.push_back(config.means);
    group_gaps.push_back(*std::max_element(config.means.begin(),
                                           config.means.end()) -
                         config.means[target]);
  }

  const int64_t groups = static_cast<int64_t>(group_means.size());
  report.online.resize(groups * config.trials);
  ForEachIndex(
      groups * config.trials, exec,
      [&](int64_t flat) {
        const int64_t g = flat / config.trials;
        const int64_t i = flat % config.trials;
        const BanditInstance instance(group_means[g], config.sigma, target);
        OnlineTrialOptions options;
        options.attacker.kind = config.attack;
        options.attacker.xi = config.xi;
        options.attacker.delta = config.delta;
        if (config.attack == AttackKind::kConstant) {
          options.attacker.constants =
              PerArmConstants(config, instance.num_arms(), target);
        }
        options.checkpoints = report.checkpoints;
        Rng rng = Rng::ForStream(
            config.seed, {static_cast<uint64_t>(g), static_cast<uint64_t>(i)});
        const OnlineTrialRecord record = RunOnlineTrial(
            instance, config.algo, config.Agent(), options, config.horizon, rng);
        OnlineTrialRow& row = report.online[flat];
        row.gap = group_gaps[g];
        row.trial = i;
        row.target_fraction = static_cast<double>(record.pulls[target]) /
                              static_cast<double>(config.horizon);
        row.total_cost = record.total_cost;
        row.regret = record.regret;
        row.concentration_held = record.concentration_held;
        row.cost_at = record.cost_at;
        row.target_pulls_at = record.target_pulls_at;
      },
      config.workers);
  return report;
}

ExperimentReport RunExperiment(const ExperimentConfig& config, Execution exec) {
  return config.mode == Mode::kOffline ? RunOfflineExperiment(config, exec)
                                       : RunOnlineExperiment(config, exec);
}

}  // namespace poison
