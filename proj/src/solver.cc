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

#include "poison/solver.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <Eigen/Dense>

#include "poison/errors.h"
#include "poison/normal.h"

namespace poison {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::vector<double> PostMeans(const ReducedProblem& problem,
                              const std::vector<double>& shifts) {
  std::vector<double> post(problem.num_arms());
  for (int a = 0; a < problem.num_arms(); ++a) {
    post[a] = problem.base_means[a] + shifts[a];
  }
  return post;
}

double UcbBonus(double sigma, int64_t horizon, double weight) {
  return 3.0 * sigma *
         std::sqrt(std::log(static_cast<double>(horizon + 1)) / weight);
}

double TsDenominator(const ReducedProblem& problem, double sigma,
                     TsPosterior posterior, int arm) {
  const int t = problem.target;
  return TsDenominatorScale(sigma, posterior) *
         std::sqrt(1.0 / problem.weights[arm] + 1.0 / problem.weights[t]);
}

void CheckTsDelta(double delta, int num_arms) {
  if (!(delta > 0.0 && delta < 0.5 * (num_arms - 1))) {
    throw DomainError("Thompson Sampling attack needs 0 < delta < (K-1)/2");
  }
}

double GradientNorm(const ReducedProblem& problem,
                    const std::vector<double>& shifts) {
  double s = 0.0;
  for (int a = 0; a < problem.num_arms(); ++a) {
    const double g = 2.0 * problem.weights[a] * shifts[a];
    s += g * g;
  }
  return std::sqrt(s);
}

// Barrier bookkeeping for the union-bound problem at a point x.
struct BarrierTerms {
  bool feasible = false;
  double union_slack = 0.0;  // delta - U(x)
  std::vector<double> mean_gaps;  // d_a = m~_a - m~_t (0 for the target)
};

class UnionBarrier {
 public:
  explicit UnionBarrier(const ReducedProblem& problem)
      : problem_(problem),
        spec_(std::get<TsUnionConstraint>(problem.constraint)),
        k_(problem.num_arms()),
        t_(problem.target),
        denom_(k_, 0.0) {
    for (int a = 0; a < k_; ++a) {
      if (a != t_) denom_[a] = TsDenominator(problem, spec_.sigma,
                                             spec_.posterior, a);
    }
  }

  BarrierTerms Terms(const Eigen::VectorXd& x) const {
    BarrierTerms terms;
    terms.mean_gaps.assign(k_, 0.0);
    double u = 0.0;
    for (int a = 0; a < k_; ++a) {
      if (a == t_) continue;
      const double d = Gap(x, a);
      terms.mean_gaps[a] = d;
      if (!(d < 0.0)) return terms;
      u += Phi(d / denom_[a]);
    }
    terms.union_slack = spec_.delta - u;
    terms.feasible = terms.union_slack > 0.0;
    return terms;
  }

  // Barrier-augmented objective; +infinity outside the strict interior.
  double Value(const Eigen::VectorXd& x, double mu) const {
    const BarrierTerms terms = Terms(x);
    if (!terms.feasible) return std::numeric_limits<double>::infinity();
    double v = 0.0;
    for (int a = 0; a < k_; ++a) v += problem_.weights[a] * x[a] * x[a];
    double barrier = -std::log(terms.union_slack);
    for (int a = 0; a < k_; ++a) {
      if (a != t_) barrier -= std::log(-terms.mean_gaps[a]);
    }
    return v + mu * barrier;
  }

  // Gradient and Hessian of Value at a strictly feasible x.
  void Derivatives(const Eigen::VectorXd& x, double mu, Eigen::VectorXd& grad,
                   Eigen::MatrixXd& hess) const {
    const BarrierTerms terms = Terms(x);
    grad = Eigen::VectorXd::Zero(k_);
    hess = Eigen::MatrixXd::Zero(k_, k_);
    Eigen::VectorXd grad_u = Eigen::VectorXd::Zero(k_);
    Eigen::MatrixXd hess_u = Eigen::MatrixXd::Zero(k_, k_);
    Eigen::MatrixXd hess_lin = Eigen::MatrixXd::Zero(k_, k_);
    Eigen::VectorXd grad_lin = Eigen::VectorXd::Zero(k_);
    for (int a = 0; a < k_; ++a) {
      if (a == t_) continue;
      const double d = terms.mean_gaps[a];
      const double c = denom_[a];
      const double z = d / c;
      const double pdf = NormalPdf(z);
      const double du = pdf / c;             // dU / dd_a
      const double d2u = -z * pdf / (c * c);  // d2U / dd_a^2, >= 0 for z <= 0
      grad_u[a] += du;
      grad_u[t_] -= du;
      AddOuter(hess_u, a, d2u);
      grad_lin[a] += -1.0 / d;
      grad_lin[t_] -= -1.0 / d;
      AddOuter(hess_lin, a, 1.0 / (d * d));
    }
    const double s = terms.union_slack;
    for (int a = 0; a < k_; ++a) {
      grad[a] = 2.0 * problem_.weights[a] * x[a];
      hess(a, a) = 2.0 * problem_.weights[a];
    }
    grad += mu * (grad_u / s + grad_lin);
    hess += mu * (hess_u / s + grad_u * grad_u.transpose() / (s * s) +
                  hess_lin);
  }

 private:
  double Gap(const Eigen::VectorXd& x, int a) const {
    return (problem_.base_means[a] + x[a]) -
           (problem_.base_means[t_] + x[t_]);
  }

  // hess += w (e_a - e_t)(e_a - e_t)^T
  void AddOuter(Eigen::MatrixXd& hess, int a, double w) const {
    hess(a, a) += w;
    hess(t_, t_) += w;
    hess(a, t_) -= w;
    hess(t_, a) -= w;
  }

  const ReducedProblem& problem_;
  TsUnionConstraint spec_;
  int k_;
  int t_;
  std::vector<double> denom_;
};

}  // namespace

void ReducedProblem::Validate() const {
  const int k = num_arms();
  if (k < 2) throw UsageError("problem needs at least two arms");
  if (static_cast<int>(base_means.size()) != k) {
    throw UsageError("weights and base means differ in length");
  }
  if (target < 0 || target >= k) throw UsageError("target arm out of range");
  for (int a = 0; a < k; ++a) {
    if (!(weights[a] >= 1.0) || !std::isfinite(weights[a])) {
      throw IllPosedError("arm " + std::to_string(a + 1) +
                          " has no pulls; attack problem is ill-posed");
    }
    if (!std::isfinite(base_means[a])) {
      throw UsageError("base means must be finite");
    }
  }
  std::visit(
      Overloaded{
          [](const GreedyMarginConstraint& c) {
            if (!(c.xi > 0.0)) throw UsageError("margin xi must be > 0");
          },
          [](const UcbMarginConstraint& c) {
            if (!(c.xi > 0.0)) throw UsageError("margin xi must be > 0");
            if (!(c.sigma >= 0.0)) throw UsageError("sigma must be >= 0");
            if (c.horizon < 1) throw UsageError("horizon must be >= 1");
          },
          [k](const TsUnionConstraint& c) {
            if (!(c.sigma > 0.0)) throw UsageError("sigma must be > 0");
            CheckTsDelta(c.delta, k);
          },
          [k](const TsPerArmConstraint& c) {
            if (!(c.sigma > 0.0)) throw UsageError("sigma must be > 0");
            CheckTsDelta(c.delta, k);
          },
      },
      constraint);
}

double ShiftObjective(const ReducedProblem& problem,
                      const std::vector<double>& shifts) {
  double v = 0.0;
  for (int a = 0; a < problem.num_arms(); ++a) {
    v += problem.weights[a] * shifts[a] * shifts[a];
  }
  return v;
}

double TsDenominatorScale(double sigma, TsPosterior posterior) {
  return posterior == TsPosterior::kScaled ? sigma * sigma * sigma : sigma;
}

double TsUnionBound(const std::vector<double>& post_means,
                    const std::vector<double>& counts, double sigma,
                    int target, TsPosterior posterior) {
  const double scale = TsDenominatorScale(sigma, posterior);
  double u = 0.0;
  for (int a = 0; a < static_cast<int>(post_means.size()); ++a) {
    if (a == target) continue;
    const double c = scale * std::sqrt(1.0 / counts[a] + 1.0 / counts[target]);
    u += Phi((post_means[a] - post_means[target]) / c);
  }
  return u;
}

std::vector<double> LinearOffsets(const ReducedProblem& problem) {
  const int k = problem.num_arms();
  const int t = problem.target;
  const std::vector<double>& y = problem.base_means;
  std::vector<double> b(k, 0.0);
  std::visit(
      Overloaded{
          [&](const GreedyMarginConstraint& c) {
            for (int a = 0; a < k; ++a) {
              if (a != t) b[a] = y[t] - y[a] - c.xi;
            }
          },
          [&](const UcbMarginConstraint& c) {
            const double bonus_t =
                UcbBonus(c.sigma, c.horizon, problem.weights[t]);
            for (int a = 0; a < k; ++a) {
              if (a == t) continue;
              const double bonus_a =
                  UcbBonus(c.sigma, c.horizon, problem.weights[a]);
              b[a] = y[t] - y[a] - c.xi + bonus_t - bonus_a;
            }
          },
          [&](const TsUnionConstraint&) {
            throw UsageError("union-bound constraint is not linear");
          },
          [&](const TsPerArmConstraint& c) {
            const double quantile = PhiInv(c.delta / (k - 1));
            for (int a = 0; a < k; ++a) {
              if (a == t) continue;
              b[a] = y[t] - y[a] +
                     TsDenominator(problem, c.sigma, c.posterior, a) * quantile;
            }
          },
      },
      problem.constraint);
  return b;
}

double FeasibilityMargin(const ReducedProblem& problem,
                         const std::vector<double>& shifts) {
  const int k = problem.num_arms();
  const int t = problem.target;
  const std::vector<double> post = PostMeans(problem, shifts);
  double margin = std::numeric_limits<double>::infinity();
  std::visit(
      Overloaded{
          [&](const GreedyMarginConstraint& c) {
            for (int a = 0; a < k; ++a) {
              if (a != t) margin = std::min(margin, post[t] - post[a] - c.xi);
            }
          },
          [&](const UcbMarginConstraint& c) {
            const double u_t =
                post[t] + UcbBonus(c.sigma, c.horizon, problem.weights[t]);
            for (int a = 0; a < k; ++a) {
              if (a == t) continue;
              const double u_a =
                  post[a] + UcbBonus(c.sigma, c.horizon, problem.weights[a]);
              margin = std::min(margin, u_t - u_a - c.xi);
            }
          },
          [&](const TsUnionConstraint& c) {
            margin = c.delta - TsUnionBound(post, problem.weights, c.sigma, t,
                                            c.posterior);
            for (int a = 0; a < k; ++a) {
              if (a != t) margin = std::min(margin, post[t] - post[a]);
            }
          },
          [&](const TsPerArmConstraint& c) {
            const double quantile = PhiInv(c.delta / (k - 1));
            for (int a = 0; a < k; ++a) {
              if (a == t) continue;
              const double bound =
                  TsDenominator(problem, c.sigma, c.posterior, a) * quantile;
              margin = std::min(margin, bound - (post[a] - post[t]));
            }
          },
      },
      problem.constraint);
  return margin;
}

SolverResult SolveLinear(const ReducedProblem& problem) {
  problem.Validate();
  const int k = problem.num_arms();
  const int t = problem.target;
  const std::vector<double> b = LinearOffsets(problem);

  // Breakpoints c_a = -b_a; arm a is active (shift_a < 0) while s < c_a.
  std::vector<int> order;
  for (int a = 0; a < k; ++a) {
    if (a != t) order.push_back(a);
  }
  std::sort(order.begin(), order.end(),
            [&](int lhs, int rhs) { return -b[lhs] < -b[rhs]; });

  double s = 0.0;
  const int n = static_cast<int>(order.size());
  if (-b[order[n - 1]] > 0.0) {
    double weight = problem.weights[t];
    double moment = 0.0;
    for (int j = n - 1; j >= 0; --j) {
      const int a = order[j];
      weight += problem.weights[a];
      moment += problem.weights[a] * -b[a];
      s = moment / weight;
      if (j == 0 || s >= -b[order[j - 1]]) break;
    }
  }

  SolverResult result;
  result.shifts.assign(k, 0.0);
  result.shifts[t] = s;
  for (int a = 0; a < k; ++a) {
    if (a != t) result.shifts[a] = std::min(0.0, s + b[a]);
  }
  result.objective = ShiftObjective(problem, result.shifts);
  result.feasibility_margin = FeasibilityMargin(problem, result.shifts);
  // Multipliers -2 w_a shift_a >= 0 make every non-target stationarity row
  // vanish exactly; only the target row can carry a residual.
  double target_row = 2.0 * problem.weights[t] * s;
  for (int a = 0; a < k; ++a) {
    if (a != t) target_row += 2.0 * problem.weights[a] * result.shifts[a];
  }
  const double gnorm = GradientNorm(problem, result.shifts);
  result.kkt_residual = gnorm > 0.0 ? std::abs(target_row) / gnorm : 0.0;
  result.iterations = n;
  return result;
}

SolverResult SolveTsUnion(const ReducedProblem& problem,
                          const BarrierOptions& options) {
  problem.Validate();
  const auto& spec = std::get<TsUnionConstraint>(problem.constraint);
  const int k = problem.num_arms();

  const std::vector<double> zero(k, 0.0);
  if (FeasibilityMargin(problem, zero) >= 0.0) {
    SolverResult result;
    result.shifts = zero;
    result.feasibility_margin = FeasibilityMargin(problem, zero);
    return result;
  }

  // Per-arm split: feasible for the union bound. A slightly tighter split is
  // strictly interior and seeds the barrier.
  ReducedProblem per_arm = problem;
  per_arm.constraint =
      TsPerArmConstraint{spec.delta, spec.sigma, spec.posterior};
  SolverResult fallback = SolveLinear(per_arm);
  fallback.feasibility_margin = FeasibilityMargin(problem, fallback.shifts);

  per_arm.constraint =
      TsPerArmConstraint{spec.delta * (1.0 - 1e-6), spec.sigma, spec.posterior};
  const SolverResult seed = SolveLinear(per_arm);

  UnionBarrier barrier(problem);
  Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(seed.shifts.data(), k);
  if (!barrier.Terms(x).feasible) {
    fallback.status = SolverStatus::kSuboptimal;
    fallback.diagnostics = "barrier seed is not strictly feasible";
    return fallback;
  }

  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;
  int newton = 0;
  double mu = options.initial_mu;
  double last_mu = mu;
  bool converged = true;
  while (mu >= options.final_mu && converged) {
    for (;;) {
      if (newton >= options.max_newton_iterations) {
        converged = false;
        break;
      }
      barrier.Derivatives(x, mu, grad, hess);
      const Eigen::VectorXd step = hess.ldlt().solve(-grad);
      const double decrement = -grad.dot(step);
      ++newton;
      if (!std::isfinite(decrement)) {
        converged = false;
        break;
      }
      if (decrement <= 1e-13) break;
      const double value = barrier.Value(x, mu);
      double alpha = 1.0;
      int halvings = 0;
      while (halvings < 80) {
        const double trial = barrier.Value(x + alpha * step, mu);
        if (trial <= value - 0.25 * alpha * decrement) break;
        alpha *= 0.5;
        ++halvings;
      }
      if (halvings == 80) break;  // no further progress at this precision
      x += alpha * step;
    }
    last_mu = mu;
    mu *= 0.5;
  }

  SolverResult result;
  result.shifts.assign(x.data(), x.data() + k);
  result.objective = ShiftObjective(problem, result.shifts);
  result.feasibility_margin = FeasibilityMargin(problem, result.shifts);
  result.iterations = newton;
  barrier.Derivatives(x, last_mu, grad, hess);
  const double gnorm = GradientNorm(problem, result.shifts);
  result.kkt_residual = gnorm > 0.0 ? grad.norm() / gnorm : grad.norm();

  const bool feasible = result.feasibility_margin >= 0.0;
  if (!converged || !feasible) {
    std::ostringstream msg;
    msg << "barrier stopped after " << newton << " Newton steps (mu="
        << last_mu << ", margin=" << result.feasibility_margin
        << ", objective=" << result.objective << "); returning per-arm split";
    fallback.status = SolverStatus::kSuboptimal;
    fallback.iterations = newton;
    fallback.diagnostics = msg.str();
    return fallback;
  }
  // With two arms the split coincides with the union bound and is exact,
  // while the barrier point sits just inside the boundary.
  if (fallback.objective <= result.objective) {
    fallback.iterations = newton;
    return fallback;
  }
  return result;
}

}  // namespace poison
