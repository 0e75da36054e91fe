// Copyright 2026 The Authors.
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

#include "matcon/solver.h"

#include <algorithm>
#include <set>
#include <string>

#include "matcon/errors.h"
#include "matcon/grades.h"
#include "matcon/parallel.h"

namespace matcon {
namespace {

Rational MaxExpectedValue(const OlcpmElement& e) {
  Rational best = 0;
  for (const auto& o : e.outcomes) best = std::max(best, Rational(o.value * o.prob));
  return best;
}

// Strictly greater replaces, so ties keep the smaller alpha.
void PickBest(ContractSolution& sol) {
  std::size_t best = 0;
  for (std::size_t j = 1; j < sol.candidates.size(); ++j) {
    const auto& c = sol.candidates[j];
    const auto& b = sol.candidates[best];
    const bool better = c.exact_utility ? *c.exact_utility > *b.exact_utility
                                        : c.utility > b.utility;
    if (better) best = j;
  }
  const auto& b = sol.candidates[best];
  sol.alpha_star = b.alpha;
  sol.utility = b.utility;
  sol.exact_utility = b.exact_utility;
}

ContractSolution SampleAtCriticalValues(const OlcpmInstance& instance,
                                        const Rational& mu,
                                        SampleConfig config,
                                        std::string method) {
  ContractSolution sol;
  sol.method = std::move(method);
  sol.mu = mu;
  sol.certified_replications =
      CertifiedReplications(instance.n(), instance.m(), mu);
  if (!config.replications && !config.mu) config.mu = mu;
  sol.replications = ResolveReplications(config, instance.n(), instance.m());
  for (const auto& alpha : CriticalValues(instance)) {
    const AcceptanceEstimate est = SampleAcceptance(instance, alpha, config);
    sol.candidates.push_back(
        {alpha, UtilityFromAcceptance(instance, alpha, est.rho), std::nullopt});
  }
  PickBest(sol);
  return sol;
}

}  // namespace

ContractSolution SolveExact(const OlcpmInstance& instance,
                            const ExactOptions& options) {
  RequireValid(instance);
  const std::vector<Rational> alphas = CriticalValues(instance);
  ContractSolution sol;
  sol.method = "exact";
  sol.candidates.resize(alphas.size());
  ExactOptions inner = options;
  inner.workers = 1;
  ParallelFor(alphas.size(), options.workers, [&](std::uint64_t j) {
    const UtilityReport report = ExactUtilities(instance, alphas[j], inner);
    sol.candidates[j] = {alphas[j], ToDouble(report.u_principal),
                         report.u_principal};
  });
  PickBest(sol);
  return sol;
}

Rational BalanceRatio(const OlcpmInstance& instance) {
  std::vector<Rational> peaks;
  for (const auto& e : instance.elements) peaks.push_back(MaxExpectedValue(e));
  Rational worst = 0;
  for (const auto& top : peaks) {
    for (const auto& bottom : peaks) {
      if (bottom == 0) continue;
      worst = std::max(worst, Rational(top / bottom));
    }
  }
  return worst;
}

Rational BalancedMu(int n, int m, const Rational& eps, const Rational& omega) {
  const Rational nm(n * m);
  return eps / (2 * omega) / (160 * Pow(nm, 4));
}

ContractSolution SolveFprasBalanced(const OlcpmInstance& instance,
                                    const Rational& eps, const Rational& omega,
                                    const SampleConfig& config) {
  RequireValid(instance);
  if (eps <= 0 || eps >= 1) {
    throw ValidationError("epsilon must lie in (0, 1)");
  }
  if (omega <= 0) throw ValidationError("omega must be positive");
  const Rational ratio = BalanceRatio(instance);
  if (ratio > omega) {
    throw InfeasibleError("balance condition violated: ratio " +
                          ToString(ratio) + " exceeds omega " +
                          ToString(omega));
  }
  return SampleAtCriticalValues(
      instance, BalancedMu(instance.n(), instance.m(), eps, omega), config,
      "balanced");
}

int BoundedSupportValueCount(const OlcpmInstance& instance, int max_values) {
  std::set<Rational> values;
  for (int i = 0; i < instance.n(); ++i) {
    std::set<Rational> nonzero;
    for (const auto& o : instance.elements[i].outcomes) {
      values.insert(o.value);
      if (o.prob > 0 && o.value != 0) nonzero.insert(o.value);
    }
    if (nonzero.size() > 1) {
      throw InfeasibleError("element " + std::to_string(i) + " has " +
                            std::to_string(nonzero.size()) +
                            " distinct nonzero values; bounded support "
                            "allows one besides zero");
    }
  }
  const int t = static_cast<int>(values.size());
  if (t > max_values) {
    throw InfeasibleError("instance has " + std::to_string(t) +
                          " distinct values, above the limit " +
                          std::to_string(max_values));
  }
  return t;
}

Rational BoundedSupportMu(int n, int m, int distinct_values,
                          const Rational& eps) {
  const Rational nm(n * m);
  return eps / Pow(Rational(2 * n), distinct_values) / (160 * Pow(nm, 4)) /
         (160 * Pow(nm, 3));
}

ContractSolution SolveFprasBoundedSupport(const OlcpmInstance& instance,
                                          const Rational& eps,
                                          const SampleConfig& config,
                                          int max_values) {
  RequireValid(instance);
  if (eps <= 0 || eps >= 1) {
    throw ValidationError("epsilon must lie in (0, 1)");
  }
  const int t = BoundedSupportValueCount(instance, max_values);
  return SampleAtCriticalValues(
      instance, BoundedSupportMu(instance.n(), instance.m(), t, eps), config,
      "bounded-support");
}

std::vector<SweepRow> Sweep(const OlcpmInstance& instance,
                            const std::vector<Rational>& alphas,
                            const std::optional<SampleConfig>& sampled,
                            const ExactOptions& options) {
  RequireValid(instance);
  std::vector<SweepRow> rows;
  rows.reserve(alphas.size());
  for (const auto& alpha : alphas) {
    SweepRow row;
    row.alpha = alpha;
    if (sampled) {
      const SampledUtilities s = SampleUtilities(instance, alpha, *sampled);
      row.u_principal = s.u_principal;
      row.u_agent = s.u_agent;
      row.expected_cost = s.expected_cost;
    } else {
      const UtilityReport r = ExactUtilities(instance, alpha, options);
      row.exact_u_principal = r.u_principal;
      row.exact_u_agent = r.u_agent;
      row.exact_expected_cost = r.expected_cost;
      row.u_principal = ToDouble(r.u_principal);
      row.u_agent = ToDouble(r.u_agent);
      row.expected_cost = ToDouble(r.expected_cost);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<Rational> SweepAlphas(const OlcpmInstance& instance, int grid) {
  if (grid < 1) throw ValidationError("grid must be at least 1");
  std::vector<Rational> out = CriticalValues(instance);
  for (int z = 0; z <= grid; ++z) out.push_back(Rational(z, grid));
  for (auto& a : out) a.canonicalize();
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace matcon
