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

#include "matcon/upm.h"

#include <algorithm>
#include <memory>
#include <string>

#include "matcon/errors.h"
#include "matcon/frugal.h"
#include "matcon/parallel.h"

namespace matcon {
namespace {

constexpr std::uint64_t kChunk = 4096;

std::vector<int> Others(const UpmInstance& instance) {
  std::vector<int> out;
  for (int i = 0; i < instance.n(); ++i) {
    if (i != instance.special) out.push_back(i);
  }
  return out;
}

class SubsetSum {
 public:
  SubsetSum(const UpmInstance& instance)
      : instance_(instance), others_(Others(instance)) {}

  Rational Run() {
    Visit(0, Rational(1));
    return total_;
  }

 private:
  void Visit(std::size_t depth, const Rational& weight) {
    if (weight == 0) return;
    // Spanning is monotone in the present set; a spanned prefix stays so.
    if (instance_.matroid->InSpan(present_, instance_.special)) return;
    if (depth == others_.size()) {
      total_ += weight;
      return;
    }
    const int j = others_[depth];
    const Rational& p = instance_.probs[j];
    present_.push_back(j);
    Visit(depth + 1, weight * p);
    present_.pop_back();
    Visit(depth + 1, weight * (1 - p));
  }

  const UpmInstance& instance_;
  std::vector<int> others_;
  std::vector<int> present_;
  Rational total_;
};

// K = (1/eps^n - 1) / (eps^2 (1/eps - 1)) and
// L = (1/eps^n - 1) / (eps (1/eps - 1)).
Rational DeltaFactor(const Rational& eps, int n) {
  const Rational inv = 1 / eps;
  return (Pow(inv, n) - 1) / (eps * eps * (inv - 1));
}

Rational XiFactor(const Rational& eps, int n) {
  const Rational inv = 1 / eps;
  return (Pow(inv, n) - 1) / (eps * (inv - 1));
}

void RequireReduction(const UpmInstance& instance,
                      const ReductionParams& params, bool require_small) {
  RequireValid(instance);
  const int n = instance.n();
  std::vector<std::string> problems = CheckReductionParams(params, n);
  for (int i : Others(instance)) {
    const Rational& p = instance.probs[i];
    if (p <= 0) {
      problems.push_back("element " + std::to_string(i) +
                         ": probability must be positive");
    } else if (require_small && p > params.delta) {
      problems.push_back("element " + std::to_string(i) + ": p = " +
                         ToString(p) + " exceeds delta = " +
                         ToString(params.delta));
    }
  }
  if (!problems.empty()) {
    std::string msg = "reduction preconditions violated:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw InfeasibleError(msg);
  }
}

OutcomeDistribution TwoPoint(const Rational& value, const Rational& p) {
  return {{value, p}, {Rational(0), 1 - p}};
}

Reduction BuildReduction(const UpmInstance& instance,
                         const ReductionParams& params, bool require_small,
                         bool bounded_support) {
  RequireReduction(instance, params, require_small);
  const int n = instance.n();
  if (bounded_support && n < 4) {
    throw InfeasibleError("bounded-support reduction needs n >= 4, got " +
                          std::to_string(n));
  }
  Reduction out;
  out.params = params;
  out.ground_of_role = Others(instance);
  out.ground_of_role.push_back(instance.special);
  out.instance.matroid =
      std::make_shared<ParallelExtension>(instance.matroid, out.ground_of_role);

  const Rational& eps = params.eps;
  const Rational inv = 1 / eps;
  for (int role = 1; role <= n; ++role) {
    OlcpmElement e;
    if (role == n) {
      e.cost = (1 - params.xi) / params.xi;
      e.outcomes = {{1 / params.xi, Rational(1)}};
    } else {
      const Rational& p = instance.probs[out.ground_of_role[role - 1]];
      if (role == 1) {
        e.cost = 0;
        e.outcomes = TwoPoint(params.beta / p, p);
      } else {
        const Rational v = Pow(inv, role - 1);
        e.cost = (v - 1) * p;
        if (!bounded_support) {
          e.outcomes = TwoPoint(v, p);
        } else {
          const Rational top = Pow(inv, n - 2);
          const Rational q2 = p * (v - inv) / (top - inv);
          const Rational q1 = p - q2;
          if (q1 < 0 || q2 < 0) {
            throw InfeasibleError("role " + std::to_string(role) +
                                  ": negative outcome probability");
          }
          e.outcomes = {{inv, q1}, {top, q2}, {Rational(0), 1 - p}};
        }
      }
    }
    out.instance.elements.push_back(std::move(e));
  }
  PadOutcomes(out.instance);
  RequireValid(out.instance);
  return out;
}

struct Prepared {
  std::optional<Rational> answer;  // decided without the oracle
  UpmInstance instance;
  Rational lambda;
};

// Zero-check, then drops elements that can never matter (p = 0, loops).
Prepared Prepare(const UpmInstance& instance) {
  RequireValid(instance);
  Prepared out;
  const Matroid& m = *instance.matroid;
  std::vector<int> certain;
  for (int i : Others(instance)) {
    if (instance.probs[i] == 1) certain.push_back(i);
  }
  if (m.InSpan(certain, instance.special)) {
    out.answer = Rational(0);
    return out;
  }
  std::vector<int> kept;
  std::vector<Rational> probs;
  int special = -1;
  BigInt lambda = 1;
  for (int i = 0; i < instance.n(); ++i) {
    if (i == instance.special) {
      special = static_cast<int>(kept.size());
    } else if (instance.probs[i] == 0 || m.InSpan({}, i)) {
      continue;
    } else {
      lambda *= instance.probs[i].get_den();
    }
    kept.push_back(i);
    probs.push_back(i == instance.special ? Rational(0) : instance.probs[i]);
  }
  out.lambda = Rational(lambda);
  if (kept.size() == 1) {
    out.answer = Rational(1);
    return out;
  }
  out.instance.matroid =
      std::make_shared<ParallelExtension>(instance.matroid, kept);
  out.instance.special = special;
  out.instance.probs = std::move(probs);
  return out;
}

const Candidate* FindCandidate(const ContractSolution& sol,
                               const Rational& alpha) {
  for (const auto& c : sol.candidates) {
    if (c.alpha == alpha) return &c;
  }
  return nullptr;
}

// True when the oracle's answer for contract level beta is (1 - xi)-type.
bool ProbeType(const UpmInstance& instance, const Rational& beta,
               const Rational& eps, const OlcpmOracle& oracle,
               const DriverOptions& options, int& calls) {
  UpmInstance current = instance;
  ReductionParams params = ChooseReductionParams(current.n(), beta, eps);
  if (options.certified) {
    for (;;) {
      bool small = true;
      for (int i : Others(current)) small = small && current.probs[i] <= params.delta;
      if (small) break;
      current = UpmCleanup(current, params.delta, eps,
                           options.cleanup_max_elements);
      params = ChooseReductionParams(current.n(), beta, eps);
    }
  }
  const Reduction red = UpmToOlcpm(current, params, options.certified);
  const ContractSolution sol = oracle(red.instance);
  ++calls;
  const Candidate* at_zero = FindCandidate(sol, Rational(0));
  const Candidate* at_top = FindCandidate(sol, 1 - params.xi);
  if (at_zero && at_top) {
    if (at_zero->exact_utility && at_top->exact_utility) {
      return !(*at_zero->exact_utility > *at_top->exact_utility);
    }
    return !(at_zero->utility > at_top->utility);
  }
  const auto listed = ReductionCriticalValues(params, current.n());
  return !(sol.alpha_star < listed[1]);
}

}  // namespace

Rational UpmExact(const UpmInstance& instance, std::uint64_t cap) {
  RequireValid(instance);
  CheckedPower(2, instance.n() - 1, cap, "2^(n-1)");
  return SubsetSum(instance).Run();
}

Rational UpmUniformPoly(const UpmInstance& instance) {
  RequireValid(instance);
  const auto* uniform =
      dynamic_cast<const UniformMatroid*>(instance.matroid.get());
  if (uniform == nullptr) {
    throw ValidationError("uniform-poly requires a uniform matroid");
  }
  std::vector<Rational> coeff{Rational(1)};
  for (int i : Others(instance)) {
    const Rational& p = instance.probs[i];
    coeff.emplace_back(0);
    for (std::size_t d = coeff.size() - 1; d > 0; --d) {
      coeff[d] = coeff[d] * (1 - p) + coeff[d - 1] * p;
    }
    coeff[0] *= 1 - p;
  }
  Rational total = 0;
  for (int d = 0; d < uniform->rank() && d < static_cast<int>(coeff.size());
       ++d) {
    total += coeff[d];
  }
  return total;
}

double UpmMonteCarlo(const UpmInstance& instance, const SampleConfig& config) {
  RequireValid(instance);
  const int n = instance.n();
  const std::uint64_t t = ResolveReplications(config, n, 1);
  const std::vector<int> others = Others(instance);
  std::vector<double> probs(n, 0.0);
  for (int i : others) probs[i] = ToDouble(instance.probs[i]);
  const std::uint64_t chunks = (t + kChunk - 1) / kChunk;
  std::vector<std::uint64_t> counts(chunks, 0);
  ParallelFor(chunks, config.workers, [&](std::uint64_t c) {
    SpanCache cache(n);
    std::vector<int> present;
    const std::uint64_t end = std::min(t, (c + 1) * kChunk);
    for (std::uint64_t r = c * kChunk; r < end; ++r) {
      present.clear();
      std::uint32_t mask = 0;
      for (int j : others) {
        if (CounterUniform(config.seed, r, j) < probs[j]) {
          present.push_back(j);
          if (j < SpanCache::kMaxN) mask |= std::uint32_t{1} << j;
        }
      }
      if (!cache.InSpan(*instance.matroid, instance.special, mask, present)) {
        ++counts[c];
      }
    }
  });
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  return static_cast<double>(total) / static_cast<double>(t);
}

OlcpmToUpmResult OlcpmToUpm(const OlcpmInstance& instance,
                            const Rational& alpha, int i, int k,
                            std::uint64_t cap) {
  RequireValid(instance);
  if (i < 0 || i >= instance.n() || k < 0 || k >= instance.m()) {
    throw ValidationError("element/outcome index out of range");
  }
  const FrugalPolicy policy = PerturbedPolicy(instance, alpha);
  OlcpmToUpmResult out;
  if (!policy.probeable(i)) return out;
  const AcceptanceKernel kernel(policy);
  UpmInstance upm;
  upm.matroid = instance.matroid;
  upm.special = i;
  upm.probs.assign(instance.n(), Rational(0));
  for (int j = 0; j < instance.n(); ++j) {
    if (j == i) continue;
    for (int x = 0; x < instance.m(); ++x) {
      if (kernel.Blocks(i, k, j, x)) {
        upm.probs[j] += instance.elements[j].outcomes[x].prob;
      }
    }
  }
  out.acceptance = UpmExact(upm, cap);
  out.instance = std::move(upm);
  return out;
}

UpmInstance UpmCleanup(const UpmInstance& instance, const Rational& delta,
                       const Rational& eps, int max_elements) {
  RequireValid(instance);
  if (delta <= 0 || delta >= 1 || eps <= 0 || eps >= 1) {
    throw ValidationError("cleanup needs delta and eps in (0, 1)");
  }
  const int n = instance.n();
  std::vector<int> multiplicity(n, 1);
  std::vector<Rational> probs;
  int special = -1;
  long total = 0;
  for (int i = 0; i < n; ++i) {
    if (i == instance.special) {
      special = static_cast<int>(total);
      probs.emplace_back(0);
      ++total;
      continue;
    }
    Rational p = instance.probs[i];
    if (p == 1) p = 1 - eps / n;
    int copies = 0;
    while (p > delta) {
      probs.push_back(delta);
      p = (p - delta) / (1 - delta);
      ++copies;
      if (++total > max_elements) {
        throw CapExceededError("cleanup exceeds " +
                               std::to_string(max_elements) + " elements");
      }
    }
    probs.push_back(p);
    multiplicity[i] = copies + 1;
    if (++total > max_elements) {
      throw CapExceededError("cleanup exceeds " +
                             std::to_string(max_elements) + " elements");
    }
  }
  UpmInstance out;
  out.matroid = ParallelExtend(instance.matroid, multiplicity);
  out.special = special;
  out.probs = std::move(probs);
  return out;
}

std::vector<std::string> CheckReductionParams(const ReductionParams& params,
                                              int n) {
  std::vector<std::string> out;
  if (n < 2) out.push_back("n >= 2 required, got " + std::to_string(n));
  if (params.beta <= 0 || params.beta > 1) out.push_back("beta in (0, 1]");
  if (params.eps <= 0 || params.eps >= Rational(1, 2)) {
    out.push_back("eps in (0, 1/2)");
  }
  if (params.delta <= 0 || params.delta >= 1) out.push_back("delta in (0, 1)");
  if (params.xi <= 0) out.push_back("xi > 0");
  if (!out.empty()) return out;
  if (!(params.delta * DeltaFactor(params.eps, n) < params.beta)) {
    out.push_back("delta (1/eps^n - 1) / (eps^2 (1/eps - 1)) < beta fails");
  }
  if (!(params.xi < Pow(params.eps, n - 2))) {
    out.push_back("xi < eps^(n-2) fails");
  }
  if (!(params.xi * (1 + XiFactor(params.eps, n)) <= params.eps)) {
    out.push_back("xi (1 + (1/eps^n - 1) / (eps (1/eps - 1))) <= eps fails");
  }
  return out;
}

ReductionParams ChooseReductionParams(int n, const Rational& beta,
                                      const Rational& eps) {
  if (n < 2) throw InfeasibleError("reduction needs n >= 2");
  if (beta <= 0 || beta > 1) throw InfeasibleError("beta must lie in (0, 1]");
  if (eps <= 0 || eps >= Rational(1, 2)) {
    throw InfeasibleError("eps must lie in (0, 1/2)");
  }
  ReductionParams params{beta, eps, Rational(1, 2), Rational(1, 2)};
  const Rational k = DeltaFactor(eps, n);
  while (!(params.delta * k < beta)) params.delta /= 2;
  const Rational l = 1 + XiFactor(eps, n);
  const Rational top = Pow(eps, n - 2);
  while (!(params.xi < top && params.xi * l <= eps)) params.xi /= 2;
  return params;
}

Reduction UpmToOlcpm(const UpmInstance& instance, const ReductionParams& params,
                     bool require_small_probs) {
  return BuildReduction(instance, params, require_small_probs, false);
}

Reduction UpmToOlcpmBoundedSupport(const UpmInstance& instance,
                                   const ReductionParams& params,
                                   bool require_small_probs) {
  return BuildReduction(instance, params, require_small_probs, true);
}

std::vector<Rational> ReductionCriticalValues(const ReductionParams& params,
                                              int n) {
  std::vector<Rational> out{Rational(0)};
  for (int j = 1; j <= n - 2; ++j) out.push_back(1 - Pow(params.eps, j));
  out.push_back(1 - params.xi);
  out.emplace_back(1);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

OlcpmOracle ExactOracle() {
  return [](const OlcpmInstance& instance) { return SolveExact(instance); };
}

DriverResult UpmViaOlcpm(const UpmInstance& instance,
                         const OlcpmOracle& oracle,
                         const DriverOptions& options) {
  Prepared prep = Prepare(instance);
  DriverResult out;
  out.lambda = prep.lambda;
  if (prep.answer) {
    out.rho = *prep.answer;
    out.zero_check = true;
    return out;
  }
  out.eps = 1 / (4 * prep.lambda);
  const BigInt lambda = prep.lambda.get_num();
  BigInt lo = 1;
  BigInt hi = lambda;
  while (lo < hi) {
    const BigInt mid = (lo + hi + 1) / 2;
    Rational beta(mid, lambda);
    beta.canonicalize();
    if (ProbeType(prep.instance, beta, out.eps, oracle, options,
                  out.oracle_calls)) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  out.rho = Rational(lo, lambda);
  out.rho.canonicalize();
  return out;
}

DriverResult UpmViaOlcpmApprox(const UpmInstance& instance,
                               const Rational& psi, const OlcpmOracle& oracle,
                               const DriverOptions& options) {
  if (psi <= 0) throw ValidationError("psi must be positive");
  Prepared prep = Prepare(instance);
  DriverResult out;
  out.lambda = prep.lambda;
  if (prep.answer) {
    out.rho = *prep.answer;
    out.zero_check = true;
    return out;
  }
  out.eps = std::min(Rational(psi / prep.lambda), Rational(1, 4));
  std::vector<Rational> grid;
  Rational beta = 1 / prep.lambda;
  while (beta < 1) {
    grid.push_back(beta);
    beta *= 1 + psi;
  }
  grid.emplace_back(1);
  std::size_t lo = 0;
  std::size_t hi = grid.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi + 1) / 2;
    if (ProbeType(prep.instance, grid[mid], out.eps, oracle, options,
                  out.oracle_calls)) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  out.rho = grid[lo];
  return out;
}

}  // namespace matcon
