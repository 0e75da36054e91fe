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

#ifndef MATCON_FRUGAL_H_
#define MATCON_FRUGAL_H_

#include <cstdint>
#include <vector>

#include "matcon/model.h"
#include "matcon/rational.h"

namespace matcon {

struct FrugalTrace {
  std::vector<int> probe_order;
  std::vector<int> probed;    // sorted
  std::vector<int> returned;  // sorted
  Rational principal_reward;  // sum of X_i over returned
  Rational agent_payment;     // alpha * principal_reward
  Rational probing_cost;      // true costs over probed
  Rational policy_cost;       // the policy's own cost vector over probed
};

// The FRUGAL policy at a fixed contract and cost vector. Grades, surrogates and
// the order ≻ are precomputed; every item (a grade tau_i or a surrogate
// Y_{i,k}) gets an integer rank, lower meaning preferred: larger value first,
// a surrogate before a grade of equal value, then the smaller index.
class FrugalPolicy {
 public:
  FrugalPolicy(const OlcpmInstance& instance, Rational alpha,
               std::vector<Rational> costs);

  const OlcpmInstance& instance() const { return *instance_; }
  const Rational& alpha() const { return alpha_; }
  const std::vector<Rational>& costs() const { return costs_; }

  const ExtRational& grade(int i) const { return grades_[i]; }
  const Rational& surrogate(int i, int k) const { return surrogates_[i][k]; }
  bool probeable(int i) const { return probeable_[i]; }
  // alpha v_{i,k} >= tau_i: the probe is accepted at once.
  bool accepts(int i, int k) const { return accepts_[i][k]; }
  int grade_rank(int i) const { return grade_rank_[i]; }
  int surrogate_rank(int i, int k) const { return surrogate_rank_[i][k]; }

  FrugalTrace Run(const Realization& realization) const;
  // Returned set only, without the bookkeeping of a trace.
  std::vector<int> Returned(const Realization& realization) const;

 private:
  // Calls visit(i) on each probe; returns the sorted returned set.
  template <typename Visit>
  std::vector<int> Execute(const Realization& realization, Visit&& visit) const;

  const OlcpmInstance* instance_;
  Rational alpha_;
  std::vector<Rational> costs_;
  std::vector<ExtRational> grades_;
  std::vector<std::vector<Rational>> surrogates_;
  std::vector<bool> probeable_;
  std::vector<std::vector<bool>> accepts_;
  std::vector<int> grade_rank_;
  std::vector<std::vector<int>> surrogate_rank_;
};

FrugalTrace RunFrugal(const OlcpmInstance& instance, const Rational& alpha,
                      const Realization& realization,
                      const std::vector<Rational>& costs);

struct ExactOptions {
  std::uint64_t cap = kDefaultEnumerationCap;
  int workers = 1;
};

struct UtilityReport {
  Rational alpha;
  Rational epsilon;  // cost perturbation used by the policy
  Rational u_agent;
  Rational u_principal;
  Rational expected_cost;
  Rational expected_reward;
  // The same policy scored against the perturbed costs c (1 - eps).
  Rational u_agent_perturbed;
  Rational expected_cost_perturbed;
  // r_{i,k} = Pr[i returned | X_i = v_{i,k}].
  std::vector<std::vector<Rational>> acceptance;
};

// Perturbed-cost FRUGAL over every realization.
UtilityReport ExactUtilities(const OlcpmInstance& instance,
                             const Rational& alpha,
                             const ExactOptions& options = {});

// The policy ExactUtilities runs at alpha.
FrugalPolicy PerturbedPolicy(const OlcpmInstance& instance,
                             const Rational& alpha);

Rational AcceptanceProbExact(const OlcpmInstance& instance,
                             const Rational& alpha, int i, int k,
                             std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace matcon

#endif  // MATCON_FRUGAL_H_
