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

#ifndef MATCON_SOLVER_H_
#define MATCON_SOLVER_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "matcon/frugal.h"
#include "matcon/model.h"
#include "matcon/rational.h"
#include "matcon/sampler.h"

namespace matcon {

struct Candidate {
  Rational alpha;
  double utility = 0;
  std::optional<Rational> exact_utility;
};

struct ContractSolution {
  Rational alpha_star;
  double utility = 0;
  std::optional<Rational> exact_utility;  // set by the exact method
  std::string method;
  std::vector<Candidate> candidates;  // sorted by alpha
  // Sampled methods: the proof's mu and its certified replication budget,
  // next to the replication count actually used.
  std::optional<Rational> mu;
  std::optional<BigInt> certified_replications;
  std::uint64_t replications = 0;
};

// U_P at every critical value; the argmax, ties toward the smallest alpha.
ContractSolution SolveExact(const OlcpmInstance& instance,
                            const ExactOptions& options = {});

// Largest max_k v_{i,k} p_{i,k} / max_k v_{j,k} p_{j,k} over pairs with a
// nonzero denominator; 0 when no such pair exists.
Rational BalanceRatio(const OlcpmInstance& instance);

// mu = (eps / (2 omega)) / (160 m^4 n^4).
Rational BalancedMu(int n, int m, const Rational& eps, const Rational& omega);

// Throws InfeasibleError when BalanceRatio exceeds omega. When the config
// names neither t nor mu, the certified budget for the proof's mu is used.
ContractSolution SolveFprasBalanced(const OlcpmInstance& instance,
                                    const Rational& eps, const Rational& omega,
                                    const SampleConfig& config);

inline constexpr int kDefaultMaxDistinctValues = 16;

// Checks that every element has at most one distinct nonzero value of
// positive probability; throws InfeasibleError otherwise. Returns T, the
// number of distinct outcome values in the instance.
int BoundedSupportValueCount(const OlcpmInstance& instance,
                             int max_values = kDefaultMaxDistinctValues);

// mu = eps / (2n)^T * 1 / (160 m^4 n^4) * 1 / (2 * 80 n^3 m^3).
Rational BoundedSupportMu(int n, int m, int distinct_values,
                          const Rational& eps);

ContractSolution SolveFprasBoundedSupport(
    const OlcpmInstance& instance, const Rational& eps,
    const SampleConfig& config,
    int max_values = kDefaultMaxDistinctValues);

struct SweepRow {
  Rational alpha;
  double u_principal = 0;
  double u_agent = 0;
  double expected_cost = 0;
  // Exact mode only.
  std::optional<Rational> exact_u_principal;
  std::optional<Rational> exact_u_agent;
  std::optional<Rational> exact_expected_cost;
};

// Exact mode when `sampled` is empty, else seeded sampling with that config.
std::vector<SweepRow> Sweep(const OlcpmInstance& instance,
                            const std::vector<Rational>& alphas,
                            const std::optional<SampleConfig>& sampled,
                            const ExactOptions& options = {});

// grid + 1 evenly spaced alphas in [0, 1] merged with the critical values.
std::vector<Rational> SweepAlphas(const OlcpmInstance& instance, int grid);

}  // namespace matcon

#endif  // MATCON_SOLVER_H_
