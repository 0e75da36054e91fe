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

#ifndef MATCON_UPM_H_
#define MATCON_UPM_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "matcon/model.h"
#include "matcon/rational.h"
#include "matcon/sampler.h"
#include "matcon/solver.h"

namespace matcon {

// Sum over subsets T of the other elements with e outside span(T) of the
// probability that exactly T exists. Needs 2^(n-1) <= cap.
Rational UpmExact(const UpmInstance& instance,
                  std::uint64_t cap = kDefaultEnumerationCap);

// Uniform matroids only: coefficients of prod((1 - p) + p x) below the rank.
Rational UpmUniformPoly(const UpmInstance& instance);

// Fraction of seeded draws in which e is not spanned.
double UpmMonteCarlo(const UpmInstance& instance, const SampleConfig& config);

struct OlcpmToUpmResult {
  std::optional<UpmInstance> instance;  // absent when tau_i < 0
  Rational acceptance;
};

// Builds the UPM instance whose answer is r_{i,k} at alpha: element j exists
// with the probability that it lands in i's blocking set.
OlcpmToUpmResult OlcpmToUpm(const OlcpmInstance& instance,
                            const Rational& alpha, int i, int k,
                            std::uint64_t cap = kDefaultEnumerationCap);

inline constexpr int kDefaultCleanupMaxElements = 4096;

// Lowers p = 1 to 1 - eps / n, then replaces every element with p > delta by
// parallel copies (delta, ..., delta, rest) whose union exists with the same
// probability. Copies of one element are consecutive. Throws
// CapExceededError when the result would exceed max_elements.
UpmInstance UpmCleanup(const UpmInstance& instance, const Rational& delta,
                       const Rational& eps,
                       int max_elements = kDefaultCleanupMaxElements);

struct ReductionParams {
  Rational beta;
  Rational eps;
  Rational delta;
  Rational xi;
};

// Violated preconditions of the construction for an n-element instance.
std::vector<std::string> CheckReductionParams(const ReductionParams& params,
                                              int n);

// Largest powers of 1/2 for delta and xi meeting the preconditions.
ReductionParams ChooseReductionParams(int n, const Rational& beta,
                                      const Rational& eps);

struct Reduction {
  OlcpmInstance instance;
  // OLCPM element j plays role j + 1; it is UPM element ground_of_role[j].
  // The last role is the special element.
  std::vector<int> ground_of_role;
  ReductionParams params;
};

// The construction with (0, v) two-point distributions. Throws
// InfeasibleError on violated preconditions. require_small_probs = false
// skips the p_i <= delta requirement.
Reduction UpmToOlcpm(const UpmInstance& instance, const ReductionParams& params,
                     bool require_small_probs = true);

// Middle roles get three outcomes {0, 1/eps, 1/eps^(n-2)}; needs n >= 4.
Reduction UpmToOlcpmBoundedSupport(const UpmInstance& instance,
                                   const ReductionParams& params,
                                   bool require_small_probs = true);

// The critical values the construction is meant to produce:
// {0, 1 - eps, ..., 1 - eps^(n-2), 1 - xi, 1}.
std::vector<Rational> ReductionCriticalValues(const ReductionParams& params,
                                              int n);

using OlcpmOracle = std::function<ContractSolution(const OlcpmInstance&)>;

// SolveExact with default options.
OlcpmOracle ExactOracle();

struct DriverOptions {
  // Run cleanup until every p_i <= delta before each probe. The ground set
  // grows quickly; cleanup_max_elements bounds it.
  bool certified = false;
  int cleanup_max_elements = kDefaultCleanupMaxElements;
};

struct DriverResult {
  Rational rho;
  Rational lambda;   // product of the probability denominators
  Rational eps;
  int oracle_calls = 0;
  bool zero_check = false;  // answered without the oracle
};

// Exact answer via binary search over beta in {z / lambda}.
DriverResult UpmViaOlcpm(const UpmInstance& instance,
                         const OlcpmOracle& oracle,
                         const DriverOptions& options = {});

// Binary search over the grid (1 + psi)^z / lambda, capped at 1.
DriverResult UpmViaOlcpmApprox(const UpmInstance& instance,
                               const Rational& psi, const OlcpmOracle& oracle,
                               const DriverOptions& options = {});

}  // namespace matcon

#endif  // MATCON_UPM_H_
