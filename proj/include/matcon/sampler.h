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

#ifndef MATCON_SAMPLER_H_
#define MATCON_SAMPLER_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "matcon/frugal.h"
#include "matcon/model.h"
#include "matcon/rational.h"

namespace matcon {

inline constexpr std::uint64_t kDefaultReplicationCap = 100'000'000;

struct SampleConfig {
  std::uint64_t seed = 0;
  // Explicit t; when absent, t = ceil(80 m^3 n^3 / mu^4).
  std::optional<std::uint64_t> replications;
  std::optional<Rational> mu;
  std::uint64_t cap = kDefaultReplicationCap;
  bool allow_large = false;  // lifts `cap` on the defaulted budget
  int workers = 1;
};

// ceil(80 m^3 n^3 / mu^4).
BigInt CertifiedReplications(int n, int m, const Rational& mu);

// The replication count a config asks for. Throws CapExceededError when a
// defaulted budget exceeds the cap without allow_large, ValidationError
// when neither t nor mu is given.
std::uint64_t ResolveReplications(const SampleConfig& config, int n, int m);

// Uniform double in [0, 1) determined by (seed, replication, element).
double CounterUniform(std::uint64_t seed, std::uint64_t replication,
                      std::uint64_t element);

// One realization drawn for replication `replication`.
Realization DrawRealization(const OlcpmInstance& instance, std::uint64_t seed,
                            std::uint64_t replication);

// Memo of "i in span(mask)" for ground sets of at most kMaxN elements.
// Not shared between threads.
class SpanCache {
 public:
  static constexpr int kMaxN = 16;
  explicit SpanCache(int n);

  // Returns the cached answer or computes it with the matroid.
  bool InSpan(const Matroid& matroid, int i, std::uint32_t mask,
              const std::vector<int>& set);

 private:
  int n_;
  std::vector<signed char> memo_;
};

// Spanning test behind the sampling algorithm: i is returned with X_i = v_k
// iff tau_i >= 0 and i is outside the span of
//   {j != i : tau_j ≻ tau_i and Y_j ≻ tau_i}
//   ∪ {j != i : tau_j ≻ Y'_i and Y_j ≻ Y'_i},   Y'_i = min(alpha v_k, tau_i).
// Only the outcomes of j != i enter, so one realization scores every (i, k).
class AcceptanceKernel {
 public:
  explicit AcceptanceKernel(const FrugalPolicy& policy);

  // Calls hit(i, k) for every (i, k) accepted against `realization`.
  template <typename Hit>
  void Evaluate(const Realization& realization, SpanCache& cache,
                Hit&& hit) const;

  bool Blocks(int i, int k, int j, int x) const {
    return blocks_[(static_cast<std::size_t>(i) * m_ + k) * n_ * m_ +
                   static_cast<std::size_t>(j) * m_ + x];
  }

 private:
  const FrugalPolicy* policy_;
  int n_;
  int m_;
  std::vector<bool> blocks_;
};

struct AcceptanceEstimate {
  std::vector<std::vector<double>> rho;
  std::vector<std::vector<std::uint64_t>> counts;
  std::uint64_t replications = 0;
  std::uint64_t seed = 0;
};

struct SampledUtilities {
  AcceptanceEstimate estimate;
  double u_principal = 0;  // from rho
  double u_agent = 0;      // from FRUGAL on the same draws, true costs
  double expected_cost = 0;
};

// Perturbed-cost policy at alpha; rho from the spanning test.
AcceptanceEstimate SampleAcceptance(const OlcpmInstance& instance,
                                    const Rational& alpha,
                                    const SampleConfig& config);

SampledUtilities SampleUtilities(const OlcpmInstance& instance,
                                 const Rational& alpha,
                                 const SampleConfig& config);

// The sampling kernel with every realization weighted by its probability.
std::vector<std::vector<Rational>> EnumeratedAcceptance(
    const OlcpmInstance& instance, const Rational& alpha,
    std::uint64_t cap = kDefaultEnumerationCap);

// (1 - alpha) sum_{i,k} v_{i,k} p_{i,k} rho_{i,k} in binary floating point.
double UtilityFromAcceptance(const OlcpmInstance& instance,
                             const Rational& alpha,
                             const std::vector<std::vector<double>>& rho);

template <typename Hit>
void AcceptanceKernel::Evaluate(const Realization& realization,
                                SpanCache& cache, Hit&& hit) const {
  const Matroid& matroid = *policy_->instance().matroid;
  std::vector<int> set;
  set.reserve(n_);
  for (int i = 0; i < n_; ++i) {
    if (!policy_->probeable(i)) continue;
    for (int k = 0; k < m_; ++k) {
      set.clear();
      std::uint32_t mask = 0;
      for (int j = 0; j < n_; ++j) {
        if (j != i && Blocks(i, k, j, realization[j])) {
          set.push_back(j);
          if (j < SpanCache::kMaxN) mask |= std::uint32_t{1} << j;
        }
      }
      if (!cache.InSpan(matroid, i, mask, set)) hit(i, k);
    }
  }
}

}  // namespace matcon

#endif  // MATCON_SAMPLER_H_
