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

#include "matcon/sampler.h"

#include <algorithm>
#include <limits>
#include <string>

#include "matcon/errors.h"
#include "matcon/parallel.h"

namespace matcon {
namespace {

// Replications per task. Fixed so that floating-point partial sums, reduced
// in task order, do not depend on the worker count.
constexpr std::uint64_t kChunk = 4096;

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::vector<std::vector<double>> Cumulative(const OlcpmInstance& instance) {
  std::vector<std::vector<double>> out;
  for (const auto& e : instance.elements) {
    std::vector<double> cum;
    double acc = 0;
    for (const auto& o : e.outcomes) {
      acc += ToDouble(o.prob);
      cum.push_back(acc);
    }
    out.push_back(std::move(cum));
  }
  return out;
}

int PickOutcome(const OutcomeDistribution& dist, const std::vector<double>& cum,
                double u) {
  int last = 0;
  for (std::size_t k = 0; k < dist.size(); ++k) {
    if (dist[k].prob == 0) continue;
    last = static_cast<int>(k);
    if (u < cum[k]) return last;
  }
  return last;
}

void Draw(const OlcpmInstance& instance,
          const std::vector<std::vector<double>>& cum, std::uint64_t seed,
          std::uint64_t replication, Realization& out) {
  for (int i = 0; i < instance.n(); ++i) {
    out[i] = PickOutcome(instance.elements[i].outcomes, cum[i],
                         CounterUniform(seed, replication, i));
  }
}

struct ChunkResult {
  std::vector<std::vector<std::uint64_t>> counts;
  double reward = 0;
  double cost = 0;
};

SampledUtilities RunSampling(const OlcpmInstance& instance,
                             const Rational& alpha, const SampleConfig& config,
                             bool with_frugal) {
  RequireValid(instance);
  RequireUnitAlpha(alpha);
  const int n = instance.n();
  const int m = instance.m();
  const std::uint64_t t = ResolveReplications(config, n, m);
  const FrugalPolicy policy = PerturbedPolicy(instance, alpha);
  const AcceptanceKernel kernel(policy);
  const auto cum = Cumulative(instance);

  const std::uint64_t chunks = (t + kChunk - 1) / kChunk;
  std::vector<ChunkResult> results(chunks);
  ParallelFor(chunks, config.workers, [&](std::uint64_t c) {
    ChunkResult& res = results[c];
    res.counts.assign(n, std::vector<std::uint64_t>(m, 0));
    SpanCache cache(n);
    Realization realization(n, 0);
    const std::uint64_t end = std::min(t, (c + 1) * kChunk);
    for (std::uint64_t r = c * kChunk; r < end; ++r) {
      Draw(instance, cum, config.seed, r, realization);
      kernel.Evaluate(realization, cache,
                      [&](int i, int k) { ++res.counts[i][k]; });
      if (with_frugal) {
        const FrugalTrace trace = policy.Run(realization);
        res.reward += ToDouble(trace.principal_reward);
        res.cost += ToDouble(trace.probing_cost);
      }
    }
  });

  SampledUtilities out;
  AcceptanceEstimate& est = out.estimate;
  est.replications = t;
  est.seed = config.seed;
  est.counts.assign(n, std::vector<std::uint64_t>(m, 0));
  double reward = 0;
  double cost = 0;
  for (const auto& res : results) {
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < m; ++k) est.counts[i][k] += res.counts[i][k];
    }
    reward += res.reward;
    cost += res.cost;
  }
  est.rho.assign(n, std::vector<double>(m, 0.0));
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < m; ++k) {
      est.rho[i][k] =
          static_cast<double>(est.counts[i][k]) / static_cast<double>(t);
    }
  }
  out.u_principal = UtilityFromAcceptance(instance, alpha, est.rho);
  if (with_frugal) {
    const double td = static_cast<double>(t);
    out.expected_cost = cost / td;
    out.u_agent = ToDouble(alpha) * reward / td - out.expected_cost;
  }
  return out;
}

}  // namespace

BigInt CertifiedReplications(int n, int m, const Rational& mu) {
  if (mu <= 0) throw ValidationError("mu must be positive");
  const BigInt nm = BigInt(n) * m;
  const Rational numerator = Rational(80 * nm * nm * nm);
  return Ceil(numerator / Pow(mu, 4));
}

std::uint64_t ResolveReplications(const SampleConfig& config, int n, int m) {
  if (config.replications) {
    if (*config.replications == 0) {
      throw ValidationError("replications must be at least 1");
    }
    return *config.replications;
  }
  if (!config.mu) {
    throw ValidationError("either a replication count or mu is required");
  }
  const BigInt budget = CertifiedReplications(n, m, *config.mu);
  const bool fits = budget <= BigInt(std::to_string(
                                  std::numeric_limits<std::uint64_t>::max()));
  if (!fits || (!config.allow_large && budget > BigInt(std::to_string(
                                                   config.cap)))) {
    throw CapExceededError("replication budget " + budget.get_str() +
                           " exceeds cap " + std::to_string(config.cap));
  }
  return std::stoull(budget.get_str());
}

double CounterUniform(std::uint64_t seed, std::uint64_t replication,
                      std::uint64_t element) {
  std::uint64_t x = SplitMix64(seed);
  x = SplitMix64(x ^ replication);
  x = SplitMix64(x ^ (element * 0xD6E8FEB86659FD93ULL));
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

Realization DrawRealization(const OlcpmInstance& instance, std::uint64_t seed,
                            std::uint64_t replication) {
  Realization out(instance.n(), 0);
  Draw(instance, Cumulative(instance), seed, replication, out);
  return out;
}

SpanCache::SpanCache(int n) : n_(n) {
  if (n_ <= kMaxN) {
    memo_.assign(static_cast<std::size_t>(n_) << n_, -1);
  }
}

bool SpanCache::InSpan(const Matroid& matroid, int i, std::uint32_t mask,
                       const std::vector<int>& set) {
  if (memo_.empty()) return matroid.InSpan(set, i);
  signed char& slot = memo_[(static_cast<std::size_t>(mask) * n_) + i];
  if (slot < 0) slot = matroid.InSpan(set, i) ? 1 : 0;
  return slot == 1;
}

AcceptanceKernel::AcceptanceKernel(const FrugalPolicy& policy)
    : policy_(&policy),
      n_(policy.instance().n()),
      m_(policy.instance().m()) {
  blocks_.assign(static_cast<std::size_t>(n_) * m_ * n_ * m_, false);
  for (int i = 0; i < n_; ++i) {
    const int tau_i = policy.grade_rank(i);
    for (int k = 0; k < m_; ++k) {
      const int y_i = policy.surrogate_rank(i, k);
      for (int j = 0; j < n_; ++j) {
        if (j == i) continue;
        const int tau_j = policy.grade_rank(j);
        for (int x = 0; x < m_; ++x) {
          const int y_j = policy.surrogate_rank(j, x);
          const bool above_grade = tau_j < tau_i && y_j < tau_i;
          const bool above_surrogate = tau_j < y_i && y_j < y_i;
          blocks_[(static_cast<std::size_t>(i) * m_ + k) * n_ * m_ +
                  static_cast<std::size_t>(j) * m_ + x] =
              above_grade || above_surrogate;
        }
      }
    }
  }
}

AcceptanceEstimate SampleAcceptance(const OlcpmInstance& instance,
                                    const Rational& alpha,
                                    const SampleConfig& config) {
  return RunSampling(instance, alpha, config, false).estimate;
}

SampledUtilities SampleUtilities(const OlcpmInstance& instance,
                                 const Rational& alpha,
                                 const SampleConfig& config) {
  return RunSampling(instance, alpha, config, true);
}

std::vector<std::vector<Rational>> EnumeratedAcceptance(
    const OlcpmInstance& instance, const Rational& alpha, std::uint64_t cap) {
  RequireValid(instance);
  const int n = instance.n();
  const int m = instance.m();
  const FrugalPolicy policy = PerturbedPolicy(instance, alpha);
  const AcceptanceKernel kernel(policy);
  SpanCache cache(n);
  std::vector<std::vector<Rational>> r(n, std::vector<Rational>(m));
  RealizationEnumerator it(instance, cap);
  do {
    const Rational& prob = it.probability();
    if (prob == 0) continue;
    kernel.Evaluate(it.realization(), cache,
                    [&](int i, int k) { r[i][k] += prob; });
  } while (it.Next());
  return r;
}

double UtilityFromAcceptance(const OlcpmInstance& instance,
                             const Rational& alpha,
                             const std::vector<std::vector<double>>& rho) {
  if (static_cast<int>(rho.size()) != instance.n()) {
    throw ValidationError("acceptance matrix has wrong shape");
  }
  double total = 0;
  for (int i = 0; i < instance.n(); ++i) {
    const auto& dist = instance.elements[i].outcomes;
    if (rho[i].size() != dist.size()) {
      throw ValidationError("acceptance matrix has wrong shape");
    }
    for (std::size_t k = 0; k < dist.size(); ++k) {
      total += ToDouble(dist[k].value) * ToDouble(dist[k].prob) * rho[i][k];
    }
  }
  return ToDouble(1 - alpha) * total;
}

}  // namespace matcon
