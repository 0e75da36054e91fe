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

#include "matcon/frugal.h"

#include <algorithm>
#include <string>

#include "matcon/errors.h"
#include "matcon/grades.h"
#include "matcon/parallel.h"

namespace matcon {
namespace {

constexpr std::uint64_t kChunk = 1024;

struct RankItem {
  ExtRational value;
  bool surrogate;
  int index;
  int slot;  // outcome index for surrogates, -1 for grades
};

bool Preferred(const RankItem& a, const RankItem& b) {
  if (a.value != b.value) return a.value > b.value;
  if (a.surrogate != b.surrogate) return a.surrogate;
  return a.index < b.index;
}

bool SameKey(const RankItem& a, const RankItem& b) {
  return a.value == b.value && a.surrogate == b.surrogate &&
         a.index == b.index;
}

void CheckOutcome(const OlcpmInstance& instance, int i, int k) {
  if (i < 0 || i >= instance.n()) {
    throw ValidationError("element index " + std::to_string(i) +
                          " out of range");
  }
  if (k < 0 || k >= instance.m()) {
    throw ValidationError("outcome index " + std::to_string(k) +
                          " out of range");
  }
}

}  // namespace

FrugalPolicy::FrugalPolicy(const OlcpmInstance& instance, Rational alpha,
                           std::vector<Rational> costs)
    : instance_(&instance), alpha_(std::move(alpha)), costs_(std::move(costs)) {
  RequireUnitAlpha(alpha_);
  const int n = instance.n();
  if (static_cast<int>(costs_.size()) != n) {
    throw ValidationError("cost vector has " + std::to_string(costs_.size()) +
                          " entries, expected " + std::to_string(n));
  }
  grades_.resize(n);
  surrogates_.resize(n);
  probeable_.resize(n);
  accepts_.resize(n);
  grade_rank_.resize(n);
  surrogate_rank_.resize(n);

  std::vector<RankItem> items;
  for (int i = 0; i < n; ++i) {
    const auto& dist = instance.elements[i].outcomes;
    grades_[i] = GradeAt(costs_[i], dist, alpha_);
    probeable_[i] = grades_[i] >= ExtRational(Rational(0));
    items.push_back({grades_[i], false, i, -1});
    for (std::size_t k = 0; k < dist.size(); ++k) {
      const Rational scaled = alpha_ * dist[k].value;
      surrogates_[i].push_back(MinFinite(scaled, grades_[i]));
      accepts_[i].push_back(ExtRational(scaled) >= grades_[i]);
      items.push_back({surrogates_[i].back(), true, i, static_cast<int>(k)});
    }
    surrogate_rank_[i].resize(dist.size());
  }
  std::sort(items.begin(), items.end(), Preferred);
  int rank = 0;
  for (std::size_t j = 0; j < items.size(); ++j) {
    if (j > 0 && !SameKey(items[j - 1], items[j])) ++rank;
    const auto& it = items[j];
    if (it.surrogate) {
      surrogate_rank_[it.index][it.slot] = rank;
    } else {
      grade_rank_[it.index] = rank;
    }
  }
}

template <typename Visit>
std::vector<int> FrugalPolicy::Execute(const Realization& realization,
                           Visit&& visit) const {
  enum Status : unsigned char { kUnprobed, kProbed, kAccepted, kDead };
  const int n = instance_->n();
  std::vector<Status> status(n, kUnprobed);
  std::vector<int> chosen;
  chosen.reserve(n);
  const Matroid& matroid = *instance_->matroid;
  for (;;) {
    int best = -1;
    int best_rank = 0;
    for (int i = 0; i < n; ++i) {
      if (status[i] == kAccepted || status[i] == kDead) continue;
      if (status[i] == kUnprobed && !probeable_[i]) continue;
      if (matroid.InSpan(chosen, i)) {
        status[i] = kDead;
        continue;
      }
      const int r = status[i] == kUnprobed
                        ? grade_rank_[i]
                        : surrogate_rank_[i][realization[i]];
      if (best < 0 || r < best_rank) {
        best = i;
        best_rank = r;
      }
    }
    if (best < 0) return chosen;
    if (status[best] == kUnprobed) {
      visit(best);
      if (!accepts_[best][realization[best]]) {
        status[best] = kProbed;
        continue;
      }
    }
    status[best] = kAccepted;
    chosen.insert(std::upper_bound(chosen.begin(), chosen.end(), best), best);
  }
}

FrugalTrace FrugalPolicy::Run(const Realization& realization) const {
  if (static_cast<int>(realization.size()) != instance_->n()) {
    throw ValidationError("realization length mismatch");
  }
  for (int i = 0; i < instance_->n(); ++i) {
    CheckOutcome(*instance_, i, realization[i]);
  }
  FrugalTrace trace;
  std::vector<bool> probed(instance_->n(), false);
  trace.returned = Execute(realization, [&](int i) {
    trace.probe_order.push_back(i);
    probed[i] = true;
  });
  for (int i = 0; i < instance_->n(); ++i) {
    if (!probed[i]) continue;
    trace.probed.push_back(i);
    trace.probing_cost += instance_->elements[i].cost;
    trace.policy_cost += costs_[i];
  }
  for (int i : trace.returned) {
    trace.principal_reward +=
        instance_->elements[i].outcomes[realization[i]].value;
  }
  trace.agent_payment = alpha_ * trace.principal_reward;
  return trace;
}

std::vector<int> FrugalPolicy::Returned(const Realization& realization) const {
  return Execute(realization, [](int) {});
}

FrugalTrace RunFrugal(const OlcpmInstance& instance, const Rational& alpha,
                      const Realization& realization,
                      const std::vector<Rational>& costs) {
  return FrugalPolicy(instance, alpha, costs).Run(realization);
}

FrugalPolicy PerturbedPolicy(const OlcpmInstance& instance,
                             const Rational& alpha) {
  const Rational eps = PerturbationEpsilon(instance, alpha);
  return FrugalPolicy(instance, alpha, PerturbedCosts(instance, eps));
}

UtilityReport ExactUtilities(const OlcpmInstance& instance,
                             const Rational& alpha,
                             const ExactOptions& options) {
  RequireValid(instance);
  RequireUnitAlpha(alpha);
  const int n = instance.n();
  const int m = instance.m();
  const Rational eps = PerturbationEpsilon(instance, alpha);
  const FrugalPolicy policy(instance, alpha, PerturbedCosts(instance, eps));
  const std::uint64_t total = RealizationEnumerator(instance, options.cap).count();

  struct Partial {
    Rational reward, cost, policy_cost;
    std::vector<std::vector<Rational>> joint;
  };
  const std::uint64_t chunks = (total + kChunk - 1) / kChunk;
  std::vector<Partial> partials(chunks);
  ParallelFor(chunks, options.workers, [&](std::uint64_t c) {
    Partial& part = partials[c];
    part.joint.assign(n, std::vector<Rational>(m));
    RealizationEnumerator it(instance, options.cap);
    it.Seek(c * kChunk);
    const std::uint64_t end = std::min(total, (c + 1) * kChunk);
    for (std::uint64_t idx = c * kChunk; idx < end; ++idx) {
      const Rational& prob = it.probability();
      if (prob != 0) {
        const FrugalTrace trace = policy.Run(it.realization());
        part.reward += prob * trace.principal_reward;
        part.cost += prob * trace.probing_cost;
        part.policy_cost += prob * trace.policy_cost;
        for (int i : trace.returned) part.joint[i][it.realization()[i]] += prob;
      }
      it.Next();
    }
  });

  UtilityReport report;
  report.alpha = alpha;
  report.epsilon = eps;
  report.acceptance.assign(n, std::vector<Rational>(m));
  std::vector<std::vector<Rational>> joint(n, std::vector<Rational>(m));
  for (const auto& part : partials) {
    report.expected_reward += part.reward;
    report.expected_cost += part.cost;
    report.expected_cost_perturbed += part.policy_cost;
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < m; ++k) joint[i][k] += part.joint[i][k];
    }
  }
  report.u_principal = (1 - alpha) * report.expected_reward;
  report.u_agent = alpha * report.expected_reward - report.expected_cost;
  report.u_agent_perturbed =
      alpha * report.expected_reward - report.expected_cost_perturbed;
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < m; ++k) {
      const Rational& p = instance.elements[i].outcomes[k].prob;
      report.acceptance[i][k] =
          p != 0 ? Rational(joint[i][k] / p)
                 : AcceptanceProbExact(instance, alpha, i, k, options.cap);
    }
  }
  return report;
}

Rational AcceptanceProbExact(const OlcpmInstance& instance,
                             const Rational& alpha, int i, int k,
                             std::uint64_t cap) {
  RequireValid(instance);
  CheckOutcome(instance, i, k);
  const FrugalPolicy policy = PerturbedPolicy(instance, alpha);
  RealizationEnumerator it(instance, cap, std::make_pair(i, k));
  Rational total = 0;
  do {
    if (it.probability() == 0) continue;
    const auto returned = policy.Returned(it.realization());
    if (std::binary_search(returned.begin(), returned.end(), i)) {
      total += it.probability();
    }
  } while (it.Next());
  return total;
}

}  // namespace matcon
