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

#include "matcon/model.h"

#include <algorithm>
#include <limits>

#include "matcon/errors.h"

namespace matcon {

int OlcpmInstance::m() const {
  std::size_t m = 0;
  for (const auto& e : elements) m = std::max(m, e.outcomes.size());
  return static_cast<int>(m);
}

void PadOutcomes(OlcpmInstance& instance) {
  const std::size_t m = instance.m();
  for (auto& e : instance.elements) {
    if (e.outcomes.empty()) continue;  // reported by Validate
    const Rational last = e.outcomes.back().value;
    while (e.outcomes.size() < m) e.outcomes.push_back({last, Rational(0)});
  }
}

std::vector<std::string> Validate(const OlcpmInstance& instance) {
  std::vector<std::string> out;
  if (!instance.matroid) {
    out.push_back("matroid: missing");
    return out;
  }
  if (instance.n() != instance.matroid->size()) {
    out.push_back("elements: " + std::to_string(instance.n()) +
                  " records for a ground set of " +
                  std::to_string(instance.matroid->size()));
  }
  if (instance.n() == 0) out.push_back("elements: ground set is empty");
  const std::size_t m = instance.m();
  for (int i = 0; i < instance.n(); ++i) {
    const auto& e = instance.elements[i];
    const std::string tag = "element " + std::to_string(i) + ": ";
    if (e.cost < 0) out.push_back(tag + "negative cost " + ToString(e.cost));
    if (e.outcomes.empty()) {
      out.push_back(tag + "no outcomes");
      continue;
    }
    if (e.outcomes.size() != m) {
      out.push_back(tag + "outcome list not padded to m = " +
                    std::to_string(m));
    }
    Rational total = 0;
    for (std::size_t k = 0; k < e.outcomes.size(); ++k) {
      const auto& o = e.outcomes[k];
      if (o.value < 0) {
        out.push_back(tag + "outcome " + std::to_string(k) +
                      " has negative value " + ToString(o.value));
      }
      if (o.prob < 0) {
        out.push_back(tag + "outcome " + std::to_string(k) +
                      " has negative probability " + ToString(o.prob));
      }
      total += o.prob;
    }
    if (total != 1) {
      out.push_back(tag + "probabilities sum " + ToString(total) + " ≠ 1");
    }
  }
  return out;
}

std::vector<std::string> Validate(const UpmInstance& instance) {
  std::vector<std::string> out;
  if (!instance.matroid) {
    out.push_back("matroid: missing");
    return out;
  }
  const int n = instance.n();
  if (n == 0) out.push_back("matroid: ground set is empty");
  if (instance.special < 0 || instance.special >= n) {
    out.push_back("special: element " + std::to_string(instance.special) +
                  " out of range");
  }
  if (static_cast<int>(instance.probs.size()) != n) {
    out.push_back("probs: " + std::to_string(instance.probs.size()) +
                  " entries for a ground set of " + std::to_string(n));
    return out;
  }
  for (int i = 0; i < n; ++i) {
    if (i == instance.special) continue;
    if (instance.probs[i] < 0 || instance.probs[i] > 1) {
      out.push_back("element " + std::to_string(i) +
                    ": probability out of [0,1]");
    }
  }
  return out;
}

namespace {

void ThrowIfAny(const std::vector<std::string>& violations) {
  if (violations.empty()) return;
  std::string msg = "invalid instance:";
  for (const auto& v : violations) msg += "\n  " + v;
  throw ValidationError(msg);
}

}  // namespace

void RequireValid(const OlcpmInstance& instance) {
  ThrowIfAny(Validate(instance));
}

void RequireValid(const UpmInstance& instance) {
  ThrowIfAny(Validate(instance));
}

void RequireUnitAlpha(const Rational& alpha) {
  if (alpha < 0 || alpha > 1) {
    throw ValidationError("alpha " + ToString(alpha) + " outside [0,1]");
  }
}

std::uint64_t CheckedPower(std::uint64_t base, std::uint64_t exponent,
                           std::uint64_t cap, const std::string& what) {
  std::uint64_t result = 1;
  for (std::uint64_t i = 0; i < exponent; ++i) {
    if (base != 0 && result > cap / base) {
      throw CapExceededError("enumeration infeasible: " + what + " = " +
                             std::to_string(base) + "^" +
                             std::to_string(exponent) + " exceeds cap " +
                             std::to_string(cap));
    }
    result *= base;
  }
  if (result > cap) {
    throw CapExceededError("enumeration infeasible: " + what + " = " +
                           std::to_string(result) + " exceeds cap " +
                           std::to_string(cap));
  }
  return result;
}

RealizationEnumerator::RealizationEnumerator(
    const OlcpmInstance& instance, std::uint64_t cap,
    std::optional<std::pair<int, int>> pinned)
    : instance_(&instance), pinned_(pinned), current_(instance.n(), 0) {
  const int n = instance.n();
  const int m = instance.m();
  for (int i = 0; i < n; ++i) {
    if (pinned_ && pinned_->first == i) {
      current_[i] = pinned_->second;
    } else {
      free_.push_back(i);
    }
  }
  count_ = CheckedPower(m, free_.size(), cap,
                        pinned_ ? std::string("m^(n-1)") : std::string("m^n"));
  Recompute();
}

void RealizationEnumerator::Seek(std::uint64_t index) {
  index_ = index;
  const std::uint64_t m = instance_->m();
  for (int i : free_) {
    current_[i] = static_cast<int>(index % m);
    index /= m;
  }
  Recompute();
}

bool RealizationEnumerator::Next() {
  if (++index_ >= count_) return false;
  const int m = instance_->m();
  for (int i : free_) {
    if (++current_[i] < m) break;
    current_[i] = 0;
  }
  Recompute();
  return true;
}

void RealizationEnumerator::Recompute() {
  probability_ = 1;
  for (int i : free_) {
    probability_ *= instance_->elements[i].outcomes[current_[i]].prob;
    if (probability_ == 0) return;
  }
}

}  // namespace matcon
