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

#ifndef MATCON_MODEL_H_
#define MATCON_MODEL_H_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "matcon/matroid.h"
#include "matcon/rational.h"

namespace matcon {

inline constexpr std::uint64_t kDefaultEnumerationCap = 2'000'000;

// One support point of an element's value distribution.
struct Outcome {
  Rational value;
  Rational prob;
};

// Outcome list, padded to the instance-wide length m with zero-probability
// entries. Values need not be distinct.
using OutcomeDistribution = std::vector<Outcome>;

struct OlcpmElement {
  Rational cost;
  OutcomeDistribution outcomes;
};

// Linear-contract instance: a matroid whose elements carry a probing cost
// and an independent discrete value distribution.
struct OlcpmInstance {
  MatroidPtr matroid;
  std::vector<OlcpmElement> elements;

  int n() const { return static_cast<int>(elements.size()); }
  // Common outcome count (after PadOutcomes).
  int m() const;
};

// Unreliability instance: probability that `special` is not spanned by the
// random set of elements that exist, each i != special independently with
// probability probs[i]. probs[special] is ignored.
struct UpmInstance {
  MatroidPtr matroid;
  int special = 0;
  std::vector<Rational> probs;

  int n() const { return matroid ? matroid->size() : 0; }
};

// Pads every distribution to the longest one by repeating its last value
// with probability zero. Repeating a value adds no new critical value.
void PadOutcomes(OlcpmInstance& instance);

// Human-readable invariant violations; empty means valid.
std::vector<std::string> Validate(const OlcpmInstance& instance);
std::vector<std::string> Validate(const UpmInstance& instance);

// Throws ValidationError listing all violations.
void RequireValid(const OlcpmInstance& instance);
void RequireValid(const UpmInstance& instance);

// Throws ValidationError unless 0 <= alpha <= 1.
void RequireUnitAlpha(const Rational& alpha);

// Outcome index per element.
using Realization = std::vector<int>;

// base^exponent, throwing CapExceededError when it exceeds cap.
std::uint64_t CheckedPower(std::uint64_t base, std::uint64_t exponent,
                           std::uint64_t cap, const std::string& what);

// Enumerates every outcome-index tuple exactly once, in mixed-radix order
// (element 0 varies fastest), together with its product probability.
//
//   RealizationEnumerator it(instance);
//   do { use(it.realization(), it.probability()); } while (it.Next());
//
// An element can be pinned to one outcome; it then contributes factor 1
// and the enumeration has m^(n-1) entries.
class RealizationEnumerator {
 public:
  explicit RealizationEnumerator(
      const OlcpmInstance& instance,
      std::uint64_t cap = kDefaultEnumerationCap,
      std::optional<std::pair<int, int>> pinned = std::nullopt);

  std::uint64_t count() const { return count_; }
  // Jumps to the index-th tuple of the enumeration.
  void Seek(std::uint64_t index);
  // Advances; returns false past the last tuple.
  bool Next();

  const Realization& realization() const { return current_; }
  const Rational& probability() const { return probability_; }

 private:
  void Recompute();

  const OlcpmInstance* instance_;
  std::optional<std::pair<int, int>> pinned_;
  std::vector<int> free_;  // non-pinned elements, enumeration digits
  std::uint64_t count_ = 1;
  std::uint64_t index_ = 0;
  Realization current_;
  Rational probability_;
};

}  // namespace matcon

#endif  // MATCON_MODEL_H_
