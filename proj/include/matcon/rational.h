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

#ifndef MATCON_RATIONAL_H_
#define MATCON_RATIONAL_H_

#include <gmpxx.h>

#include <compare>
#include <string>
#include <string_view>

namespace matcon {

// Exact rational scalar. mpq_class values are kept canonical (reduced,
// positive denominator) by every constructor in this library.
using Rational = mpq_class;
using BigInt = mpz_class;

// Parses "num", "-num" or "num/den" (den > 0). Throws ValidationError.
Rational ParseRational(std::string_view text);

// Reduced "num/den", or "num" for integers.
std::string ToString(const Rational& value);

Rational Pow(const Rational& base, unsigned long exponent);

// Smallest integer >= value.
BigInt Ceil(const Rational& value);

double ToDouble(const Rational& value);

// A rational or +infinity. Grades of zero-cost elements are +infinity.
class ExtRational {
 public:
  ExtRational() = default;
  ExtRational(Rational value) : value_(std::move(value)) {}  // NOLINT
  static ExtRational Infinity() {
    ExtRational r;
    r.infinite_ = true;
    return r;
  }

  bool is_infinite() const { return infinite_; }
  bool is_finite() const { return !infinite_; }
  // Requires is_finite().
  const Rational& value() const { return value_; }

  friend std::strong_ordering operator<=>(const ExtRational& a,
                                          const ExtRational& b);
  friend bool operator==(const ExtRational& a, const ExtRational& b) {
    return (a <=> b) == 0;
  }

 private:
  Rational value_{0};
  bool infinite_ = false;
};

// min(a, b) where b may be infinite.
inline Rational MinFinite(const Rational& a, const ExtRational& b) {
  if (b.is_infinite() || a <= b.value()) return a;
  return b.value();
}

std::string ToString(const ExtRational& value);

}  // namespace matcon

#endif  // MATCON_RATIONAL_H_
