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

#include "matcon/grades.h"

#include <gtest/gtest.h>

#include "matcon/errors.h"
#include "matcon/frugal.h"
#include "test_util.h"

namespace matcon {
namespace {

using testing::Rng;

const OutcomeDistribution kCoin10 = {{Rational(10), Rational(1, 2)},
                                     {Rational(0), Rational(1, 2)}};

// sum_k p_k (alpha v_k - tau)^+.
Rational ExpectedExcess(const OutcomeDistribution& dist, const Rational& alpha,
                        const Rational& tau) {
  Rational total = 0;
  for (const auto& o : dist) {
    const Rational gap = alpha * o.value - tau;
    if (gap > 0) total += o.prob * gap;
  }
  return total;
}

// Bisection on the decreasing excess function, 200 halvings.
Rational BisectGrade(const Rational& cost, const OutcomeDistribution& dist,
                     const Rational& alpha) {
  Rational lo = -cost - 1;
  Rational hi = 1000;
  for (int step = 0; step < 200; ++step) {
    const Rational mid = (lo + hi) / 2;
    (ExpectedExcess(dist, alpha, mid) > cost ? lo : hi) = mid;
  }
  return lo;
}

TEST(GradeTest, SpecExamples) {
  EXPECT_EQ(GradeAt(Rational(1), kCoin10, Rational(1)), ExtRational(Rational(8)));
  EXPECT_TRUE(GradeAt(Rational(0), kCoin10, Rational(1, 3)).is_infinite());
  EXPECT_EQ(GradeAt(Rational(1), kCoin10, Rational(1, 10)),
            ExtRational(Rational(-1, 2)));
}

TEST(GradeTest, AgreesWithBisection) {
  for (const Rational alpha : {Rational(1), Rational(1, 10), Rational(3, 7)}) {
    const Rational exact = GradeAt(Rational(1), kCoin10, alpha).value();
    const Rational approx = BisectGrade(Rational(1), kCoin10, alpha);
    EXPECT_LT(abs(exact - approx), Rational(1, 1000000));
  }
}

TEST(GradeTest, InvalidDistributionRejected) {
  const OutcomeDistribution bad = {{Rational(1), Rational(1, 2)}};
  EXPECT_THROW(GradeAt(Rational(1), bad, Rational(1)), ValidationError);
  EXPECT_THROW(GradeAt(Rational(-1), kCoin10, Rational(1)), ValidationError);
}

TEST(GradeCurveTest, TwoSegments) {
  const GradeCurve c = BuildGradeCurve(Rational(1), kCoin10);
  ASSERT_EQ(c.segment_count(), 2);
  EXPECT_EQ(c.breakpoints(),
            (std::vector<Rational>{Rational(0), Rational(1, 5), Rational(1)}));
  EXPECT_EQ(c.pieces()[0].slope, 5);
  EXPECT_EQ(c.pieces()[0].intercept, -1);
  EXPECT_EQ(c.pieces()[1].slope, 10);
  EXPECT_EQ(c.pieces()[1].intercept, -2);
}

TEST(GradeCurveTest, ZeroCostIsInfinite) {
  EXPECT_TRUE(BuildGradeCurve(Rational(0), kCoin10).is_infinite());
  EXPECT_TRUE(
      BuildGradeCurve(Rational(0), kCoin10)(Rational(1, 2)).is_infinite());
}

TEST(GradeCurveTest, DeterministicOutcome) {
  const GradeCurve c =
      BuildGradeCurve(Rational(100), {{Rational(1), Rational(1)}});
  ASSERT_EQ(c.segment_count(), 1);
  EXPECT_EQ(c.pieces()[0].slope, 1);
  EXPECT_EQ(c.pieces()[0].intercept, -100);
}

TEST(SurrogateTest, SpecExamples) {
  EXPECT_EQ(Surrogate(Rational(1), kCoin10, Rational(1, 2), 0), 3);
  EXPECT_EQ(Surrogate(Rational(1), kCoin10, Rational(1, 2), 1), 0);
  const OutcomeDistribution coin4 = {{Rational(4), Rational(1, 2)},
                                     {Rational(0), Rational(1, 2)}};
  EXPECT_EQ(Surrogate(Rational(0), coin4, Rational(1, 2), 0), 2);
}

TEST(GradePropertyTest, BackSubstitutionAndCurve) {
  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const OlcpmInstance inst = testing::RandomOlcpm(rng);
    for (const auto& e : inst.elements) {
      const GradeCurve curve = BuildGradeCurve(e.cost, e.outcomes);
      if (!curve.is_infinite()) {
        ASSERT_LE(curve.segment_count(), inst.m() + 1);
      }
      for (int j = 0; j < 100; ++j) {
        const Rational alpha = testing::RandomAlpha(rng);
        const ExtRational tau = GradeAt(e.cost, e.outcomes, alpha);
        ASSERT_EQ(curve(alpha), tau);
        if (e.cost == 0) {
          ASSERT_TRUE(tau.is_infinite());
          continue;
        }
        ASSERT_EQ(ExpectedExcess(e.outcomes, alpha, tau.value()), e.cost);
      }
    }
  }
}

TEST(GradePropertyTest, NondecreasingInAlpha) {
  Rng rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const OlcpmInstance inst = testing::RandomOlcpm(rng);
    Rational a = testing::RandomAlpha(rng);
    Rational b = testing::RandomAlpha(rng);
    if (b < a) std::swap(a, b);
    for (const auto& e : inst.elements) {
      ASSERT_LE(GradeAt(e.cost, e.outcomes, a), GradeAt(e.cost, e.outcomes, b));
    }
  }
}

TEST(PerturbationTest, SpecExamples) {
  OlcpmInstance free = testing::InstanceW();
  free.elements[0].cost = 0;
  EXPECT_EQ(PerturbationEpsilon(free, Rational(1, 2)), Rational(1, 2));
  const OlcpmInstance single = testing::SingleElement(Rational(1), kCoin10);
  EXPECT_EQ(PerturbationEpsilon(single, Rational(1, 2)), Rational(1, 2));
}

TEST(PerturbationTest, DeterministicOutcomesStayBelowOne) {
  const OlcpmInstance inst =
      testing::SingleElement(Rational(1), {{Rational(4), Rational(1)}});
  const Rational eps = PerturbationEpsilon(inst, Rational(1, 2));
  EXPECT_GT(eps, 0);
  EXPECT_LT(eps, 1);
}

Rational MinPositive(const OlcpmInstance& inst) {
  Rational best = 1;
  for (const auto& e : inst.elements) best = std::min(best, MinPositiveProb(e.outcomes));
  return best;
}

int Sign(const ExtRational& a, const ExtRational& b) {
  return a < b ? -1 : (b < a ? 1 : 0);
}

TEST(PerturbationTest, BracketAndSignPreservation) {
  const auto pool = testing::InstancePool(60, 31);
  Rng rng(13);
  for (const auto& inst : pool) {
    std::vector<Rational> alphas = CriticalValues(inst);
    for (int j = 0; j < 5; ++j) alphas.push_back(testing::RandomAlpha(rng));
    for (const auto& alpha : alphas) {
      const Rational eps = PerturbationEpsilon(inst, alpha);
      ASSERT_GT(eps, 0);
      ASSERT_LE(eps, MinPositive(inst));
      const auto costs = PerturbedCosts(inst, eps);
      const int n = inst.n();
      std::vector<ExtRational> tau(n), tau2(n);
      for (int i = 0; i < n; ++i) {
        const auto& e = inst.elements[i];
        tau[i] = GradeAt(e.cost, e.outcomes, alpha);
        tau2[i] = GradeAt(costs[i], e.outcomes, alpha);
        if (tau[i].is_infinite()) continue;
        const Rational bound =
            tau[i].value() + eps * e.cost / MinPositiveProb(e.outcomes);
        ASSERT_LE(tau[i], tau2[i]);
        ASSERT_LE(tau2[i], ExtRational(bound));
      }
      RealizationEnumerator it(inst);
      do {
        std::vector<ExtRational> y(n), y2(n);
        for (int i = 0; i < n; ++i) {
          const Rational x =
              alpha * inst.elements[i].outcomes[it.realization()[i]].value;
          y[i] = MinFinite(x, tau[i]);
          y2[i] = MinFinite(x, tau2[i]);
        }
        for (int i = 0; i < n; ++i) {
          for (int j = 0; j < n; ++j) {
            const int before_tt = Sign(tau[i], tau[j]);
            if (before_tt != 0) ASSERT_EQ(before_tt, Sign(tau2[i], tau2[j]));
            const int before_yt = Sign(y[i], tau[j]);
            if (before_yt != 0) ASSERT_EQ(before_yt, Sign(y2[i], tau2[j]));
          }
        }
      } while (it.Next());
    }
  }
}

TEST(CriticalValuesTest, SpecExamples) {
  EXPECT_EQ(CriticalValues(testing::SingleElement(Rational(1), kCoin10)),
            (std::vector<Rational>{Rational(0), Rational(1, 5), Rational(1)}));
  EXPECT_EQ(CriticalValues(testing::InstanceW()),
            (std::vector<Rational>{Rational(0), Rational(1, 5), Rational(1, 3),
                                   Rational(1)}));
  OlcpmInstance zeros = testing::InstanceW();
  for (auto& e : zeros.elements) {
    e.cost = 0;
    for (auto& o : e.outcomes) o.value = 0;
  }
  EXPECT_EQ(CriticalValues(zeros),
            (std::vector<Rational>{Rational(0), Rational(1)}));
}

TEST(CriticalValuesTest, CountBoundAndRange) {
  const auto pool = testing::InstancePool(100, 41);
  for (const auto& inst : pool) {
    const auto values = CriticalValues(inst);
    const int n = inst.n();
    const int m = inst.m();
    EXPECT_LE(static_cast<int>(values.size()),
              2 * n * (n + 1) * (m + 1) * (m + 1) + 2);
    EXPECT_TRUE(std::is_sorted(values.begin(), values.end()));
    EXPECT_EQ(std::adjacent_find(values.begin(), values.end()), values.end());
    EXPECT_EQ(values.front(), 0);
    EXPECT_EQ(values.back(), 1);
  }
}

// The relative order of all grades and value lines does not change inside an
// interval between consecutive critical values.
TEST(CriticalValuesTest, OrderConstantBetweenCriticalValues) {
  const auto pool = testing::InstancePool(40, 43);
  for (const auto& inst : pool) {
    const auto values = CriticalValues(inst);
    for (std::size_t j = 0; j + 1 < values.size(); ++j) {
      const Rational a = values[j] + (values[j + 1] - values[j]) / 3;
      const Rational b = values[j] + 2 * (values[j + 1] - values[j]) / 3;
      std::vector<ExtRational> fa, fb;
      for (const auto& e : inst.elements) {
        fa.push_back(GradeAt(e.cost, e.outcomes, a));
        fb.push_back(GradeAt(e.cost, e.outcomes, b));
        for (const auto& o : e.outcomes) {
          fa.emplace_back(a * o.value);
          fb.emplace_back(b * o.value);
        }
      }
      for (std::size_t x = 0; x < fa.size(); ++x) {
        for (std::size_t y = 0; y < fa.size(); ++y) {
          ASSERT_EQ(Sign(fa[x], fa[y]), Sign(fb[x], fb[y]));
        }
      }
    }
  }
}

}  // namespace
}  // namespace matcon
