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

#include "matcon/upm.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "matcon/errors.h"
#include "matcon/frugal.h"
#include "matcon/grades.h"
#include "test_util.h"

namespace matcon {
namespace {

UpmInstance Make(MatroidPtr matroid, int special, std::vector<Rational> probs) {
  UpmInstance u;
  u.matroid = std::move(matroid);
  u.special = special;
  u.probs = std::move(probs);
  return u;
}

UpmInstance Pair(const Rational& p0) {
  return Make(std::make_shared<UniformMatroid>(2, 1), 1, {p0, Rational(0)});
}

UpmInstance Series() {
  return Make(std::make_shared<GraphicMatroid>(
                  3, std::vector<std::pair<int, int>>{{0, 1}, {1, 2}, {0, 2}}),
              2, {Rational(1, 2), Rational(1, 2), Rational(0)});
}

bool HasLoop(const Matroid& m) {
  for (int i = 0; i < m.size(); ++i) {
    if (m.InSpan({}, i)) return true;
  }
  return false;
}

SampleConfig Config(std::uint64_t seed, std::uint64_t t) {
  SampleConfig c;
  c.seed = seed;
  c.replications = t;
  return c;
}

TEST(UpmExactTest, Examples) {
  EXPECT_EQ(UpmExact(Pair(Rational(3, 10))), Rational(7, 10));
  EXPECT_EQ(UpmExact(Series()), Rational(3, 4));
  const UpmInstance u4 = Make(std::make_shared<UniformMatroid>(4, 2), 0,
                              {Rational(0), Rational(1, 2), Rational(1, 2),
                               Rational(1, 2)});
  EXPECT_EQ(UpmExact(u4), Rational(1, 2));
  EXPECT_EQ(UpmUniformPoly(u4), Rational(1, 2));
}

TEST(UpmExactTest, CapExceeded) {
  const UpmInstance big = Make(std::make_shared<UniformMatroid>(30, 2), 0,
                               std::vector<Rational>(30, Rational(1, 2)));
  EXPECT_THROW(UpmExact(big, 1000), CapExceededError);
}

TEST(UpmUniformPolyTest, MatchesEnumeration) {
  testing::Rng rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = testing::Uniform(rng, 1, 12);
    const int r = testing::Uniform(rng, 0, n);
    const UpmInstance u =
        testing::RandomUpm(rng, n, std::make_shared<UniformMatroid>(n, r));
    ASSERT_EQ(UpmUniformPoly(u), UpmExact(u)) << "n " << n << " r " << r;
  }
}

TEST(UpmUniformPolyTest, RankExtremes) {
  UpmInstance u = Make(std::make_shared<UniformMatroid>(3, 0), 0,
                       {Rational(0), Rational(1, 3), Rational(2, 3)});
  EXPECT_EQ(UpmUniformPoly(u), 0);
  u.matroid = std::make_shared<UniformMatroid>(3, 3);
  EXPECT_EQ(UpmUniformPoly(u), 1);
  EXPECT_THROW(UpmUniformPoly(Series()), ValidationError);
}

TEST(UpmMonteCarloTest, SeriesConcentration) {
  int good = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    good += std::abs(UpmMonteCarlo(Series(), Config(seed, 100000)) - 0.75) <=
            0.02;
  }
  EXPECT_GE(good, 18);
}

TEST(UpmMonteCarloTest, DegenerateProbabilities) {
  UpmInstance none = Series();
  none.probs = {Rational(0), Rational(0), Rational(0)};
  EXPECT_EQ(UpmMonteCarlo(none, Config(1, 1000)), 1.0);
  UpmInstance all = Series();
  all.probs = {Rational(1), Rational(1), Rational(0)};
  EXPECT_EQ(UpmMonteCarlo(all, Config(1, 1000)), 0.0);
}

TEST(UpmMonteCarloTest, WorkersAgree) {
  SampleConfig a = Config(7, 20000);
  SampleConfig b = a;
  b.workers = 8;
  EXPECT_EQ(UpmMonteCarlo(Series(), a), UpmMonteCarlo(Series(), b));
}

TEST(OlcpmToUpmTest, InstanceWExamples) {
  const OlcpmInstance w = testing::InstanceW();
  const Rational half(1, 2);
  auto a = OlcpmToUpm(w, half, 0, 0);
  ASSERT_TRUE(a.instance);
  EXPECT_EQ(a.instance->probs[1], 0);
  EXPECT_EQ(a.acceptance, 1);
  auto b = OlcpmToUpm(w, half, 1, 0);
  EXPECT_EQ(b.instance->probs[0], half);
  EXPECT_EQ(b.acceptance, half);
  auto c = OlcpmToUpm(w, half, 1, 1);
  EXPECT_EQ(c.instance->probs[0], 1);
  EXPECT_EQ(c.acceptance, 0);
}

TEST(OlcpmToUpmTest, NegativeGradeHasNoInstance) {
  // Grade 10 alpha - 2 is negative at alpha = 1/10.
  const OlcpmInstance inst = testing::SingleElement(
      Rational(1), {{Rational(10), Rational(1, 2)}, {Rational(0), Rational(1, 2)}});
  const auto r = OlcpmToUpm(inst, Rational(1, 10), 0, 0);
  EXPECT_FALSE(r.instance.has_value());
  EXPECT_EQ(r.acceptance, 0);
}

TEST(OlcpmToUpmTest, EqualsAcceptanceOnPool) {
  for (const auto& inst : testing::InstancePool(50)) {
    for (const Rational& alpha : CriticalValues(inst)) {
      for (int i = 0; i < inst.n(); ++i) {
        for (int k = 0; k < inst.m(); ++k) {
          ASSERT_EQ(OlcpmToUpm(inst, alpha, i, k).acceptance,
                    AcceptanceProbExact(inst, alpha, i, k))
              << ToString(alpha) << " " << i << " " << k;
        }
      }
    }
  }
}

TEST(UpmCleanupTest, SplitsThreeQuarters) {
  const UpmInstance out =
      UpmCleanup(Pair(Rational(3, 4)), Rational(1, 2), Rational(1, 4));
  EXPECT_EQ(out.n(), 3);
  EXPECT_EQ(out.probs[0], Rational(1, 2));
  EXPECT_EQ(out.probs[1], Rational(1, 2));
  EXPECT_EQ(out.probs[out.special], 0);
  EXPECT_EQ(UpmExact(out), Rational(1, 4));
}

TEST(UpmCleanupTest, SmallProbabilitiesUnchanged) {
  const UpmInstance in = Series();
  const UpmInstance out = UpmCleanup(in, Rational(1, 2), Rational(1, 4));
  EXPECT_EQ(out.n(), 3);
  EXPECT_EQ(out.probs, in.probs);
  EXPECT_EQ(UpmExact(out), UpmExact(in));
}

TEST(UpmCleanupTest, CertainElementLowered) {
  // 1 -> 1 - (1/2)/2 = 3/4, then split at 1/2.
  const UpmInstance out =
      UpmCleanup(Pair(Rational(1)), Rational(1, 2), Rational(1, 2));
  EXPECT_EQ(out.n(), 3);
  EXPECT_EQ(out.probs[0], Rational(1, 2));
  EXPECT_EQ(out.probs[1], Rational(1, 2));
  const Rational rho = UpmExact(Pair(Rational(1)));
  const Rational after = UpmExact(out);
  EXPECT_GE(after, rho);
  EXPECT_LE(after, rho + Rational(1, 2));
}

TEST(UpmCleanupTest, AnswerShiftBounded) {
  testing::Rng rng(31);
  const Rational delta(1, 2);
  const Rational eps(1, 4);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = testing::Uniform(rng, 2, 4);
    const UpmInstance in = testing::RandomUpm(
        rng, n, testing::RandomMatroidAnyFamily(rng, n), 6);
    const UpmInstance out = UpmCleanup(in, delta, eps);
    ASSERT_LE(out.n(), 4 * n);
    for (int i = 0; i < out.n(); ++i) ASSERT_LE(out.probs[i], delta);
    const Rational rho = UpmExact(in);
    const Rational after = UpmExact(out);
    ASSERT_GE(after, rho);
    ASSERT_LE(after, rho + eps);
  }
}

TEST(UpmCleanupTest, GroundSetCap) {
  EXPECT_THROW(UpmCleanup(Pair(Rational(255, 256)), Rational(1, 1024),
                          Rational(1, 4), 100),
               CapExceededError);
}

TEST(ReductionParamsTest, Choice) {
  const ReductionParams p = ChooseReductionParams(2, Rational(1, 2), Rational(1, 4));
  EXPECT_EQ(p.delta, Rational(1, 256));
  EXPECT_EQ(p.xi, Rational(1, 128));
  EXPECT_LT(p.delta * 80, Rational(1, 2));
  EXPECT_TRUE(CheckReductionParams(p, 2).empty());
  const ReductionParams q = ChooseReductionParams(2, Rational(1), Rational(1, 4));
  EXPECT_GT(q.delta, p.delta);
  for (int n = 2; n <= 6; ++n) {
    for (const Rational& beta : {Rational(1, 7), Rational(1, 2), Rational(1)}) {
      EXPECT_TRUE(
          CheckReductionParams(ChooseReductionParams(n, beta, Rational(1, 5)), n)
              .empty());
    }
  }
}

TEST(ReductionParamsTest, Violations) {
  ReductionParams p{Rational(1, 2), Rational(1, 4), Rational(1, 2),
                    Rational(1, 128)};
  const auto problems = CheckReductionParams(p, 2);
  ASSERT_EQ(problems.size(), 1u);
  EXPECT_NE(problems[0].find("delta"), std::string::npos);
  EXPECT_THROW(UpmToOlcpm(Pair(Rational(1, 256)), p), InfeasibleError);
  p.delta = Rational(1, 256);
  EXPECT_THROW(UpmToOlcpm(Pair(Rational(1, 128)), p), InfeasibleError);
}

TEST(ReductionTest, PairFixture) {
  const ReductionParams p{Rational(1, 2), Rational(1, 4), Rational(1, 256),
                          Rational(1, 128)};
  const Reduction red = UpmToOlcpm(Pair(Rational(1, 256)), p);
  const auto& e = red.instance.elements;
  ASSERT_EQ(e.size(), 2u);
  EXPECT_EQ(e[0].cost, 0);
  EXPECT_EQ(e[0].outcomes[0].value, 128);
  EXPECT_EQ(e[0].outcomes[0].prob, Rational(1, 256));
  EXPECT_EQ(e[1].cost, 127);
  EXPECT_EQ(e[1].outcomes[0].value, 128);
  EXPECT_EQ(e[1].outcomes[0].prob, 1);
  EXPECT_EQ(ExactUtilities(red.instance, Rational(0)).u_principal,
            Rational(1, 2));
  EXPECT_EQ(ExactUtilities(red.instance, Rational(127, 128)).u_principal, 1);
  EXPECT_EQ(ReductionCriticalValues(p, 2),
            (std::vector<Rational>{Rational(0), Rational(127, 128),
                                   Rational(1)}));
}

TEST(ReductionTest, RolesFollowGroundOrder) {
  const ReductionParams p =
      ChooseReductionParams(3, Rational(1, 2), Rational(1, 4));
  UpmInstance u = Series();
  u.special = 0;
  u.probs = {Rational(0), p.delta, p.delta / 2};
  const Reduction red = UpmToOlcpm(u, p);
  EXPECT_EQ(red.ground_of_role, (std::vector<int>{1, 2, 0}));
  EXPECT_EQ(red.instance.elements[0].outcomes[0].prob, p.delta);
  EXPECT_EQ(red.instance.elements[1].outcomes[0].prob, p.delta / 2);
  // Roles 1 and 2 are the two series edges; together they span role 3.
  const std::vector<int> both{0, 1};
  const std::vector<int> one{0};
  EXPECT_TRUE(red.instance.matroid->InSpan(both, 2));
  EXPECT_FALSE(red.instance.matroid->InSpan(one, 2));
}

TEST(ReductionTest, GuaranteesOnSmallInstances) {
  testing::Rng rng(77);
  const Rational eps(1, 4);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = testing::Uniform(rng, 2, 3);
    const Rational beta = testing::UnitRational(rng, 5);
    if (beta == 0) {
      --trial;
      continue;
    }
    const ReductionParams params = ChooseReductionParams(n, beta, eps);
    UpmInstance u;
    do {
      u.matroid = testing::RandomMatroidAnyFamily(rng, n);
    } while (HasLoop(*u.matroid));
    u.special = testing::Uniform(rng, 0, n - 1);
    for (int i = 0; i < n; ++i) {
      u.probs.push_back(i == u.special
                            ? Rational(0)
                            : params.delta * testing::Uniform(rng, 1, 4) / 4);
    }
    const Rational rho = UpmExact(u);
    const Reduction red = UpmToOlcpm(u, params);
    const auto listed = ReductionCriticalValues(params, n);
    for (const Rational& a : CriticalValues(red.instance)) {
      ASSERT_TRUE(std::binary_search(listed.begin(), listed.end(), a))
          << ToString(a);
    }
    for (const Rational& a : listed) {
      const Rational u_p = ExactUtilities(red.instance, a).u_principal;
      if (a == 0) {
        ASSERT_EQ(u_p, beta);
      } else if (a == 1 - params.xi) {
        ASSERT_GE(u_p, rho);
        ASSERT_LE(u_p, rho + eps);
      } else if (a < 1) {
        ASSERT_LE(u_p, 2 * eps * beta);
      }
    }
  }
}

UpmInstance FiveElement(const Rational& delta) {
  return Make(std::make_shared<UniformMatroid>(5, 3), 4,
              {delta, delta / 2, delta / 3, delta, Rational(0)});
}

TEST(BoundedSupportReductionTest, OutcomeSplit) {
  const ReductionParams params =
      ChooseReductionParams(5, Rational(1, 2), Rational(1, 4));
  const UpmInstance u = FiveElement(params.delta);
  const Reduction red = UpmToOlcpmBoundedSupport(u, params);
  const auto& e = red.instance.elements;
  // Role 2 puts all mass on 1/eps, role n - 1 on 1/eps^(n-2).
  EXPECT_EQ(e[1].outcomes[0].prob, u.probs[1]);
  EXPECT_EQ(e[1].outcomes[1].prob, 0);
  EXPECT_EQ(e[3].outcomes[0].prob, 0);
  EXPECT_EQ(e[3].outcomes[1].prob, u.probs[3]);
  EXPECT_GT(e[2].outcomes[0].prob, 0);
  EXPECT_GT(e[2].outcomes[1].prob, 0);
  const Rational inv(4);
  EXPECT_EQ(e[2].outcomes[0].prob + e[2].outcomes[1].prob, u.probs[2]);
  EXPECT_EQ(e[2].outcomes[0].prob * inv + e[2].outcomes[1].prob * 64,
            u.probs[2] * 16);
  EXPECT_THROW(UpmToOlcpmBoundedSupport(Series(), params, false),
               InfeasibleError);
}

TEST(BoundedSupportReductionTest, GradeCurvesAgree) {
  const ReductionParams params =
      ChooseReductionParams(5, Rational(1, 2), Rational(1, 4));
  const UpmInstance u = FiveElement(params.delta);
  const Reduction plain = UpmToOlcpm(u, params);
  const Reduction bounded = UpmToOlcpmBoundedSupport(u, params);
  testing::Rng rng(13);
  for (int j = 0; j < 50; ++j) {
    const Rational alpha = testing::RandomAlpha(rng);
    for (int role = 2; role <= 4; ++role) {
      const auto& a = plain.instance.elements[role - 1];
      const auto& b = bounded.instance.elements[role - 1];
      ASSERT_EQ(GradeAt(a.cost, a.outcomes, alpha),
                GradeAt(b.cost, b.outcomes, alpha))
          << "role " << role << " alpha " << ToString(alpha);
    }
  }
}

TEST(DriverTest, ExactAnswers) {
  const auto oracle = ExactOracle();
  const DriverResult a = UpmViaOlcpm(Pair(Rational(255, 256)), oracle);
  EXPECT_EQ(a.rho, Rational(1, 256));
  EXPECT_EQ(a.lambda, 256);
  EXPECT_EQ(a.eps, Rational(1, 1024));
  EXPECT_EQ(a.oracle_calls, 8);
  const DriverResult b = UpmViaOlcpm(Pair(Rational(1, 4)), oracle);
  EXPECT_EQ(b.rho, Rational(3, 4));
  EXPECT_EQ(UpmViaOlcpm(Series(), oracle).rho, Rational(3, 4));
}

TEST(DriverTest, ZeroCheck) {
  const DriverResult r = UpmViaOlcpm(Pair(Rational(1)), ExactOracle());
  EXPECT_EQ(r.rho, 0);
  EXPECT_TRUE(r.zero_check);
  EXPECT_EQ(r.oracle_calls, 0);
  EXPECT_EQ(UpmViaOlcpmApprox(Pair(Rational(1)), Rational(1, 10),
                              ExactOracle())
                .rho,
            0);
}

TEST(DriverTest, DropsZeroProbabilityElements) {
  UpmInstance u = Series();
  u.probs[1] = 0;
  EXPECT_EQ(UpmViaOlcpm(u, ExactOracle()).rho, 1);
  u.probs[0] = 0;
  const DriverResult r = UpmViaOlcpm(u, ExactOracle());
  EXPECT_EQ(r.rho, 1);
  EXPECT_EQ(r.oracle_calls, 0);
}

TEST(DriverTest, MatchesEnumeration) {
  testing::Rng rng(404);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = testing::Uniform(rng, 2, 3);
    const UpmInstance u = testing::RandomUpm(
        rng, n, testing::RandomMatroidAnyFamily(rng, n), 4);
    ASSERT_EQ(UpmViaOlcpm(u, ExactOracle()).rho, UpmExact(u));
  }
}

TEST(DriverTest, Approximate) {
  const Rational rho(3, 4);
  for (const Rational& psi : {Rational(1, 10), Rational(4)}) {
    const DriverResult r =
        UpmViaOlcpmApprox(Pair(Rational(1, 4)), psi, ExactOracle());
    const Rational factor = (1 + psi) * (1 + psi);
    EXPECT_LE(r.rho, rho * factor) << ToString(psi);
    EXPECT_GE(r.rho * factor, rho) << ToString(psi);
  }
}

TEST(DriverTest, CertifiedModeHitsGroundSetCap) {
  DriverOptions options;
  options.certified = true;
  options.cleanup_max_elements = 1000;
  EXPECT_THROW(UpmViaOlcpm(Pair(Rational(255, 256)), ExactOracle(), options),
               CapExceededError);
}

}  // namespace
}  // namespace matcon
