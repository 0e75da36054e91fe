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

#ifndef MATCON_GRADES_H_
#define MATCON_GRADES_H_

#include <vector>

#include "matcon/model.h"
#include "matcon/rational.h"

namespace matcon {

// The grade tau(alpha): the unique tau with E[(alpha X - tau)^+] = cost, or
// +infinity when cost is zero. May be negative.
ExtRational GradeAt(const Rational& cost, const OutcomeDistribution& dist,
                    const Rational& alpha);

// min(alpha v_k, tau(alpha)); alpha v_k when tau is infinite.
Rational Surrogate(const Rational& cost, const OutcomeDistribution& dist,
                   const Rational& alpha, int k);

struct AffinePiece {
  Rational slope;
  Rational intercept;

  Rational operator()(const Rational& x) const { return slope * x + intercept; }
};

// Exact piecewise-linear alpha -> tau(alpha) on [0, 1]. Piece j covers
// [breakpoints[j], breakpoints[j + 1]]; breakpoints start at 0 and end at 1.
class GradeCurve {
 public:
  static GradeCurve Infinite();
  GradeCurve(std::vector<Rational> breakpoints, std::vector<AffinePiece> pieces);

  bool is_infinite() const { return infinite_; }
  const std::vector<Rational>& breakpoints() const { return breakpoints_; }
  const std::vector<AffinePiece>& pieces() const { return pieces_; }
  int segment_count() const { return static_cast<int>(pieces_.size()); }

  ExtRational operator()(const Rational& alpha) const;

 private:
  GradeCurve() = default;

  bool infinite_ = false;
  std::vector<Rational> breakpoints_;
  std::vector<AffinePiece> pieces_;
};

GradeCurve BuildGradeCurve(const Rational& cost, const OutcomeDistribution& dist);

// Smallest nonzero outcome probability of one element.
Rational MinPositiveProb(const OutcomeDistribution& dist);

// Cost-perturbation constant for the contract alpha. The returned eps
// satisfies eps <= min nonzero p_{i,k}, and max_i eps c_i / p_i stays below
// half of the smallest positive gap among {alpha v_{j,k} - tau_i},
// {0 - tau_i} and {tau_j - tau_i}. Running FRUGAL under costs c (1 - eps) then realizes the
// agent's best response under the true costs.
Rational PerturbationEpsilon(const OlcpmInstance& instance,
                             const Rational& alpha);

// c_i (1 - eps) for every element.
std::vector<Rational> PerturbedCosts(const OlcpmInstance& instance,
                                     const Rational& eps);

// {0, 1} and every alpha in [0, 1] at which two functions of
// {tau_i(.)} ∪ {v_{i,k} .} ∪ {0} meet, from unperturbed grade curves.
// Sorted, distinct.
std::vector<Rational> CriticalValues(const OlcpmInstance& instance);

}  // namespace matcon

#endif  // MATCON_GRADES_H_
