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

#include <algorithm>
#include <optional>

#include "matcon/errors.h"

namespace matcon {
namespace {

void RequireDistribution(const OutcomeDistribution& dist) {
  if (dist.empty()) throw ValidationError("empty outcome distribution");
  Rational total = 0;
  for (const auto& o : dist) {
    if (o.prob < 0 || o.value < 0) {
      throw ValidationError("negative value or probability in distribution");
    }
    total += o.prob;
  }
  if (total != 1) {
    throw ValidationError("distribution probabilities sum " + ToString(total) +
                          " ≠ 1");
  }
}

// Root of sum_k p_k (x_k - tau)^+ = cost for cost > 0, where x_k are the
// breakpoints alpha v_k. On each interval between consecutive sorted
// breakpoints the left side is affine in tau.
Rational SolveGrade(const Rational& cost, const OutcomeDistribution& dist,
                    const Rational& alpha) {
  std::vector<std::pair<Rational, Rational>> points;  // (alpha v, p)
  points.reserve(dist.size());
  for (const auto& o : dist) {
    if (o.prob > 0) points.emplace_back(alpha * o.value, o.prob);
  }
  std::sort(points.begin(), points.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  Rational mass = 0;
  Rational weighted = 0;
  for (std::size_t j = 0; j < points.size(); ++j) {
    mass += points[j].second;
    weighted += points[j].second * points[j].first;
    // g(tau) = weighted - mass * tau on [points[j+1].x, points[j].x].
    Rational tau = (weighted - cost) / mass;
    const bool last = j + 1 == points.size();
    if (tau <= points[j].first && (last || tau >= points[j + 1].first)) {
      return tau;
    }
  }
  // Unreachable for cost > 0: the final piece has unit mass.
  throw ValidationError("grade equation has no root");
}

// Intersections of two affine pieces restricted to [lo, hi].
void IntersectPieces(const AffinePiece& f, const AffinePiece& g,
                     const Rational& lo, const Rational& hi,
                     std::vector<Rational>& out) {
  if (lo > hi) return;
  if (f.slope != g.slope) {
    Rational x = (g.intercept - f.intercept) / (f.slope - g.slope);
    if (x >= lo && x <= hi) out.push_back(x);
  } else if (f.intercept == g.intercept) {
    // Coincident on the overlap: comparisons change only at its ends.
    out.push_back(lo);
    out.push_back(hi);
  }
}

void IntersectCurves(const GradeCurve& a, const GradeCurve& b,
                     std::vector<Rational>& out) {
  for (int i = 0; i < a.segment_count(); ++i) {
    for (int j = 0; j < b.segment_count(); ++j) {
      const Rational lo = std::max(a.breakpoints()[i], b.breakpoints()[j]);
      const Rational hi =
          std::min(a.breakpoints()[i + 1], b.breakpoints()[j + 1]);
      IntersectPieces(a.pieces()[i], b.pieces()[j], lo, hi, out);
    }
  }
}

}  // namespace

ExtRational GradeAt(const Rational& cost, const OutcomeDistribution& dist,
                    const Rational& alpha) {
  RequireDistribution(dist);
  if (cost < 0) throw ValidationError("negative cost " + ToString(cost));
  if (cost == 0) return ExtRational::Infinity();
  return SolveGrade(cost, dist, alpha);
}

Rational Surrogate(const Rational& cost, const OutcomeDistribution& dist,
                   const Rational& alpha, int k) {
  if (k < 0 || k >= static_cast<int>(dist.size())) {
    throw ValidationError("outcome index " + std::to_string(k) +
                          " out of range");
  }
  return MinFinite(alpha * dist[k].value, GradeAt(cost, dist, alpha));
}

GradeCurve GradeCurve::Infinite() {
  GradeCurve c;
  c.infinite_ = true;
  return c;
}

GradeCurve::GradeCurve(std::vector<Rational> breakpoints,
                       std::vector<AffinePiece> pieces)
    : breakpoints_(std::move(breakpoints)), pieces_(std::move(pieces)) {}

ExtRational GradeCurve::operator()(const Rational& alpha) const {
  if (infinite_) return ExtRational::Infinity();
  auto it = std::upper_bound(breakpoints_.begin() + 1, breakpoints_.end() - 1,
                             alpha);
  const auto piece = static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
  return pieces_[piece](alpha);
}

GradeCurve BuildGradeCurve(const Rational& cost,
                           const OutcomeDistribution& dist) {
  RequireDistribution(dist);
  if (cost < 0) throw ValidationError("negative cost " + ToString(cost));
  if (cost == 0) return GradeCurve::Infinite();

  // tau(alpha) / alpha crosses the outcome value v exactly when
  // E[(X - v)^+] = cost / alpha, so the breakpoints are cost / E[(X - v)^+].
  std::vector<Rational> cuts{Rational(0), Rational(1)};
  for (const auto& o : dist) {
    if (o.prob == 0) continue;
    Rational tail = 0;
    for (const auto& other : dist) {
      if (other.value > o.value) tail += other.prob * (other.value - o.value);
    }
    if (tail == 0) continue;
    Rational a = cost / tail;
    if (a > 0 && a < 1) cuts.push_back(a);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<AffinePiece> pieces;
  pieces.reserve(cuts.size() - 1);
  Rational left_tau = SolveGrade(cost, dist, cuts.front());
  for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
    Rational right_tau = SolveGrade(cost, dist, cuts[j + 1]);
    Rational slope = (right_tau - left_tau) / (cuts[j + 1] - cuts[j]);
    Rational intercept = left_tau - slope * cuts[j];
    pieces.push_back({std::move(slope), std::move(intercept)});
    left_tau = std::move(right_tau);
  }
  return GradeCurve(std::move(cuts), std::move(pieces));
}

Rational MinPositiveProb(const OutcomeDistribution& dist) {
  std::optional<Rational> best;
  for (const auto& o : dist) {
    if (o.prob > 0 && (!best || o.prob < *best)) best = o.prob;
  }
  return best.value_or(Rational(1));
}

Rational PerturbationEpsilon(const OlcpmInstance& instance,
                             const Rational& alpha) {
  RequireUnitAlpha(alpha);
  const int n = instance.n();
  std::optional<Rational> p_min;
  std::optional<Rational> c_max;  // max c_i / p_i over c_i > 0
  std::vector<ExtRational> tau(n);
  for (int i = 0; i < n; ++i) {
    const auto& e = instance.elements[i];
    const Rational p_i = MinPositiveProb(e.outcomes);
    if (!p_min || p_i < *p_min) p_min = p_i;
    tau[i] = GradeAt(e.cost, e.outcomes, alpha);
    if (e.cost > 0) {
      Rational ratio = e.cost / p_i;
      if (!c_max || ratio > *c_max) c_max = ratio;
    }
  }
  const Rational pmin = p_min.value_or(Rational(1));
  if (!c_max) return pmin;

  std::optional<Rational> gap;
  auto consider = [&gap](const Rational& g) {
    if (g > 0 && (!gap || g < *gap)) gap = g;
  };
  for (int i = 0; i < n; ++i) {
    if (tau[i].is_infinite()) continue;
    const Rational& ti = tau[i].value();
    // The probe gate compares tau_i with 0, the line of a zero value.
    consider(-ti);
    for (int j = 0; j < n; ++j) {
      for (const auto& o : instance.elements[j].outcomes) {
        consider(alpha * o.value - ti);
      }
      if (tau[j].is_finite()) consider(tau[j].value() - ti);
    }
  }
  Rational eps = pmin;
  if (gap) {
    Rational bound = *gap / (2 * *c_max);
    if (bound < eps) eps = bound;
  }
  // eps = 1 would zero every cost; keep the perturbation strictly inside.
  if (eps >= 1) eps = Rational(1, 2);
  return eps;
}

std::vector<Rational> PerturbedCosts(const OlcpmInstance& instance,
                                     const Rational& eps) {
  std::vector<Rational> out;
  out.reserve(instance.n());
  for (const auto& e : instance.elements) out.push_back(e.cost * (1 - eps));
  return out;
}

std::vector<Rational> CriticalValues(const OlcpmInstance& instance) {
  std::vector<GradeCurve> curves;
  curves.reserve(instance.n());
  for (const auto& e : instance.elements) {
    curves.push_back(BuildGradeCurve(e.cost, e.outcomes));
  }
  // Zero is always a value line: grades crossing it switch probing on.
  std::vector<Rational> values{Rational(0)};
  for (const auto& e : instance.elements) {
    for (const auto& o : e.outcomes) values.push_back(o.value);
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());

  std::vector<Rational> out{Rational(0), Rational(1)};
  for (std::size_t i = 0; i < curves.size(); ++i) {
    if (curves[i].is_infinite()) continue;
    for (std::size_t j = i + 1; j < curves.size(); ++j) {
      if (curves[j].is_infinite()) continue;
      IntersectCurves(curves[i], curves[j], out);
    }
    for (const auto& v : values) {
      const AffinePiece line{v, Rational(0)};
      for (int s = 0; s < curves[i].segment_count(); ++s) {
        IntersectPieces(curves[i].pieces()[s], line,
                        curves[i].breakpoints()[s],
                        curves[i].breakpoints()[s + 1], out);
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace matcon
