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

#include "matcon/matroid.h"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace matcon {
namespace {

class DisjointSet {
 public:
  explicit DisjointSet(int n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  int Find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // Returns false if a and b were already connected.
  bool Union(int a, int b) {
    a = Find(a);
    b = Find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return true;
  }

 private:
  std::vector<int> parent_;
  std::vector<int> size_;
};

bool IsSubset(const std::vector<int>& a, const std::vector<int>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

bool Disjoint(const std::vector<int>& a, const std::vector<int>& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return false;
    if (*i < *j) {
      ++i;
    } else {
      ++j;
    }
  }
  return true;
}

}  // namespace

Matroid::Matroid(int size) : size_(size) {
  if (size < 0) throw std::invalid_argument("negative ground-set size");
}

void Matroid::CheckElement(int e) const {
  if (e < 0 || e >= size_) {
    throw std::out_of_range("element " + std::to_string(e) +
                            " out of range [0, " + std::to_string(size_) +
                            ")");
  }
}

std::vector<int> Matroid::Normalize(ElementSet s) const {
  std::vector<int> out(s.begin(), s.end());
  for (int e : out) CheckElement(e);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool Matroid::IsIndependent(ElementSet s) const {
  const std::vector<int> set = Normalize(s);
  return Rank(set) == static_cast<int>(set.size());
}

bool Matroid::InSpan(ElementSet s, int e) const {
  CheckElement(e);
  std::vector<int> with = Normalize(s);
  const int base = Rank(with);
  with.push_back(e);
  return Rank(with) == base;
}

// ---------------------------------------------------------------------------

UniformMatroid::UniformMatroid(int n, int rank) : Matroid(n), rank_(rank) {
  if (rank < 0 || rank > n) {
    throw std::invalid_argument("uniform rank " + std::to_string(rank) +
                                " outside [0, " + std::to_string(n) + "]");
  }
}

int UniformMatroid::Rank(ElementSet s) const {
  return std::min<int>(Normalize(s).size(), rank_);
}

bool UniformMatroid::IsIndependent(ElementSet s) const {
  return static_cast<int>(Normalize(s).size()) <= rank_;
}

// ---------------------------------------------------------------------------

namespace {

int CountElements(const std::vector<std::vector<int>>& blocks) {
  int total = 0;
  for (const auto& b : blocks) total += static_cast<int>(b.size());
  return total;
}

}  // namespace

PartitionMatroid::PartitionMatroid(std::vector<std::vector<int>> blocks,
                                   std::vector<int> capacities)
    : Matroid(CountElements(blocks)),
      blocks_(std::move(blocks)),
      capacities_(std::move(capacities)),
      block_of_(size(), -1) {
  if (blocks_.size() != capacities_.size()) {
    throw std::invalid_argument("partition: one capacity per block required");
  }
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    if (capacities_[b] < 0) {
      throw std::invalid_argument("partition: negative capacity");
    }
    for (int e : blocks_[b]) {
      if (e < 0 || e >= size() || block_of_[e] != -1) {
        throw std::invalid_argument(
            "partition: blocks must partition 0..n-1 (bad element " +
            std::to_string(e) + ")");
      }
      block_of_[e] = static_cast<int>(b);
    }
  }
}

int PartitionMatroid::Rank(ElementSet s) const {
  std::vector<int> count(blocks_.size(), 0);
  for (int e : Normalize(s)) ++count[block_of_[e]];
  int rank = 0;
  for (std::size_t b = 0; b < count.size(); ++b) {
    rank += std::min(count[b], capacities_[b]);
  }
  return rank;
}

bool PartitionMatroid::IsIndependent(ElementSet s) const {
  std::vector<int> count(blocks_.size(), 0);
  for (int e : Normalize(s)) {
    if (++count[block_of_[e]] > capacities_[block_of_[e]]) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

LaminarMatroid::LaminarMatroid(int n, std::vector<std::vector<int>> sets,
                               std::vector<int> capacities)
    : Matroid(n),
      sets_(std::move(sets)),
      capacities_(std::move(capacities)),
      parent_(sets_.size(), -1),
      innermost_(n, -1) {
  if (sets_.size() != capacities_.size()) {
    throw std::invalid_argument("laminar: one capacity per set required");
  }
  const int k = static_cast<int>(sets_.size());
  std::vector<std::vector<int>> sorted(k);
  for (int a = 0; a < k; ++a) {
    if (capacities_[a] < 0) {
      throw std::invalid_argument("laminar: negative capacity");
    }
    sorted[a] = sets_[a];
    std::sort(sorted[a].begin(), sorted[a].end());
    if (std::adjacent_find(sorted[a].begin(), sorted[a].end()) !=
        sorted[a].end()) {
      throw std::invalid_argument("laminar: repeated element in set " +
                                  std::to_string(a));
    }
    for (int e : sorted[a]) {
      if (e < 0 || e >= n) {
        throw std::invalid_argument("laminar: element " + std::to_string(e) +
                                    " out of range");
      }
    }
  }
  for (int a = 0; a < k; ++a) {
    for (int b = a + 1; b < k; ++b) {
      if (!Disjoint(sorted[a], sorted[b]) && !IsSubset(sorted[a], sorted[b]) &&
          !IsSubset(sorted[b], sorted[a])) {
        throw std::invalid_argument("laminar: sets " + std::to_string(a) +
                                    " and " + std::to_string(b) +
                                    " cross");
      }
    }
  }
  order_.resize(k);
  std::iota(order_.begin(), order_.end(), 0);
  std::stable_sort(order_.begin(), order_.end(), [&](int a, int b) {
    return sorted[a].size() < sorted[b].size();
  });
  for (int pos = 0; pos < k; ++pos) {
    const int a = order_[pos];
    for (int later = pos + 1; later < k; ++later) {
      if (IsSubset(sorted[a], sorted[order_[later]])) {
        parent_[a] = order_[later];
        break;
      }
    }
    for (int e : sorted[a]) {
      if (innermost_[e] == -1) innermost_[e] = a;
    }
  }
}

std::vector<int> LaminarMatroid::DirectCounts(const std::vector<int>& s) const {
  std::vector<int> direct(sets_.size() + 1, 0);
  for (int e : s) {
    const int a = innermost_[e];
    ++direct[a == -1 ? sets_.size() : a];
  }
  return direct;
}

int LaminarMatroid::Rank(ElementSet s) const {
  const std::vector<int> set = Normalize(s);
  std::vector<int> capped = DirectCounts(set);
  int rank = capped.back();
  for (int a : order_) {
    capped[a] = std::min(capped[a], capacities_[a]);
    if (parent_[a] == -1) {
      rank += capped[a];
    } else {
      capped[parent_[a]] += capped[a];
    }
  }
  return rank;
}

bool LaminarMatroid::IsIndependent(ElementSet s) const {
  const std::vector<int> set = Normalize(s);
  std::vector<int> count = DirectCounts(set);
  for (int a : order_) {
    if (count[a] > capacities_[a]) return false;
    if (parent_[a] != -1) count[parent_[a]] += count[a];
  }
  return true;
}

// ---------------------------------------------------------------------------

GraphicMatroid::GraphicMatroid(int vertices,
                               std::vector<std::pair<int, int>> edges)
    : Matroid(static_cast<int>(edges.size())),
      vertices_(vertices),
      edges_(std::move(edges)) {
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const auto [u, v] = edges_[i];
    if (u < 0 || v < 0 || u >= vertices_ || v >= vertices_) {
      throw std::invalid_argument("graphic: edge " + std::to_string(i) +
                                  " has an endpoint out of range");
    }
  }
}

int GraphicMatroid::Rank(ElementSet s) const {
  DisjointSet forest(vertices_);
  int rank = 0;
  for (int e : Normalize(s)) {
    if (forest.Union(edges_[e].first, edges_[e].second)) ++rank;
  }
  return rank;
}

bool GraphicMatroid::IsIndependent(ElementSet s) const {
  DisjointSet forest(vertices_);
  for (int e : Normalize(s)) {
    if (!forest.Union(edges_[e].first, edges_[e].second)) return false;
  }
  return true;
}

bool GraphicMatroid::InSpan(ElementSet s, int e) const {
  CheckElement(e);
  DisjointSet forest(vertices_);
  for (int f : Normalize(s)) forest.Union(edges_[f].first, edges_[f].second);
  return forest.Find(edges_[e].first) == forest.Find(edges_[e].second);
}

// ---------------------------------------------------------------------------

ParallelExtension::ParallelExtension(MatroidPtr base, std::vector<int> image)
    : Matroid(static_cast<int>(image.size())),
      base_(std::move(base)),
      image_(std::move(image)) {
  if (!base_) throw std::invalid_argument("parallel extension: null base");
  if (const auto* inner = dynamic_cast<const ParallelExtension*>(base_.get())) {
    for (int& b : image_) {
      if (b < 0 || b >= inner->size()) {
        throw std::invalid_argument("parallel extension: image out of range");
      }
      b = inner->image_[b];
    }
    base_ = inner->base_;
  }
  for (int b : image_) {
    if (b < 0 || b >= base_->size()) {
      throw std::invalid_argument("parallel extension: image " +
                                  std::to_string(b) + " out of range");
    }
  }
}

std::vector<int> ParallelExtension::Images(ElementSet s) const {
  std::vector<int> out;
  out.reserve(s.size());
  for (int e : Normalize(s)) out.push_back(image_[e]);
  return out;
}

int ParallelExtension::Rank(ElementSet s) const {
  return base_->Rank(Images(s));
}

bool ParallelExtension::IsIndependent(ElementSet s) const {
  std::vector<int> images = Images(s);
  std::sort(images.begin(), images.end());
  if (std::adjacent_find(images.begin(), images.end()) != images.end()) {
    return false;
  }
  return base_->IsIndependent(images);
}

bool ParallelExtension::InSpan(ElementSet s, int e) const {
  CheckElement(e);
  return base_->InSpan(Images(s), image_[e]);
}

std::shared_ptr<const ParallelExtension> ParallelExtend(
    MatroidPtr base, const std::vector<int>& multiplicities) {
  if (!base || static_cast<int>(multiplicities.size()) != base->size()) {
    throw std::invalid_argument(
        "parallel_extend: one multiplicity per base element required");
  }
  std::vector<int> image;
  for (std::size_t b = 0; b < multiplicities.size(); ++b) {
    if (multiplicities[b] <= 0) {
      throw std::invalid_argument("parallel_extend: multiplicity of element " +
                                  std::to_string(b) + " must be positive");
    }
    image.insert(image.end(), multiplicities[b], static_cast<int>(b));
  }
  return std::make_shared<ParallelExtension>(std::move(base), std::move(image));
}

int GreedyRank(const Matroid& m, ElementSet s) {
  std::vector<int> basis;
  for (int e : s) {
    if (std::find(basis.begin(), basis.end(), e) != basis.end()) continue;
    basis.push_back(e);
    if (!m.IsIndependent(basis)) basis.pop_back();
  }
  return static_cast<int>(basis.size());
}

}  // namespace matcon
