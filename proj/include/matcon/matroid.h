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

#ifndef MATCON_MATROID_H_
#define MATCON_MATROID_H_

#include <memory>
#include <span>
#include <utility>
#include <vector>

namespace matcon {

// A set of ground-set indices. Duplicates are ignored by every query.
using ElementSet = std::span<const int>;

// Immutable finite matroid on the ground set {0, ..., size() - 1}.
//
// Every query validates its indices and throws std::out_of_range on an
// index outside the ground set. Instances are safe for concurrent reads.
class Matroid {
 public:
  enum class Kind { kUniform, kPartition, kLaminar, kGraphic, kParallel };

  virtual ~Matroid() = default;

  virtual Kind kind() const = 0;
  int size() const { return size_; }

  virtual int Rank(ElementSet s) const = 0;
  virtual bool IsIndependent(ElementSet s) const;
  // True iff rank(s + e) == rank(s).
  virtual bool InSpan(ElementSet s, int e) const;

 protected:
  explicit Matroid(int size);

  void CheckElement(int e) const;
  // Range-checked, sorted, duplicate-free copy of s.
  std::vector<int> Normalize(ElementSet s) const;

 private:
  int size_;
};

using MatroidPtr = std::shared_ptr<const Matroid>;

class UniformMatroid final : public Matroid {
 public:
  UniformMatroid(int n, int rank);
  Kind kind() const override { return Kind::kUniform; }
  int rank() const { return rank_; }

  int Rank(ElementSet s) const override;
  bool IsIndependent(ElementSet s) const override;

 private:
  int rank_;
};

// Blocks partition the ground set; at most capacity[b] elements of block b.
class PartitionMatroid final : public Matroid {
 public:
  PartitionMatroid(std::vector<std::vector<int>> blocks,
                   std::vector<int> capacities);
  Kind kind() const override { return Kind::kPartition; }
  const std::vector<std::vector<int>>& blocks() const { return blocks_; }
  const std::vector<int>& capacities() const { return capacities_; }

  int Rank(ElementSet s) const override;
  bool IsIndependent(ElementSet s) const override;

 private:
  std::vector<std::vector<int>> blocks_;
  std::vector<int> capacities_;
  std::vector<int> block_of_;
};

// Independent iff |S ∩ A| <= capacity(A) for every set A of a laminar
// family. Elements outside every family set are unconstrained.
class LaminarMatroid final : public Matroid {
 public:
  LaminarMatroid(int n, std::vector<std::vector<int>> sets,
                 std::vector<int> capacities);
  Kind kind() const override { return Kind::kLaminar; }
  const std::vector<std::vector<int>>& sets() const { return sets_; }
  const std::vector<int>& capacities() const { return capacities_; }

  int Rank(ElementSet s) const override;
  bool IsIndependent(ElementSet s) const override;

 private:
  // Per family set: number of elements of s whose smallest enclosing set it
  // is, or, for index sets_.size(), elements outside the family.
  std::vector<int> DirectCounts(const std::vector<int>& s) const;

  std::vector<std::vector<int>> sets_;
  std::vector<int> capacities_;
  // Family indices ordered so that every set precedes its parent.
  std::vector<int> order_;
  std::vector<int> parent_;      // -1 for maximal sets
  std::vector<int> innermost_;   // per element, -1 if uncovered
};

// Cycle matroid of a multigraph; element i is edge i. Self-loops are
// dependent on their own.
class GraphicMatroid final : public Matroid {
 public:
  GraphicMatroid(int vertices, std::vector<std::pair<int, int>> edges);
  Kind kind() const override { return Kind::kGraphic; }
  int vertices() const { return vertices_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }

  int Rank(ElementSet s) const override;
  bool IsIndependent(ElementSet s) const override;
  bool InSpan(ElementSet s, int e) const override;

 private:
  int vertices_;
  std::vector<std::pair<int, int>> edges_;
};

// Element i of the extension is a parallel copy of base element image[i].
// The rank of a set is the base rank of its image set. Extensions of
// extensions are flattened onto the innermost base.
class ParallelExtension final : public Matroid {
 public:
  ParallelExtension(MatroidPtr base, std::vector<int> image);
  Kind kind() const override { return Kind::kParallel; }
  const MatroidPtr& base() const { return base_; }
  const std::vector<int>& image() const { return image_; }

  int Rank(ElementSet s) const override;
  bool IsIndependent(ElementSet s) const override;
  bool InSpan(ElementSet s, int e) const override;

 private:
  std::vector<int> Images(ElementSet s) const;

  MatroidPtr base_;
  std::vector<int> image_;
};

// Replaces base element b by multiplicities[b] parallel copies. Copies of
// element 0 come first, then copies of element 1, and so on. Throws
// std::invalid_argument on a non-positive multiplicity or size mismatch.
std::shared_ptr<const ParallelExtension> ParallelExtend(
    MatroidPtr base, const std::vector<int>& multiplicities);

// Rank computed from independence queries alone (greedy over s). Used as
// an independent reference for the native rank functions.
int GreedyRank(const Matroid& m, ElementSet s);

}  // namespace matcon

#endif  // MATCON_MATROID_H_
