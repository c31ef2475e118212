// Copyright 2026 The tqt Authors
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

#pragma once

// Contexts (unital commutative subalgebras) at finite dimension, stored as
// partitions of the identity, and finite posets of contexts ordered by
// inclusion.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tqt/opalg.hpp"

namespace tqt {

/// Subset of a context's blocks; bit i selects minimal projection i. An
/// element of the projection lattice P(V) is exactly such a mask.
using BlockMask = std::uint64_t;

inline constexpr int kMaxBlocks = 63;

class Context {
 public:
  Context() = default;

  /// Validates that the blocks are nonzero, pairwise orthogonal and sum to
  /// the identity. Blocks are reordered canonically. A single block (the
  /// trivial algebra C1) is rejected unless allow_trivial is set.
  static Context from_blocks(std::vector<Projection> blocks, const TolerancePolicy& tol = {},
                             bool allow_trivial = false);
  static Context trivial(int dim);

  int dim() const { return dim_; }
  std::size_t size() const { return blocks_.size(); }
  bool is_trivial() const { return blocks_.size() == 1; }
  const std::vector<Projection>& blocks() const { return blocks_; }
  const Projection& block(std::size_t i) const { return blocks_.at(i); }
  const std::string& id() const { return id_; }
  BlockMask full_mask() const { return (BlockMask{1} << blocks_.size()) - 1; }

  /// Sum of the selected blocks.
  Projection lattice_element(BlockMask mask) const;
  /// Mask of the blocks summing to p, if p lies in P(V).
  std::optional<BlockMask> mask_of(const Projection& p, const TolerancePolicy& tol = {}) const;
  /// Coefficients c_i with A = sum c_i Q_i when A lies in the span; the
  /// residual is checked against eps_matrix.
  std::optional<std::vector<Complex>> coefficients(const Matrix& a, const TolerancePolicy& tol = {}) const;
  bool contains(const Matrix& a, const TolerancePolicy& tol = {}) const {
    return coefficients(a, tol).has_value();
  }
  /// sum_i values[i] Q_i.
  Matrix combine(const std::vector<double>& values) const;

 private:
  int dim_ = 0;
  std::vector<Projection> blocks_;
  std::string id_;
};

/// Canonical identifier: blocks sorted by (rank, rounded entries) and the
/// serialisation hashed (FNV-1a, 64 bit).
std::string canonical_context_id(const std::vector<Projection>& blocks);

/// Joint eigenspace partition of a family of commuting operators.
Context context_from_commuting(const std::vector<HermitianOperator>& ops,
                               const TolerancePolicy& tol = {}, bool allow_trivial = false);

/// True iff every block of sub is a sum of blocks of v.
bool is_subcontext(const Context& sub, const Context& v, const TolerancePolicy& tol = {});

/// For sub <= v: index of the block of sub that dominates each block of v.
std::vector<std::size_t> block_parents(const Context& sub, const Context& v,
                                       const TolerancePolicy& tol = {});

/// All proper coarsenings of v with at least two blocks, plus the trivial
/// context when include_trivial is set.
std::vector<Context> coarsenings(const Context& v, bool include_trivial = false,
                                 const TolerancePolicy& tol = {});

/// The algebra intersection of two contexts (their largest common
/// coarsening); may be trivial.
Context context_meet(const Context& a, const Context& b, const TolerancePolicy& tol = {});

enum class Closure { None, Coarsenings, PairwiseMeets };

struct GenerationPolicy {
  std::vector<std::pair<std::string, HermitianOperator>> seeds;
  Closure closure = Closure::None;
  bool include_trivial = false;
};

class ContextPoset {
 public:
  /// Deduplicates by id, orders contexts by (descending block count, id),
  /// computes the inclusion relation and validates it as a partial order.
  /// Throws EmptyPoset when no context is given.
  static ContextPoset from_contexts(std::vector<Context> contexts, bool include_trivial,
                                    const TolerancePolicy& tol = {});

  std::size_t size() const { return contexts_.size(); }
  int dim() const { return dim_; }
  bool include_trivial() const { return include_trivial_; }
  const TolerancePolicy& tolerance() const { return tol_; }
  const Context& at(std::size_t i) const { return contexts_.at(i); }
  const std::vector<Context>& contexts() const { return contexts_; }

  std::optional<std::size_t> find(const std::string& id) const;
  /// Throws ContextNotInPoset.
  std::size_t index_of(const std::string& id) const;
  std::optional<std::size_t> find(const Context& v) const { return find(v.id()); }

  /// leq(a, b): context a is a subalgebra of context b.
  bool leq(std::size_t a, std::size_t b) const { return leq_[a * size() + b]; }
  /// Elements below v (including v), ordered by (descending block count, id).
  const std::vector<std::size_t>& downset(std::size_t v) const { return downsets_.at(v); }
  std::vector<std::size_t> upset(std::size_t v) const;
  /// Restriction of spectral elements: parent block in `sub` of each block
  /// of `v`. Requires leq(sub, v).
  const std::vector<std::size_t>& parents(std::size_t sub, std::size_t v) const;

  /// Optional human-readable names; several labels may name one context.
  void add_label(const std::string& label, std::size_t index);
  const std::map<std::string, std::size_t>& labels() const { return labels_; }
  /// Resolves a label or an id.
  std::size_t resolve(const std::string& name) const;

  /// Hash over the sorted ids and the relation.
  std::string fingerprint() const;

 private:
  int dim_ = 0;
  bool include_trivial_ = false;
  TolerancePolicy tol_;
  std::vector<Context> contexts_;
  std::map<std::string, std::size_t> by_id_;
  std::vector<char> leq_;
  std::vector<std::vector<std::size_t>> downsets_;
  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> parents_;
  std::map<std::string, std::size_t> labels_;
};

using PosetPtr = std::shared_ptr<const ContextPoset>;

/// Contexts from the maximal mutually commuting subsets of the seeds,
/// closed under the policy. Labels are the joined seed names.
ContextPoset build_poset(const GenerationPolicy& policy, const TolerancePolicy& tol = {});

/// Elements of the downset of v, as contexts.
std::vector<Context> downset(const ContextPoset& poset, const Context& v);

/// Enumerates all set partitions of {0..n-1} as block-label vectors
/// (restricted growth strings).
std::vector<std::vector<int>> set_partitions(int n);

std::string fnv1a_hex(const std::string& data);

}  // namespace tqt
