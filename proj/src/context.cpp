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

#include "tqt/context.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

namespace tqt {

namespace {

using BlockKey = std::pair<int, std::vector<long long>>;

BlockKey block_key(const Projection& p) {
  std::vector<long long> entries;
  const Matrix& m = p.matrix();
  entries.reserve(static_cast<std::size_t>(m.size()) * 2);
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      entries.push_back(std::llround(m(i, j).real() * 1e9));
      entries.push_back(std::llround(m(i, j).imag() * 1e9));
    }
  return {p.rank(), std::move(entries)};
}

bool overlaps(const Matrix& q, const Matrix& p, double eps) {
  return (q * p).cwiseAbs().maxCoeff() >= eps;
}

}  // namespace

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string canonical_context_id(const std::vector<Projection>& blocks) {
  std::vector<BlockKey> keys;
  keys.reserve(blocks.size());
  for (const auto& b : blocks) keys.push_back(block_key(b));
  std::sort(keys.begin(), keys.end());
  std::ostringstream os;
  os << "d" << (blocks.empty() ? 0 : blocks.front().dim());
  for (const auto& [rank, entries] : keys) {
    os << "|" << rank << ":";
    for (long long e : entries) os << e << ",";
  }
  return "c" + fnv1a_hex(os.str());
}

// -- Context -------------------------------------------------------------------

Context Context::from_blocks(std::vector<Projection> blocks, const TolerancePolicy& tol,
                             bool allow_trivial) {
  if (blocks.empty()) throw Error(ErrorCode::InvalidArgument, "context needs at least one block");
  if (blocks.size() > static_cast<std::size_t>(kMaxBlocks))
    throw Error(ErrorCode::InvalidArgument, "too many blocks");
  const int dim = blocks.front().dim();
  Matrix sum = Matrix::Zero(dim, dim);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (blocks[i].dim() != dim) throw Error(ErrorCode::DimensionMismatch, "context blocks");
    if (blocks[i].is_zero()) throw Error(ErrorCode::InvalidArgument, "context block is zero");
    for (std::size_t j = 0; j < i; ++j)
      if (!proj_orthogonal(blocks[i], blocks[j], tol))
        throw Error(ErrorCode::InvalidArgument, "context blocks are not orthogonal");
    sum += blocks[i].matrix();
  }
  if (!approx_equal(sum, Matrix::Identity(dim, dim), tol.eps_matrix))
    throw Error(ErrorCode::InvalidArgument, "context blocks do not sum to the identity");
  if (blocks.size() == 1 && !allow_trivial)
    throw Error(ErrorCode::TrivialContextExcluded, "the trivial algebra is excluded");

  std::vector<std::pair<BlockKey, std::size_t>> order;
  for (std::size_t i = 0; i < blocks.size(); ++i) order.emplace_back(block_key(blocks[i]), i);
  std::sort(order.begin(), order.end());
  Context v;
  v.dim_ = dim;
  for (const auto& entry : order) v.blocks_.push_back(blocks[entry.second]);
  v.id_ = canonical_context_id(v.blocks_);
  return v;
}

Context Context::trivial(int dim) {
  return from_blocks({Projection::identity(dim)}, {}, true);
}

Projection Context::lattice_element(BlockMask mask) const {
  Matrix out = Matrix::Zero(dim_, dim_);
  for (std::size_t i = 0; i < blocks_.size(); ++i)
    if (mask & (BlockMask{1} << i)) out += blocks_[i].matrix();
  return Projection(out);
}

std::optional<BlockMask> Context::mask_of(const Projection& p, const TolerancePolicy& tol) const {
  if (p.dim() != dim_) throw Error(ErrorCode::DimensionMismatch, "projection vs context");
  BlockMask mask = 0;
  Matrix sum = Matrix::Zero(dim_, dim_);
  for (std::size_t i = 0; i < blocks_.size(); ++i)
    if (proj_leq(blocks_[i], p, tol)) {
      mask |= BlockMask{1} << i;
      sum += blocks_[i].matrix();
    }
  if (!approx_equal(sum, p.matrix(), tol.eps_matrix)) return std::nullopt;
  return mask;
}

std::optional<std::vector<Complex>> Context::coefficients(const Matrix& a,
                                                          const TolerancePolicy& tol) const {
  if (a.rows() != dim_ || a.cols() != dim_)
    throw Error(ErrorCode::DimensionMismatch, "operator vs context");
  std::vector<Complex> c;
  Matrix rebuilt = Matrix::Zero(dim_, dim_);
  for (const auto& q : blocks_) {
    const Complex ci = (q.matrix() * a).trace() / static_cast<double>(q.rank());
    c.push_back(ci);
    rebuilt += ci * q.matrix();
  }
  if (!approx_equal(rebuilt, a, tol.eps_matrix)) return std::nullopt;
  return c;
}

Matrix Context::combine(const std::vector<double>& values) const {
  if (values.size() != blocks_.size())
    throw Error(ErrorCode::DimensionMismatch, "one value per block is required");
  Matrix out = Matrix::Zero(dim_, dim_);
  for (std::size_t i = 0; i < blocks_.size(); ++i) out += values[i] * blocks_[i].matrix();
  return out;
}

// -- Construction and order ------------------------------------------------------

Context context_from_commuting(const std::vector<HermitianOperator>& ops,
                               const TolerancePolicy& tol, bool allow_trivial) {
  if (ops.empty()) throw Error(ErrorCode::InvalidArgument, "no operators given");
  const int dim = ops.front().dim();
  for (std::size_t i = 0; i < ops.size(); ++i) {
    if (ops[i].dim() != dim) throw Error(ErrorCode::DimensionMismatch, "context generators");
    for (std::size_t j = 0; j < i; ++j) {
      const Matrix comm = ops[i].matrix() * ops[j].matrix() - ops[j].matrix() * ops[i].matrix();
      if (comm.cwiseAbs().maxCoeff() >= tol.eps_matrix)
        throw Error(ErrorCode::IncommensurableOperators,
                    "operators " + std::to_string(j) + " and " + std::to_string(i) + " do not commute");
    }
  }
  std::vector<Projection> blocks{Projection::identity(dim)};
  for (const auto& op : ops) {
    const auto dec = spectral_decompose(op, tol);
    std::vector<Projection> refined;
    for (const auto& b : blocks)
      for (const auto& e : dec.eigenprojections) {
        const Matrix prod = b.matrix() * e.matrix();
        if (prod.trace().real() > 0.5) refined.emplace_back(prod, tol);
      }
    blocks = std::move(refined);
  }
  if (blocks.size() == 1 && !allow_trivial)
    throw Error(ErrorCode::TrivialContextExcluded, "all operators are scalar");
  return Context::from_blocks(std::move(blocks), tol, true);
}

bool is_subcontext(const Context& sub, const Context& v, const TolerancePolicy& tol) {
  if (sub.dim() != v.dim()) throw Error(ErrorCode::DimensionMismatch, "subcontext test");
  for (const auto& b : sub.blocks()) {
    Matrix sum = Matrix::Zero(v.dim(), v.dim());
    for (const auto& q : v.blocks())
      if (proj_leq(q, b, tol)) sum += q.matrix();
    if (!approx_equal(sum, b.matrix(), tol.eps_matrix)) return false;
  }
  return true;
}

std::vector<std::size_t> block_parents(const Context& sub, const Context& v,
                                       const TolerancePolicy& tol) {
  std::vector<std::size_t> out;
  out.reserve(v.size());
  for (const auto& q : v.blocks()) {
    std::optional<std::size_t> parent;
    for (std::size_t j = 0; j < sub.size(); ++j)
      if (proj_leq(q, sub.block(j), tol)) {
        parent = j;
        break;
      }
    if (!parent) throw Error(ErrorCode::NotASubcontext, sub.id() + " is not below " + v.id());
    out.push_back(*parent);
  }
  return out;
}

std::vector<std::vector<int>> set_partitions(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> labels(static_cast<std::size_t>(n), 0);
  std::function<void(int, int)> rec = [&](int pos, int used) {
    if (pos == n) {
      out.push_back(labels);
      return;
    }
    for (int b = 0; b <= used; ++b) {
      labels[pos] = b;
      rec(pos + 1, std::max(used, b + 1));
    }
  };
  if (n == 0) return {{}};
  labels[0] = 0;
  rec(1, 1);
  return out;
}

std::vector<Context> coarsenings(const Context& v, bool include_trivial, const TolerancePolicy& tol) {
  const int n = static_cast<int>(v.size());
  std::vector<Context> out;
  for (const auto& labels : set_partitions(n)) {
    const int k = *std::max_element(labels.begin(), labels.end()) + 1;
    if (k == n) continue;
    if (k == 1 && !include_trivial) continue;
    std::vector<BlockMask> masks(static_cast<std::size_t>(k), 0);
    for (int i = 0; i < n; ++i) masks[labels[i]] |= BlockMask{1} << i;
    std::vector<Projection> blocks;
    for (BlockMask m : masks) blocks.push_back(v.lattice_element(m));
    out.push_back(Context::from_blocks(std::move(blocks), tol, true));
  }
  return out;
}

Context context_meet(const Context& a, const Context& b, const TolerancePolicy& tol) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::DimensionMismatch, "context meet");
  auto outer_mask = [&](const Context& target, const Matrix& p) {
    BlockMask m = 0;
    for (std::size_t i = 0; i < target.size(); ++i)
      if (overlaps(target.block(i).matrix(), p, tol.eps_matrix)) m |= BlockMask{1} << i;
    return m;
  };
  std::set<BlockMask> atoms;
  for (std::size_t i = 0; i < a.size(); ++i) {
    BlockMask ma = BlockMask{1} << i;
    for (;;) {
      const BlockMask mb = outer_mask(b, a.lattice_element(ma).matrix());
      const BlockMask next = outer_mask(a, b.lattice_element(mb).matrix());
      if (next == ma) break;
      ma = next;
    }
    atoms.insert(ma);
  }
  std::vector<Projection> blocks;
  for (BlockMask m : atoms) blocks.push_back(a.lattice_element(m));
  return Context::from_blocks(std::move(blocks), tol, true);
}

// -- ContextPoset ----------------------------------------------------------------

ContextPoset ContextPoset::from_contexts(std::vector<Context> contexts, bool include_trivial,
                                         const TolerancePolicy& tol) {
  if (contexts.empty()) throw Error(ErrorCode::EmptyPoset, "no contexts");
  ContextPoset p;
  p.dim_ = contexts.front().dim();
  p.include_trivial_ = include_trivial;
  p.tol_ = tol;
  std::map<std::string, Context> unique;
  for (auto& c : contexts) {
    if (c.dim() != p.dim_) throw Error(ErrorCode::DimensionMismatch, "poset contexts differ in dimension");
    if (c.is_trivial() && !include_trivial)
      throw Error(ErrorCode::TrivialContextExcluded, "trivial context in a non-augmented poset");
    unique.emplace(c.id(), std::move(c));
  }
  for (auto& [id, c] : unique) p.contexts_.push_back(std::move(c));
  std::stable_sort(p.contexts_.begin(), p.contexts_.end(), [](const Context& x, const Context& y) {
    if (x.size() != y.size()) return x.size() > y.size();
    return x.id() < y.id();
  });
  const std::size_t n = p.contexts_.size();
  for (std::size_t i = 0; i < n; ++i) p.by_id_[p.contexts_[i].id()] = i;
  p.leq_.assign(n * n, 0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (p.contexts_[a].size() <= p.contexts_[b].size() &&
          is_subcontext(p.contexts_[a], p.contexts_[b], tol))
        p.leq_[a * n + b] = 1;

  for (std::size_t a = 0; a < n; ++a) {
    if (!p.leq(a, a)) throw Error(ErrorCode::InvalidArgument, "inclusion is not reflexive");
    for (std::size_t b = 0; b < n; ++b) {
      if (a != b && p.leq(a, b) && p.leq(b, a))
        throw Error(ErrorCode::InvalidArgument, "distinct ids for the same context: " +
                                                    p.contexts_[a].id() + ", " + p.contexts_[b].id());
      for (std::size_t c = 0; c < n; ++c)
        if (p.leq(a, b) && p.leq(b, c) && !p.leq(a, c))
          throw Error(ErrorCode::InvalidArgument, "inclusion is not transitive");
    }
  }
  p.downsets_.resize(n);
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t a = 0; a < n; ++a)
      if (p.leq(a, v)) {
        p.downsets_[v].push_back(a);
        p.parents_[{a, v}] = block_parents(p.contexts_[a], p.contexts_[v], tol);
      }
  return p;
}

std::optional<std::size_t> ContextPoset::find(const std::string& id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

std::size_t ContextPoset::index_of(const std::string& id) const {
  auto idx = find(id);
  if (!idx) throw Error(ErrorCode::ContextNotInPoset, id);
  return *idx;
}

std::vector<std::size_t> ContextPoset::upset(std::size_t v) const {
  std::vector<std::size_t> out;
  for (std::size_t a = 0; a < size(); ++a)
    if (leq(v, a)) out.push_back(a);
  return out;
}

const std::vector<std::size_t>& ContextPoset::parents(std::size_t sub, std::size_t v) const {
  auto it = parents_.find({sub, v});
  if (it == parents_.end())
    throw Error(ErrorCode::NotASubcontext, contexts_.at(sub).id() + " is not below " + contexts_.at(v).id());
  return it->second;
}

void ContextPoset::add_label(const std::string& label, std::size_t index) {
  if (index >= size()) throw Error(ErrorCode::ContextNotInPoset, label);
  labels_[label] = index;
}

std::size_t ContextPoset::resolve(const std::string& name) const {
  if (auto it = labels_.find(name); it != labels_.end()) return it->second;
  return index_of(name);
}

std::string ContextPoset::fingerprint() const {
  std::ostringstream os;
  os << "dim=" << dim_ << ";trivial=" << include_trivial_ << ";";
  for (const auto& c : contexts_) os << c.id() << ",";
  os << ";";
  for (char bit : leq_) os << (bit ? '1' : '0');
  return fnv1a_hex(os.str());
}

ContextPoset build_poset(const GenerationPolicy& policy, const TolerancePolicy& tol) {
  tol.validate();
  const std::size_t n = policy.seeds.size();
  if (n == 0) throw Error(ErrorCode::EmptyPoset, "no seed operators");
  if (n > 20) throw Error(ErrorCode::InvalidArgument, "too many seed operators");
  const int dim = policy.seeds.front().second.dim();
  std::vector<std::vector<char>> commute(n, std::vector<char>(n, 1));
  for (std::size_t i = 0; i < n; ++i) {
    if (policy.seeds[i].second.dim() != dim) throw Error(ErrorCode::DimensionMismatch, "seed operators");
    for (std::size_t j = 0; j < i; ++j) {
      const Matrix& a = policy.seeds[i].second.matrix();
      const Matrix& b = policy.seeds[j].second.matrix();
      const bool c = (a * b - b * a).cwiseAbs().maxCoeff() < tol.eps_matrix;
      commute[i][j] = commute[j][i] = c;
    }
  }
  // Mutually commuting subsets, then keep the maximal ones.
  std::vector<std::uint32_t> cliques;
  for (std::uint32_t s = 1; s < (std::uint32_t{1} << n); ++s) {
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i)
      for (std::size_t j = 0; j < i && ok; ++j)
        if ((s >> i & 1U) && (s >> j & 1U) && !commute[i][j]) ok = false;
    if (ok) cliques.push_back(s);
  }
  std::vector<std::uint32_t> maximal;
  for (auto s : cliques) {
    bool is_max = true;
    for (auto t : cliques)
      if (t != s && (s & t) == s) {
        is_max = false;
        break;
      }
    if (is_max) maximal.push_back(s);
  }

  std::vector<Context> contexts;
  std::vector<std::pair<std::string, std::string>> labels;  // label, id
  for (auto s : maximal) {
    std::vector<HermitianOperator> ops;
    std::string label;
    for (std::size_t i = 0; i < n; ++i)
      if (s >> i & 1U) {
        ops.push_back(policy.seeds[i].second);
        label += (label.empty() ? "" : "+") + policy.seeds[i].first;
      }
    Context v = context_from_commuting(ops, tol, true);
    if (v.is_trivial() && !policy.include_trivial) continue;
    labels.emplace_back(label, v.id());
    contexts.push_back(std::move(v));
  }
  if (contexts.empty()) throw Error(ErrorCode::EmptyPoset, "no nontrivial context generated");

  auto known = [&](const std::string& id) {
    return std::any_of(contexts.begin(), contexts.end(), [&](const Context& c) { return c.id() == id; });
  };
  if (policy.closure == Closure::Coarsenings) {
    const std::size_t base = contexts.size();
    for (std::size_t i = 0; i < base; ++i)
      for (auto& c : coarsenings(contexts[i], policy.include_trivial, tol))
        if (!known(c.id())) contexts.push_back(std::move(c));
  } else if (policy.closure == Closure::PairwiseMeets) {
    bool grew = true;
    while (grew) {
      grew = false;
      const std::size_t m = contexts.size();
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < i; ++j) {
          Context c = context_meet(contexts[i], contexts[j], tol);
          if (c.is_trivial() && !policy.include_trivial) continue;
          if (!known(c.id())) {
            contexts.push_back(std::move(c));
            grew = true;
          }
        }
    }
  }
  if (policy.include_trivial && !known(Context::trivial(dim).id())) contexts.push_back(Context::trivial(dim));

  ContextPoset poset = ContextPoset::from_contexts(std::move(contexts), policy.include_trivial, tol);
  for (const auto& [label, id] : labels) poset.add_label(label, poset.index_of(id));
  return poset;
}

std::vector<Context> downset(const ContextPoset& poset, const Context& v) {
  const std::size_t idx = poset.index_of(v.id());
  std::vector<Context> out;
  for (std::size_t i : poset.downset(idx)) out.push_back(poset.at(i));
  return out;
}

}  // namespace tqt
