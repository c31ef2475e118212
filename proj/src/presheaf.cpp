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

#include "tqt/presheaf.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

namespace tqt {

// -- Sieves ------------------------------------------------------------------------

bool Sieve::contains(std::size_t v) const {
  return std::binary_search(members.begin(), members.end(), v);
}

Sieve empty_sieve(std::size_t stage) { return Sieve{stage, {}}; }

Sieve principal_sieve(const ContextPoset& poset, std::size_t stage) {
  std::vector<std::size_t> m = poset.downset(stage);
  std::sort(m.begin(), m.end());
  return Sieve{stage, std::move(m)};
}

bool is_sieve(const ContextPoset& poset, const Sieve& s) {
  if (s.stage >= poset.size()) return false;
  if (!std::is_sorted(s.members.begin(), s.members.end())) return false;
  for (std::size_t m : s.members) {
    if (m >= poset.size() || !poset.leq(m, s.stage)) return false;
    for (std::size_t below : poset.downset(m))
      if (!s.contains(below)) return false;
  }
  return true;
}

Sieve make_sieve(const ContextPoset& poset, std::size_t stage, std::vector<std::size_t> members) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  Sieve s{stage, std::move(members)};
  if (!is_sieve(poset, s)) throw Error(ErrorCode::InvalidArgument, "member set is not a sieve");
  return s;
}

std::vector<std::string> sieve_ids(const ContextPoset& poset, const Sieve& s) {
  std::vector<std::string> ids;
  for (std::size_t m : s.members) ids.push_back(poset.at(m).id());
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::vector<Sieve> sieves_on(const ContextPoset& poset, std::size_t v) {
  if (v >= poset.size()) throw Error(ErrorCode::ContextNotInPoset, std::to_string(v));
  // Bottom-up order: anything strictly below an element has fewer blocks and
  // therefore appears earlier.
  std::vector<std::size_t> order(poset.downset(v).rbegin(), poset.downset(v).rend());
  std::vector<char> in(poset.size(), 0);
  std::vector<Sieve> out;
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == order.size()) {
      Sieve s{v, {}};
      for (std::size_t e : order)
        if (in[e]) s.members.push_back(e);
      std::sort(s.members.begin(), s.members.end());
      out.push_back(std::move(s));
      return;
    }
    const std::size_t e = order[k];
    rec(k + 1);
    bool allowed = true;
    for (std::size_t below : poset.downset(e))
      if (below != e && !in[below]) allowed = false;
    if (allowed) {
      in[e] = 1;
      rec(k + 1);
      in[e] = 0;
    }
  };
  rec(0);
  return out;
}

Sieve sieve_pullback(const ContextPoset& poset, const Sieve& s, std::size_t sub) {
  if (!poset.leq(sub, s.stage))
    throw Error(ErrorCode::NotASubcontext, poset.at(sub).id() + " is not below the sieve stage");
  Sieve out{sub, {}};
  for (std::size_t m : s.members)
    if (poset.leq(m, sub)) out.members.push_back(m);
  return out;
}

bool sieve_leq(const Sieve& s, const Sieve& t) {
  return std::includes(t.members.begin(), t.members.end(), s.members.begin(), s.members.end());
}

Sieve sieve_not(const ContextPoset& poset, const Sieve& s) {
  return sieve_heyting(poset, HeytingOp::Not, s, s);
}

Sieve sieve_heyting(const ContextPoset& poset, HeytingOp op, const Sieve& s, const Sieve& t) {
  if (op != HeytingOp::Not && s.stage != t.stage)
    throw Error(ErrorCode::StageMismatch, "sieves live at different stages");
  Sieve out{s.stage, {}};
  switch (op) {
    case HeytingOp::And:
      std::set_intersection(s.members.begin(), s.members.end(), t.members.begin(), t.members.end(),
                            std::back_inserter(out.members));
      return out;
    case HeytingOp::Or:
      std::set_union(s.members.begin(), s.members.end(), t.members.begin(), t.members.end(),
                     std::back_inserter(out.members));
      return out;
    case HeytingOp::Implies:
    case HeytingOp::Not: {
      const Sieve empty = empty_sieve(s.stage);
      const Sieve& target = op == HeytingOp::Not ? empty : t;
      for (std::size_t w : poset.downset(s.stage)) {
        bool ok = true;
        for (std::size_t below : poset.downset(w))
          if (s.contains(below) && !target.contains(below)) {
            ok = false;
            break;
          }
        if (ok) out.members.push_back(w);
      }
      std::sort(out.members.begin(), out.members.end());
      return out;
    }
  }
  return out;
}

// -- FinitePresheaf ------------------------------------------------------------------

FinitePresheaf::FinitePresheaf(PosetPtr poset, std::vector<std::size_t> fibre_sizes)
    : poset_(std::move(poset)), fibres_(std::move(fibre_sizes)) {
  if (!poset_) throw Error(ErrorCode::InvalidArgument, "presheaf needs a poset");
  if (fibres_.size() != poset_->size())
    throw Error(ErrorCode::DimensionMismatch, "one fibre per context is required");
  const std::size_t n = poset_->size();
  maps_.resize(n * n);
  has_map_.assign(n * n, 0);
  labels_.resize(n);
}

std::size_t FinitePresheaf::total_fibre_size() const {
  return std::accumulate(fibres_.begin(), fibres_.end(), std::size_t{0});
}

void FinitePresheaf::set_restriction(std::size_t v, std::size_t sub, std::vector<std::size_t> map) {
  if (!poset_->leq(sub, v))
    throw Error(ErrorCode::NotASubcontext, poset_->at(sub).id() + " is not below " + poset_->at(v).id());
  if (map.size() != fibres_.at(v)) throw Error(ErrorCode::DimensionMismatch, "restriction map size");
  const std::size_t idx = v * poset_->size() + sub;
  maps_[idx] = std::move(map);
  has_map_[idx] = 1;
}

bool FinitePresheaf::has_restriction(std::size_t v, std::size_t sub) const {
  return v == sub || has_map_.at(v * poset_->size() + sub);
}

std::size_t FinitePresheaf::restrict(std::size_t v, std::size_t sub, std::size_t x) const {
  if (x >= fibres_.at(v)) throw Error(ErrorCode::ElementNotInFibre, "element " + std::to_string(x));
  const std::size_t idx = v * poset_->size() + sub;
  if (has_map_.at(idx)) return maps_[idx][x];
  if (v == sub) return x;
  throw Error(ErrorCode::NotASubcontext, "no restriction from " + poset_->at(v).id() + " to " +
                                             poset_->at(sub).id());
}

void FinitePresheaf::set_labels(std::size_t v, std::vector<std::string> labels) {
  if (labels.size() != fibres_.at(v)) throw Error(ErrorCode::DimensionMismatch, "fibre labels");
  labels_[v] = std::move(labels);
}

std::string FinitePresheaf::label(std::size_t v, std::size_t x) const {
  if (x >= fibres_.at(v)) throw Error(ErrorCode::ElementNotInFibre, "element " + std::to_string(x));
  if (!labels_[v].empty()) return labels_[v][x];
  return std::to_string(x);
}

FinitePresheaf constant_presheaf(PosetPtr poset, std::size_t fibre_size) {
  const std::size_t n = poset->size();
  FinitePresheaf p(poset, std::vector<std::size_t>(n, fibre_size));
  std::vector<std::size_t> id(fibre_size);
  std::iota(id.begin(), id.end(), std::size_t{0});
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t sub : poset->downset(v))
      if (sub != v) p.set_restriction(v, sub, id);
  return p;
}

std::optional<PresheafViolation> validate(const FinitePresheaf& p) {
  const ContextPoset& poset = p.poset();
  const std::size_t n = poset.size();
  auto name = [&](std::size_t v) { return poset.at(v).id(); };
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t x = 0; x < p.fibre_size(v); ++x)
      if (p.restrict(v, v, x) != x)
        return PresheafViolation{"identity restriction at " + name(v) + " moves element " + std::to_string(x), {v}};
    for (std::size_t sub : poset.downset(v)) {
      if (!p.has_restriction(v, sub))
        return PresheafViolation{"missing restriction " + name(v) + " -> " + name(sub), {v, sub}};
      for (std::size_t x = 0; x < p.fibre_size(v); ++x)
        if (p.restrict(v, sub, x) >= p.fibre_size(sub))
          return PresheafViolation{"restriction " + name(v) + " -> " + name(sub) + " leaves the fibre", {v, sub}};
    }
  }
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t q : poset.downset(r))
      for (std::size_t s : poset.downset(q))
        for (std::size_t x = 0; x < p.fibre_size(r); ++x)
          if (p.restrict(r, s, x) != p.restrict(q, s, p.restrict(r, q, x)))
            return PresheafViolation{"composition fails on chain " + name(r) + " >= " + name(q) + " >= " +
                                         name(s) + " for element " + std::to_string(x),
                                     {r, q, s}};
  return std::nullopt;
}

// -- Global sections -------------------------------------------------------------------

bool is_global_section(const FinitePresheaf& p, const Section& s) {
  const ContextPoset& poset = p.poset();
  if (s.size() != poset.size()) return false;
  for (std::size_t v = 0; v < poset.size(); ++v) {
    if (s[v] >= p.fibre_size(v)) return false;
    for (std::size_t sub : poset.downset(v))
      if (p.restrict(v, sub, s[v]) != s[sub]) return false;
  }
  return true;
}

namespace {

using Domains = std::vector<std::vector<char>>;

struct SectionSearch {
  const FinitePresheaf& p;
  std::size_t limit;
  SectionSearchResult result;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (v, sub), sub < v strictly

  bool propagate(Domains& dom) const {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& [v, sub] : pairs) {
        std::vector<char> supported(p.fibre_size(sub), 0);
        for (std::size_t x = 0; x < dom[v].size(); ++x) {
          if (!dom[v][x]) continue;
          const std::size_t y = p.restrict(v, sub, x);
          if (!dom[sub][y]) {
            dom[v][x] = 0;
            changed = true;
          } else {
            supported[y] = 1;
          }
        }
        for (std::size_t y = 0; y < dom[sub].size(); ++y)
          if (dom[sub][y] && !supported[y]) {
            dom[sub][y] = 0;
            changed = true;
          }
      }
      for (const auto& d : dom)
        if (std::find(d.begin(), d.end(), 1) == d.end()) return false;
    }
    return true;
  }

  void run(Domains dom) {
    ++result.nodes;
    if (result.sections.size() >= limit) {
      result.complete = false;
      return;
    }
    if (!propagate(dom)) {
      ++result.prunes;
      return;
    }
    std::optional<std::size_t> pick;
    std::size_t best_fibre = 0, best_dom = 0;
    for (std::size_t v = 0; v < dom.size(); ++v) {
      const auto count = static_cast<std::size_t>(std::count(dom[v].begin(), dom[v].end(), 1));
      if (count <= 1) continue;
      const std::size_t fibre = p.fibre_size(v);
      if (!pick || fibre > best_fibre || (fibre == best_fibre && count < best_dom)) {
        pick = v;
        best_fibre = fibre;
        best_dom = count;
      }
    }
    if (!pick) {
      Section s(dom.size());
      for (std::size_t v = 0; v < dom.size(); ++v)
        s[v] = static_cast<std::size_t>(std::find(dom[v].begin(), dom[v].end(), 1) - dom[v].begin());
      if (is_global_section(p, s)) result.sections.push_back(std::move(s));
      return;
    }
    for (std::size_t x = 0; x < dom[*pick].size(); ++x) {
      if (!dom[*pick][x]) continue;
      Domains next = dom;
      std::fill(next[*pick].begin(), next[*pick].end(), 0);
      next[*pick][x] = 1;
      run(std::move(next));
      if (!result.complete) return;
    }
  }
};

}  // namespace

SectionSearchResult global_elements(const FinitePresheaf& p, std::size_t limit) {
  const ContextPoset& poset = p.poset();
  SectionSearch search{p, limit, {}, {}};
  for (std::size_t v = 0; v < poset.size(); ++v)
    for (std::size_t sub : poset.downset(v))
      if (sub != v) search.pairs.emplace_back(v, sub);
  Domains dom(poset.size());
  for (std::size_t v = 0; v < poset.size(); ++v) dom[v].assign(p.fibre_size(v), 1);
  search.run(std::move(dom));
  return search.result;
}

// -- Subobjects ------------------------------------------------------------------------

std::optional<std::string> closure_violation(const FinitePresheaf& p,
                                             const std::vector<std::vector<char>>& selected) {
  const ContextPoset& poset = p.poset();
  if (selected.size() != poset.size()) return std::string("selection has the wrong number of fibres");
  for (std::size_t v = 0; v < poset.size(); ++v) {
    if (selected[v].size() != p.fibre_size(v)) return "selection at " + poset.at(v).id() + " has the wrong size";
    for (std::size_t x = 0; x < selected[v].size(); ++x) {
      if (!selected[v][x]) continue;
      for (std::size_t sub : poset.downset(v))
        if (!selected[sub][p.restrict(v, sub, x)])
          return "element " + std::to_string(x) + " at " + poset.at(v).id() + " restricts outside the selection at " +
                 poset.at(sub).id();
    }
  }
  return std::nullopt;
}

Subobject::Subobject(PresheafPtr parent, std::vector<std::vector<char>> selected)
    : parent_(std::move(parent)), selected_(std::move(selected)) {
  if (!parent_) throw Error(ErrorCode::InvalidArgument, "subobject needs a parent presheaf");
  if (auto bad = closure_violation(*parent_, selected_)) throw Error(ErrorCode::InvalidArgument, *bad);
}

Subobject Subobject::whole(PresheafPtr parent) {
  std::vector<std::vector<char>> sel;
  for (std::size_t v = 0; v < parent->poset().size(); ++v) sel.emplace_back(parent->fibre_size(v), 1);
  return Subobject(std::move(parent), std::move(sel));
}

Subobject Subobject::empty(PresheafPtr parent) {
  std::vector<std::vector<char>> sel;
  for (std::size_t v = 0; v < parent->poset().size(); ++v) sel.emplace_back(parent->fibre_size(v), 0);
  return Subobject(std::move(parent), std::move(sel));
}

std::vector<std::size_t> Subobject::fibre(std::size_t v) const {
  std::vector<std::size_t> out;
  for (std::size_t x = 0; x < selected_.at(v).size(); ++x)
    if (selected_[v][x]) out.push_back(x);
  return out;
}

bool subobject_leq(const Subobject& s, const Subobject& t) {
  if (s.parent_ptr() != t.parent_ptr()) throw Error(ErrorCode::ParentMismatch, "subobjects of different presheaves");
  for (std::size_t v = 0; v < s.selected().size(); ++v)
    for (std::size_t x = 0; x < s.selected()[v].size(); ++x)
      if (s.selected()[v][x] && !t.selected()[v][x]) return false;
  return true;
}

Subobject subobject_not(const Subobject& s) { return subobject_heyting(HeytingOp::Not, s, s); }

Subobject subobject_heyting(HeytingOp op, const Subobject& s, const Subobject& t) {
  if (s.parent_ptr() != t.parent_ptr()) throw Error(ErrorCode::ParentMismatch, "subobjects of different presheaves");
  const FinitePresheaf& p = s.parent();
  const ContextPoset& poset = p.poset();
  std::vector<std::vector<char>> out(poset.size());
  for (std::size_t v = 0; v < poset.size(); ++v) {
    out[v].assign(p.fibre_size(v), 0);
    for (std::size_t x = 0; x < p.fibre_size(v); ++x) {
      switch (op) {
        case HeytingOp::And: out[v][x] = s.contains(v, x) && t.contains(v, x); break;
        case HeytingOp::Or: out[v][x] = s.contains(v, x) || t.contains(v, x); break;
        case HeytingOp::Not:
        case HeytingOp::Implies: {
          bool ok = true;
          for (std::size_t sub : poset.downset(v)) {
            const std::size_t y = p.restrict(v, sub, x);
            const bool in_s = s.contains(sub, y);
            const bool in_t = op == HeytingOp::Not ? false : t.contains(sub, y);
            if (in_s && !in_t) {
              ok = false;
              break;
            }
          }
          out[v][x] = ok;
          break;
        }
      }
    }
  }
  return Subobject(s.parent_ptr(), std::move(out));
}

std::vector<Subobject> all_subobjects(const PresheafPtr& p) {
  const std::size_t total = p->total_fibre_size();
  if (total > 24) throw Error(ErrorCode::InvalidArgument, "presheaf too large for subobject enumeration");
  const ContextPoset& poset = p->poset();
  std::vector<Subobject> out;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << total); ++bits) {
    std::vector<std::vector<char>> sel(poset.size());
    std::size_t k = 0;
    for (std::size_t v = 0; v < poset.size(); ++v) {
      sel[v].resize(p->fibre_size(v));
      for (std::size_t x = 0; x < p->fibre_size(v); ++x, ++k) sel[v][x] = (bits >> k) & 1U;
    }
    if (!closure_violation(*p, sel)) out.emplace_back(p, std::move(sel));
  }
  return out;
}

Sieve characteristic_arrow(const Subobject& k, std::size_t v, std::size_t x) {
  const FinitePresheaf& p = k.parent();
  if (v >= p.poset().size()) throw Error(ErrorCode::ContextNotInPoset, std::to_string(v));
  if (x >= p.fibre_size(v)) throw Error(ErrorCode::ElementNotInFibre, "element " + std::to_string(x));
  Sieve out{v, {}};
  for (std::size_t sub : p.poset().downset(v))
    if (k.contains(sub, p.restrict(v, sub, x))) out.members.push_back(sub);
  std::sort(out.members.begin(), out.members.end());
  return out;
}

std::vector<std::vector<Sieve>> characteristic_table(const Subobject& k) {
  const FinitePresheaf& p = k.parent();
  std::vector<std::vector<Sieve>> table(p.poset().size());
  for (std::size_t v = 0; v < table.size(); ++v)
    for (std::size_t x = 0; x < p.fibre_size(v); ++x) table[v].push_back(characteristic_arrow(k, v, x));
  return table;
}

Subobject subobject_from_characteristic(const PresheafPtr& parent,
                                        const std::vector<std::vector<Sieve>>& table) {
  const ContextPoset& poset = parent->poset();
  std::vector<std::vector<char>> sel(poset.size());
  for (std::size_t v = 0; v < poset.size(); ++v) {
    const Sieve top = principal_sieve(poset, v);
    for (std::size_t x = 0; x < parent->fibre_size(v); ++x) sel[v].push_back(table.at(v).at(x) == top);
  }
  return Subobject(parent, std::move(sel));
}

std::optional<std::string> validate_naturality(const NaturalTransformation& n) {
  if (!n.source || !n.target) return std::string("missing source or target");
  const ContextPoset& poset = n.source->poset();
  if (&poset != &n.target->poset()) return std::string("source and target live on different posets");
  if (n.components.size() != poset.size()) return std::string("one component per context is required");
  for (std::size_t v = 0; v < poset.size(); ++v) {
    if (n.components[v].size() != n.source->fibre_size(v))
      return "component at " + poset.at(v).id() + " has the wrong domain";
    for (std::size_t sub : poset.downset(v))
      for (std::size_t x = 0; x < n.source->fibre_size(v); ++x) {
        const std::size_t lhs = n.target->restrict(v, sub, n.components[v][x]);
        const std::size_t rhs = n.components[sub][n.source->restrict(v, sub, x)];
        if (lhs != rhs)
          return "naturality square fails for " + poset.at(v).id() + " -> " + poset.at(sub).id() + " at element " +
                 std::to_string(x);
      }
  }
  return std::nullopt;
}

}  // namespace tqt
