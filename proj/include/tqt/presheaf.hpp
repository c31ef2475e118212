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

// Set-valued presheaves over a finite context poset: validation, sieves and
// their Heyting algebra, subobjects, characteristic arrows and global
// sections. Fibre elements are opaque indices; domain modules give them
// meaning.

#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tqt/context.hpp"

namespace tqt {

/// A downward closed set of contexts below `stage`. Members are poset
/// indices, kept sorted.
struct Sieve {
  std::size_t stage = 0;
  std::vector<std::size_t> members;

  bool contains(std::size_t v) const;
  bool empty() const { return members.empty(); }
  friend bool operator==(const Sieve&, const Sieve&) = default;
};

Sieve empty_sieve(std::size_t stage);
/// The principal sieve: the whole downset of the stage.
Sieve principal_sieve(const ContextPoset& poset, std::size_t stage);
/// Builds a sieve from arbitrary members; throws InvalidArgument unless the
/// set lies below the stage and is downward closed.
Sieve make_sieve(const ContextPoset& poset, std::size_t stage, std::vector<std::size_t> members);
bool is_sieve(const ContextPoset& poset, const Sieve& s);
/// Member ids, sorted lexicographically (the serialised form).
std::vector<std::string> sieve_ids(const ContextPoset& poset, const Sieve& s);

/// All sieves on v, including the empty and the principal sieve.
std::vector<Sieve> sieves_on(const ContextPoset& poset, std::size_t v);
/// The pull-back down-set(sub) & S. Throws NotASubcontext.
Sieve sieve_pullback(const ContextPoset& poset, const Sieve& s, std::size_t sub);

enum class HeytingOp { And, Or, Implies, Not };

/// T is ignored for Not. Throws StageMismatch when stages differ.
Sieve sieve_heyting(const ContextPoset& poset, HeytingOp op, const Sieve& s, const Sieve& t);
Sieve sieve_not(const ContextPoset& poset, const Sieve& s);
bool sieve_leq(const Sieve& s, const Sieve& t);

class FinitePresheaf {
 public:
  FinitePresheaf(PosetPtr poset, std::vector<std::size_t> fibre_sizes);

  const ContextPoset& poset() const { return *poset_; }
  const PosetPtr& poset_ptr() const { return poset_; }
  std::size_t fibre_size(std::size_t v) const { return fibres_.at(v); }
  std::size_t total_fibre_size() const;

  /// Restriction map fibre(v) -> fibre(sub) for sub <= v. Identity maps
  /// are implicit but may be set explicitly (and are then validated).
  void set_restriction(std::size_t v, std::size_t sub, std::vector<std::size_t> map);
  bool has_restriction(std::size_t v, std::size_t sub) const;
  std::size_t restrict(std::size_t v, std::size_t sub, std::size_t x) const;

  void set_labels(std::size_t v, std::vector<std::string> labels);
  std::string label(std::size_t v, std::size_t x) const;

 private:
  PosetPtr poset_;
  std::vector<std::size_t> fibres_;
  std::vector<std::vector<std::size_t>> maps_;  // indexed v * n + sub
  std::vector<char> has_map_;
  std::vector<std::vector<std::string>> labels_;
};

using PresheafPtr = std::shared_ptr<const FinitePresheaf>;

FinitePresheaf constant_presheaf(PosetPtr poset, std::size_t fibre_size = 1);

struct PresheafViolation {
  std::string message;
  std::vector<std::size_t> chain;  // the offending contexts, top first
};

/// Checks every restriction exists and lands in its target fibre, identity
/// maps are identities, and X_rp = X_qp o X_rq for every chain r >= q >= p.
std::optional<PresheafViolation> validate(const FinitePresheaf& p);

using Section = std::vector<std::size_t>;

bool is_global_section(const FinitePresheaf& p, const Section& s);

struct SectionSearchResult {
  std::vector<Section> sections;
  std::size_t nodes = 0;   // search nodes visited
  std::size_t prunes = 0;  // branches closed by propagation
  bool complete = true;    // false when stopped at the section limit
};

/// Backtracking search with arc-consistency propagation over all comparable
/// pairs. Branches on the context with the largest fibre first. An empty
/// complete result certifies that no global section exists over this poset.
SectionSearchResult global_elements(const FinitePresheaf& p,
                                    std::size_t limit = std::numeric_limits<std::size_t>::max());

class Subobject {
 public:
  /// `selected[v][x]` marks fibre element x of context v. Throws
  /// InvalidArgument unless the selection is closed under restriction.
  Subobject(PresheafPtr parent, std::vector<std::vector<char>> selected);

  static Subobject whole(PresheafPtr parent);
  static Subobject empty(PresheafPtr parent);

  const FinitePresheaf& parent() const { return *parent_; }
  const PresheafPtr& parent_ptr() const { return parent_; }
  bool contains(std::size_t v, std::size_t x) const { return selected_.at(v).at(x) != 0; }
  const std::vector<std::vector<char>>& selected() const { return selected_; }
  std::vector<std::size_t> fibre(std::size_t v) const;

  friend bool operator==(const Subobject& a, const Subobject& b) {
    return a.parent_ == b.parent_ && a.selected_ == b.selected_;
  }

 private:
  PresheafPtr parent_;
  std::vector<std::vector<char>> selected_;
};

std::optional<std::string> closure_violation(const FinitePresheaf& p,
                                             const std::vector<std::vector<char>>& selected);

bool subobject_leq(const Subobject& s, const Subobject& t);
/// Heyting operations in Sub(X). Not and Implies quantify over the whole
/// downset of each stage. Throws ParentMismatch.
Subobject subobject_heyting(HeytingOp op, const Subobject& s, const Subobject& t);
Subobject subobject_not(const Subobject& s);

/// Every subobject of p (exponential; meant for tiny presheaves).
std::vector<Subobject> all_subobjects(const PresheafPtr& p);

/// chi_K(v, x) = { v' <= v : x|v' in K(v') }. Throws ElementNotInFibre.
Sieve characteristic_arrow(const Subobject& k, std::size_t v, std::size_t x);
std::vector<std::vector<Sieve>> characteristic_table(const Subobject& k);
/// The subobject chi^{-1}(principal sieve).
Subobject subobject_from_characteristic(const PresheafPtr& parent,
                                        const std::vector<std::vector<Sieve>>& table);

struct NaturalTransformation {
  PresheafPtr source;
  PresheafPtr target;
  std::vector<std::vector<std::size_t>> components;  // per context: fibre map
};

/// Reports the first naturality square that fails to commute.
std::optional<std::string> validate_naturality(const NaturalTransformation& n);

}  // namespace tqt
