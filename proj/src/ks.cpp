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

#include "tqt/ks.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <variant>

#ifndef TQT_DATA_DIR
#define TQT_DATA_DIR "data"
#endif

namespace tqt {

namespace {

[[noreturn]] void witness_error(const std::string& source, int line, const std::string& msg) {
  throw Error(ErrorCode::InvalidWitness, source + ":" + std::to_string(line) + ": " + msg);
}

double parse_number(const std::string& tok, const std::string& source, int line) {
  const auto slash = tok.find('/');
  try {
    std::size_t used = 0;
    if (slash == std::string::npos) {
      const double v = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      return v;
    }
    const std::string num = tok.substr(0, slash), den = tok.substr(slash + 1);
    std::size_t u1 = 0, u2 = 0;
    const double p = std::stod(num, &u1), q = std::stod(den, &u2);
    if (u1 != num.size() || u2 != den.size() || q == 0.0) throw std::invalid_argument(tok);
    return p / q;
  } catch (const std::logic_error&) {
    witness_error(source, line, "bad number '" + tok + "'");
  }
}

}  // namespace

WitnessSet parse_witness(std::istream& in, const std::string& source) {
  WitnessSet w;
  std::map<std::string, std::size_t> index;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::string key;
    if (!(ls >> key)) continue;
    std::vector<std::string> rest;
    for (std::string t; ls >> t;) rest.push_back(t);
    if (key == "name") {
      if (rest.size() != 1) witness_error(source, line, "name takes one word");
      w.name = rest[0];
    } else if (key == "dim") {
      if (rest.size() != 1) witness_error(source, line, "dim takes one integer");
      w.dim = static_cast<int>(parse_number(rest[0], source, line));
      if (w.dim < 2 || w.dim > kMaxBlocks) witness_error(source, line, "dimension out of range");
    } else if (key == "ray") {
      if (w.dim == 0) witness_error(source, line, "ray before dim");
      if (rest.size() != static_cast<std::size_t>(w.dim) + 2 || rest[1] != "=")
        witness_error(source, line, "expected: ray <label> = <" + std::to_string(w.dim) + " entries>");
      if (index.count(rest[0])) witness_error(source, line, "duplicate ray '" + rest[0] + "'");
      Vector v(w.dim);
      for (int i = 0; i < w.dim; ++i) v(i) = parse_number(rest[2 + i], source, line);
      if (v.norm() == 0.0) witness_error(source, line, "zero ray");
      index[rest[0]] = w.rays.size();
      w.ray_names.push_back(rest[0]);
      w.rays.push_back(v / v.norm());
    } else if (key == "basis") {
      std::vector<std::size_t> b;
      for (const auto& r : rest) {
        auto it = index.find(r);
        if (it == index.end()) witness_error(source, line, "unknown ray '" + r + "'");
        b.push_back(it->second);
      }
      w.bases.push_back(std::move(b));
    } else {
      witness_error(source, line, "unknown directive '" + key + "'");
    }
  }
  return w;
}

WitnessSet load_witness(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read witness file " + path);
  return parse_witness(in, path);
}

std::string bundled_witness_path(const std::string& name) {
  return std::string(TQT_DATA_DIR) + "/witness/" + name + ".txt";
}

WitnessSet load_witness_ref(const std::string& ref) {
  const bool is_path = ref.find('/') != std::string::npos || ref.ends_with(".txt");
  return load_witness(is_path ? ref : bundled_witness_path(ref));
}

void validate_witness(const WitnessSet& w, const TolerancePolicy& tol) {
  if (w.dim < 2) throw Error(ErrorCode::InvalidWitness, "missing dimension");
  std::vector<char> used(w.rays.size(), 0);
  for (std::size_t k = 0; k < w.bases.size(); ++k) {
    const auto& b = w.bases[k];
    const std::string where = "basis " + std::to_string(k + 1);
    if (b.size() != static_cast<std::size_t>(w.dim))
      throw Error(ErrorCode::InvalidWitness, where + " does not have " + std::to_string(w.dim) + " rays");
    for (std::size_t i = 0; i < b.size(); ++i) {
      used[b[i]] = 1;
      for (std::size_t j = i + 1; j < b.size(); ++j)
        if (std::abs(w.rays[b[i]].dot(w.rays[b[j]])) > tol.eps_matrix)
          throw Error(ErrorCode::InvalidWitness,
                      where + ": rays " + w.ray_names[b[i]] + " and " + w.ray_names[b[j]] + " are not orthogonal");
    }
  }
  for (std::size_t r = 0; r < used.size(); ++r)
    if (!used[r]) throw Error(ErrorCode::InvalidWitness, "ray " + w.ray_names[r] + " lies in no basis");
}

ContextPoset ks_poset_from_witness(const WitnessSet& w, const TolerancePolicy& tol) {
  if (w.bases.empty()) throw Error(ErrorCode::EmptyPoset, "witness has no bases");
  validate_witness(w, tol);
  std::vector<Context> contexts;
  for (const auto& b : w.bases) {
    std::vector<Projection> blocks;
    for (std::size_t r : b) blocks.push_back(Projection::onto(w.rays[r]));
    contexts.push_back(Context::from_blocks(std::move(blocks), tol));
  }
  for (const auto& r : w.rays) {
    const Projection p = Projection::onto(r);
    contexts.push_back(Context::from_blocks({p, p.complement()}, tol));
  }
  return ContextPoset::from_contexts(std::move(contexts), false, tol);
}

SearchCertificate section_search(const FinitePresheaf& sigma, std::size_t limit) {
  const SectionSearchResult r = global_elements(sigma, limit);
  SearchCertificate c;
  c.found = !r.sections.empty();
  if (c.found) c.section = r.sections.front();
  c.sections = r.sections.size();
  c.nodes = r.nodes;
  c.prunes = r.prunes;
  c.complete = r.complete;
  c.fingerprint = sigma.poset().fingerprint();
  return c;
}

ParityVerdict parity_oracle(const WitnessSet& w) {
  ParityVerdict v;
  v.basis_count = w.bases.size();
  v.incidence.assign(w.rays.size(), 0);
  for (const auto& b : w.bases)
    for (std::size_t r : b) ++v.incidence[r];
  const bool all_even = std::all_of(v.incidence.begin(), v.incidence.end(), [](std::size_t n) { return n % 2 == 0; });
  v.applies = all_even && v.basis_count % 2 == 1;
  return v;
}

namespace {

// Homomorphisms of the Boolean algebra of a context with n atoms into
// {0,1}, each given by its value table over the 2^n masks.
std::vector<std::vector<char>> homomorphisms(std::size_t n) {
  const BlockMask full = (BlockMask{1} << n) - 1;
  std::vector<std::vector<char>> out;
  for (BlockMask atoms = 0; atoms <= full; ++atoms) {
    std::vector<char> h(full + 1);
    for (BlockMask m = 0; m <= full; ++m) h[m] = (m & atoms) != 0;
    bool ok = h[0] == 0 && h[full] == 1;
    for (BlockMask a = 0; ok && a <= full; ++a)
      for (BlockMask b = 0; ok && b <= full; ++b)
        ok = h[a & b] == (h[a] & h[b]) && h[full & ~a] == !h[a];
    if (ok) out.push_back(std::move(h));
  }
  return out;
}

}  // namespace

PresheafPtr dual_presheaf(PosetPtr poset) {
  const std::size_t n = poset->size();
  const TolerancePolicy& tol = poset->tolerance();
  std::vector<std::vector<std::vector<char>>> homs(n);
  std::vector<std::size_t> sizes(n);
  for (std::size_t v = 0; v < n; ++v) {
    homs[v] = homomorphisms(poset->at(v).size());
    sizes[v] = homs[v].size();
  }
  auto p = std::make_shared<FinitePresheaf>(poset, sizes);
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t sub : poset->downset(v)) {
      if (sub == v) continue;
      const Context& small = poset->at(sub);
      std::vector<BlockMask> embed(small.full_mask() + 1);
      for (BlockMask m = 0; m <= small.full_mask(); ++m) {
        const auto big = poset->at(v).mask_of(small.lattice_element(m), tol);
        if (!big) throw Error(ErrorCode::NotASubcontext, "subalgebra element outside the algebra");
        embed[m] = *big;
      }
      std::vector<std::size_t> map;
      for (const auto& h : homs[v]) {
        std::vector<char> r(embed.size());
        for (BlockMask m = 0; m < embed.size(); ++m) r[m] = h[embed[m]];
        const auto it = std::find(homs[sub].begin(), homs[sub].end(), r);
        map.push_back(static_cast<std::size_t>(it - homs[sub].begin()));
      }
      p->set_restriction(v, sub, std::move(map));
    }
  return p;
}

Projection boolean_das(const Projection& p, const Context& b, const TolerancePolicy& tol) {
  if (p.dim() != b.dim()) throw Error(ErrorCode::DimensionMismatch, "projection vs Boolean algebra");
  BlockMask least = b.full_mask();
  for (BlockMask m = 0; m <= b.full_mask(); ++m)
    if (proj_leq(p, b.lattice_element(m), tol)) least &= m;
  return b.lattice_element(least);
}

std::optional<std::string> func_check(const ContextPoset& poset, const Section& s,
                                      const std::vector<std::pair<std::string, HermitianOperator>>& ops,
                                      const NamedFunction& f, const TolerancePolicy& tol) {
  if (s.size() != poset.size()) throw Error(ErrorCode::InvalidArgument, "section does not cover the poset");
  // The value the section assigns to an operator, required to agree over
  // every context that contains it.
  auto value = [&](const std::string& name, const HermitianOperator& a) -> std::variant<double, std::string> {
    std::optional<double> out;
    for (std::size_t v = 0; v < poset.size(); ++v) {
      if (!poset.at(v).contains(a.matrix(), tol)) continue;
      const double x = evaluate(poset.at(v), s[v], a.matrix(), tol);
      if (out && std::abs(*out - x) > tol.eps_eig)
        return "section assigns " + name + " different values in different contexts";
      out = x;
    }
    if (!out) throw Error(ErrorCode::OperatorNotInScope, name + " lies in no context of the poset");
    return *out;
  };
  for (const auto& [name, a] : ops) {
    const auto va = value(name, a);
    if (auto* msg = std::get_if<std::string>(&va)) return *msg;
    const std::string fname = f.name + "(" + name + ")";
    const auto vf = value(fname, apply_function(a, f.f, tol));
    if (auto* msg = std::get_if<std::string>(&vf)) return *msg;
    const double lhs = std::get<double>(vf), rhs = f.f(std::get<double>(va));
    if (std::abs(lhs - rhs) > tol.eps_eig)
      return "V(" + fname + ") = " + std::to_string(lhs) + " but " + f.name + "(V(" + name + ")) = " + std::to_string(rhs);
  }
  return std::nullopt;
}

}  // namespace tqt
