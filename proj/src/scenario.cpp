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

#include "tqt/scenario.hpp"

#include "tqt/ks.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <Eigen/SVD>

namespace tqt {

using nlohmann::json;

namespace {

using Path = std::vector<std::string>;

struct FieldError {
  Path path;
  std::string message;
};

[[noreturn]] void fail(const Path& p, const std::string& msg) { throw FieldError{p, msg}; }

std::string join(const Path& p) {
  std::string out;
  for (const auto& k : p) {
    if (!out.empty() && k.front() != '[') out += '.';
    out += k;
  }
  return out.empty() ? "<root>" : out;
}

Path operator/(Path p, const std::string& k) {
  p.push_back(k);
  return p;
}

std::string idx(std::size_t i) { return "[" + std::to_string(i) + "]"; }

// Line of the first occurrence of the field path, following object keys in
// document order.
int locate(const std::string& text, const Path& p) {
  std::size_t pos = 0;
  for (const auto& k : p) {
    if (k.front() == '[') continue;
    const auto hit = text.find("\"" + k + "\"", pos);
    if (hit == std::string::npos) break;
    pos = hit;
  }
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n'));
}

const json& require(const json& j, const std::string& key, const Path& p) {
  if (!j.contains(key)) fail(p / key, "missing required field");
  return j.at(key);
}

void require_object(const json& j, const Path& p) {
  if (!j.is_object()) fail(p, "expected an object");
}

void allow_keys(const json& j, const std::set<std::string>& keys, const Path& p) {
  require_object(j, p);
  for (const auto& [k, v] : j.items())
    if (!keys.count(k)) fail(p / k, "unknown field");
}

Complex entry_from_json(const json& e, const std::string& field) {
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
    return {e[0].get<double>(), e[1].get<double>()};
  throw Error(ErrorCode::ValidationError, field + ": entries must be numbers or [re, im] pairs");
}

HermitianOperator parse_operator(const json& j, int dim, const Path& p, const TolerancePolicy& tol) {
  Matrix m;
  try {
    m = matrix_from_json(j, join(p));
  } catch (const Error& e) {
    fail(p, e.what());
  }
  if (m.rows() != dim) fail(p, "expected a " + std::to_string(dim) + "x" + std::to_string(dim) + " matrix");
  try {
    return HermitianOperator(m, tol);
  } catch (const Error&) {
    fail(p, "operator is not Hermitian");
  }
}

std::vector<std::pair<std::string, HermitianOperator>> parse_operators(const json& j, int dim, const Path& p,
                                                                       const TolerancePolicy& tol) {
  require_object(j, p);
  std::vector<std::pair<std::string, HermitianOperator>> out;
  for (const auto& [name, m] : j.items()) out.emplace_back(name, parse_operator(m, dim, p / name, tol));
  return out;
}

std::vector<std::string> parse_names(const json& j, const Path& p) {
  if (!j.is_array()) fail(p, "expected an array of names");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_string()) fail(p / idx(i), "expected a name");
    out.push_back(j[i].get<std::string>());
  }
  return out;
}

FactorDecl parse_factor(const json& j, const Path& p, const TolerancePolicy& tol) {
  allow_keys(j, {"dim", "operators", "contexts"}, p);
  FactorDecl f;
  const json& d = require(j, "dim", p);
  if (!d.is_number_integer() || d.get<int>() < 1 || d.get<int>() > 16) fail(p / "dim", "expected an integer in 1..16");
  f.dim = d.get<int>();
  if (j.contains("operators")) f.operators = parse_operators(j["operators"], f.dim, p / "operators", tol);
  if (j.contains("contexts")) {
    const json& cs = j["contexts"];
    if (!cs.is_array()) fail(p / "contexts", "expected an array of operator-name lists");
    for (std::size_t i = 0; i < cs.size(); ++i) {
      auto names = parse_names(cs[i], p / "contexts" / idx(i));
      for (const auto& n : names)
        if (std::none_of(f.operators.begin(), f.operators.end(), [&](const auto& o) { return o.first == n; }))
          fail(p / "contexts" / idx(i), "unknown operator '" + n + "'");
      f.contexts.push_back(std::move(names));
    }
  }
  try {
    factor_contexts(f, tol);
  } catch (const Error& e) {
    fail(p / "contexts", e.what());
  }
  return f;
}

CompositeDecl parse_composite(const json& j, const Path& p, const TolerancePolicy& tol) {
  allow_keys(j, {"kind", "first", "second", "entangled"}, p);
  CompositeDecl c;
  const std::string kind = j.value("kind", "tensor");
  if (kind == "tensor") c.kind = CompositeKind::Tensor;
  else if (kind == "direct_sum") c.kind = CompositeKind::DirectSum;
  else fail(p / "kind", "expected 'tensor' or 'direct_sum'");
  c.first = parse_factor(require(j, "first", p), p / "first", tol);
  c.second = parse_factor(require(j, "second", p), p / "second", tol);
  const int total = c.kind == CompositeKind::Tensor ? c.first.dim * c.second.dim : c.first.dim + c.second.dim;
  if (j.contains("entangled")) {
    const json& e = j["entangled"];
    require_object(e, p / "entangled");
    for (const auto& [name, blocks] : e.items()) {
      const Path bp = p / "entangled" / name;
      if (!blocks.is_array() || blocks.empty()) fail(bp, "expected a nonempty array of blocks");
      BlockContextDecl d{name, {}};
      for (std::size_t b = 0; b < blocks.size(); ++b) {
        if (!blocks[b].is_array() || blocks[b].empty()) fail(bp / idx(b), "a block is a nonempty array of vectors");
        std::vector<Vector> vs;
        for (std::size_t k = 0; k < blocks[b].size(); ++k) {
          Vector v;
          try {
            v = vector_from_json(blocks[b][k], join(bp / idx(b) / idx(k)));
          } catch (const Error& err) {
            fail(bp / idx(b) / idx(k), err.what());
          }
          if (v.size() != total) fail(bp / idx(b) / idx(k), "expected a vector of length " + std::to_string(total));
          vs.push_back(std::move(v));
        }
        d.blocks.push_back(std::move(vs));
      }
      c.entangled.push_back(std::move(d));
    }
  }
  try {
    composite_poset(c, tol);
  } catch (const Error& err) {
    fail(p, err.what());
  }
  return c;
}

Scenario parse_document(const json& j, const std::string& source_dir) {
  const Path root;
  allow_keys(j, {"name", "dimension", "tolerance", "operators", "unitaries", "states", "contexts", "composite",
                 "witness"},
             root);
  Scenario s;
  s.name = j.value("name", std::string("unnamed"));
  const json& d = require(j, "dimension", root);
  if (!d.is_number_integer() || d.get<int>() < 1 || d.get<int>() > 64)
    fail({"dimension"}, "expected an integer in 1..64");
  s.dimension = d.get<int>();

  if (j.contains("tolerance")) {
    const json& t = j["tolerance"];
    allow_keys(t, {"eps_matrix", "eps_eig", "eps_prob"}, {"tolerance"});
    for (const auto& [k, v] : t.items())
      if (!v.is_number()) fail({"tolerance", k}, "expected a number");
    s.tol.eps_matrix = t.value("eps_matrix", s.tol.eps_matrix);
    s.tol.eps_eig = t.value("eps_eig", s.tol.eps_eig);
    s.tol.eps_prob = t.value("eps_prob", s.tol.eps_prob);
    try {
      s.tol.validate();
    } catch (const Error& e) {
      fail({"tolerance"}, e.what());
    }
  }

  std::set<std::string> names;
  auto claim = [&](const std::string& n, const Path& p) {
    if (!names.insert(n).second) fail(p, "duplicate name '" + n + "'");
  };
  if (j.contains("operators")) {
    s.operators = parse_operators(j["operators"], s.dimension, {"operators"}, s.tol);
    for (const auto& [n, o] : s.operators) claim(n, {"operators", n});
  }
  if (j.contains("unitaries")) {
    const json& u = j["unitaries"];
    require_object(u, {"unitaries"});
    for (const auto& [n, m] : u.items()) {
      const Path p{"unitaries", n};
      claim(n, p);
      Matrix mat;
      try {
        mat = matrix_from_json(m, join(p));
      } catch (const Error& e) {
        fail(p, e.what());
      }
      if (mat.rows() != s.dimension) fail(p, "expected a " + std::to_string(s.dimension) + "-dimensional matrix");
      try {
        s.unitaries.emplace_back(n, UnitaryOperator(mat, s.tol));
      } catch (const Error&) {
        fail(p, "matrix is not unitary");
      }
    }
  }
  if (j.contains("states")) {
    const json& st = j["states"];
    require_object(st, {"states"});
    for (const auto& [n, v] : st.items()) {
      const Path p{"states", n};
      claim(n, p);
      Vector vec;
      try {
        vec = vector_from_json(v, join(p));
      } catch (const Error& e) {
        fail(p, e.what());
      }
      if (vec.size() != s.dimension) fail(p, "expected a vector of length " + std::to_string(s.dimension));
      if (vec.norm() < 1e-12) fail(p, "zero vector");
      s.states.emplace_back(n, StateVector::normalized(vec));
    }
  }

  if (j.contains("contexts")) {
    const json& c = j["contexts"];
    const Path cp{"contexts"};
    allow_keys(c, {"seeds", "closure", "include_trivial", "named"}, cp);
    if (c.contains("seeds")) s.seeds = parse_names(c["seeds"], cp / "seeds");
    for (const auto& n : s.seeds)
      if (std::none_of(s.operators.begin(), s.operators.end(), [&](const auto& o) { return o.first == n; }))
        fail(cp / "seeds", "unknown operator '" + n + "'");
    const std::string closure = c.value("closure", std::string("none"));
    if (closure == "none") s.closure = Closure::None;
    else if (closure == "coarsenings") s.closure = Closure::Coarsenings;
    else if (closure == "pairwise_meets") s.closure = Closure::PairwiseMeets;
    else fail(cp / "closure", "expected none, coarsenings or pairwise_meets");
    if (c.contains("include_trivial")) {
      if (!c["include_trivial"].is_boolean()) fail(cp / "include_trivial", "expected a boolean");
      s.include_trivial = c["include_trivial"].get<bool>();
    }
    if (c.contains("named")) {
      require_object(c["named"], cp / "named");
      for (const auto& [n, ops] : c["named"].items()) {
        auto list = parse_names(ops, cp / "named" / n);
        for (const auto& o : list)
          if (std::none_of(s.operators.begin(), s.operators.end(), [&](const auto& x) { return x.first == o; }))
            fail(cp / "named" / n, "unknown operator '" + o + "'");
        s.named_contexts.emplace_back(n, std::move(list));
      }
    }
    if (!s.seeds.empty()) {
      try {
        scenario_poset(s);
      } catch (const Error& e) {
        fail(cp, e.what());
      }
    }
  }

  if (j.contains("composite")) {
    s.composite = parse_composite(j["composite"], {"composite"}, s.tol);
    for (const auto* f : {&s.composite->first, &s.composite->second})
      for (const auto& [n, o] : f->operators) claim(n, {"composite", n});
  }
  if (j.contains("witness")) {
    if (!j["witness"].is_string()) fail({"witness"}, "expected a witness name or path");
    std::string w = j["witness"].get<std::string>();
    if (w.find('/') != std::string::npos || w.ends_with(".txt")) {
      std::filesystem::path wp(w);
      if (wp.is_relative() && !source_dir.empty()) wp = std::filesystem::path(source_dir) / wp;
      w = wp.string();
    }
    s.witness = w;
  }
  return s;
}

template <typename T>
const T& lookup(const std::vector<std::pair<std::string, T>>& items, const std::string& name, const char* kind) {
  for (const auto& [n, v] : items)
    if (n == name) return v;
  throw Error(ErrorCode::ValidationError, std::string("no ") + kind + " named '" + name + "'");
}

}  // namespace

const HermitianOperator& Scenario::op(const std::string& name) const { return lookup(operators, name, "operator"); }
const UnitaryOperator& Scenario::unitary(const std::string& name) const {
  return lookup(unitaries, name, "unitary");
}
const StateVector& Scenario::state(const std::string& name) const { return lookup(states, name, "state"); }

Matrix matrix_from_json(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) throw Error(ErrorCode::ValidationError, field + ": expected an array of rows");
  const auto n = static_cast<Eigen::Index>(j.size());
  Matrix m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
      throw Error(ErrorCode::ValidationError, field + ": matrix must be square");
    for (Eigen::Index c = 0; c < n; ++c) m(r, c) = entry_from_json(row[static_cast<std::size_t>(c)], field);
  }
  return m;
}

Vector vector_from_json(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) throw Error(ErrorCode::ValidationError, field + ": expected an array of entries");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = entry_from_json(j[i], field);
  return v;
}

namespace {

json entry_to_json(Complex z) {
  if (std::abs(z.imag()) < 1e-13) return z.real();
  return json::array({z.real(), z.imag()});
}

}  // namespace

json matrix_to_json(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(entry_to_json(m(r, c)));
    out.push_back(std::move(row));
  }
  return out;
}

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(entry_to_json(v(i)));
  return out;
}

Scenario parse_scenario_text(const std::string& text, const std::string& source) {
  // Duplicate keys are an error; the stock parser would keep the last one.
  std::vector<std::set<std::string>> seen;
  std::vector<std::string> keys;
  std::optional<std::string> duplicate;
  const auto cb = [&](int, json::parse_event_t ev, json& parsed) {
    switch (ev) {
      case json::parse_event_t::object_start:
        seen.emplace_back();
        break;
      case json::parse_event_t::object_end:
        seen.pop_back();
        break;
      case json::parse_event_t::key: {
        const auto k = parsed.get<std::string>();
        if (!seen.back().insert(k).second && !duplicate) duplicate = k;
        break;
      }
      default:
        break;
    }
    return true;
  };
  json j;
  try {
    j = json::parse(text, cb);
  } catch (const json::parse_error& e) {
    const std::size_t byte = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n');
    const auto nl = text.rfind('\n', byte == 0 ? 0 : byte - 1);
    const std::size_t col = nl == std::string::npos ? byte + 1 : byte - nl;
    throw Error(ErrorCode::ParseError, source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + e.what());
  }
  if (duplicate) {
    const auto pos = text.find("\"" + *duplicate + "\"", text.find("\"" + *duplicate + "\"") + 1);
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(std::min(pos, text.size())), '\n');
    throw Error(ErrorCode::ValidationError,
                source + ":" + std::to_string(line) + ": duplicate key '" + *duplicate + "'");
  }
  const std::string dir = source.front() == '<' ? "" : std::filesystem::path(source).parent_path().string();
  try {
    return parse_document(j, dir);
  } catch (const FieldError& e) {
    throw Error(ErrorCode::ValidationError,
                source + ":" + std::to_string(locate(text, e.path)) + ": field " + join(e.path) + ": " + e.message);
  }
}

Scenario parse_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read scenario " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str(), path);
}

namespace {

json factor_to_json(const FactorDecl& f) {
  json j{{"dim", f.dim}, {"operators", json::object()}, {"contexts", json::array()}};
  for (const auto& [n, o] : f.operators) j["operators"][n] = matrix_to_json(o.matrix());
  for (const auto& c : f.contexts) j["contexts"].push_back(c);
  return j;
}

}  // namespace

json scenario_to_json(const Scenario& s) {
  json j{{"name", s.name},
         {"dimension", s.dimension},
         {"tolerance", {{"eps_matrix", s.tol.eps_matrix}, {"eps_eig", s.tol.eps_eig}, {"eps_prob", s.tol.eps_prob}}}};
  j["operators"] = json::object();
  for (const auto& [n, o] : s.operators) j["operators"][n] = matrix_to_json(o.matrix());
  if (!s.unitaries.empty())
    for (const auto& [n, u] : s.unitaries) j["unitaries"][n] = matrix_to_json(u.matrix());
  if (!s.states.empty())
    for (const auto& [n, v] : s.states) j["states"][n] = vector_to_json(v.amplitudes());
  const char* closure = s.closure == Closure::None ? "none" : s.closure == Closure::Coarsenings ? "coarsenings"
                                                                                                 : "pairwise_meets";
  j["contexts"] = {{"seeds", s.seeds}, {"closure", closure}, {"include_trivial", s.include_trivial}};
  if (!s.named_contexts.empty())
    for (const auto& [n, ops] : s.named_contexts) j["contexts"]["named"][n] = ops;
  if (s.composite) {
    json c{{"kind", s.composite->kind == CompositeKind::Tensor ? "tensor" : "direct_sum"},
           {"first", factor_to_json(s.composite->first)},
           {"second", factor_to_json(s.composite->second)}};
    for (const auto& e : s.composite->entangled) {
      json blocks = json::array();
      for (const auto& b : e.blocks) {
        json vs = json::array();
        for (const auto& v : b) vs.push_back(vector_to_json(v));
        blocks.push_back(std::move(vs));
      }
      c["entangled"][e.name] = std::move(blocks);
    }
    j["composite"] = std::move(c);
  }
  if (s.witness) j["witness"] = *s.witness;
  return j;
}

PosetPtr scenario_poset(const Scenario& s) {
  if (s.seeds.empty() && s.composite) return composite_poset(*s.composite, s.tol);
  if (s.seeds.empty() && s.witness)
    return std::make_shared<const ContextPoset>(ks_poset_from_witness(load_witness_ref(*s.witness), s.tol));
  GenerationPolicy policy;
  for (const auto& n : s.seeds) policy.seeds.emplace_back(n, s.op(n));
  policy.closure = s.closure;
  policy.include_trivial = s.include_trivial;
  ContextPoset poset = build_poset(policy, s.tol);
  for (const auto& [name, ops] : s.named_contexts) {
    std::vector<HermitianOperator> gens;
    for (const auto& o : ops) gens.push_back(s.op(o));
    const Context v = context_from_commuting(gens, s.tol, true);
    const auto at = poset.find(v);
    if (!at) throw Error(ErrorCode::ContextNotInPoset, "named context '" + name + "' is not generated by the policy");
    poset.add_label(name, *at);
  }
  return std::make_shared<const ContextPoset>(std::move(poset));
}

std::vector<Context> factor_contexts(const FactorDecl& f, const TolerancePolicy& tol) {
  std::vector<Context> out;
  for (const auto& names : f.contexts) {
    std::vector<HermitianOperator> ops;
    for (const auto& n : names)
      for (const auto& [on, o] : f.operators)
        if (on == n) ops.push_back(o);
    out.push_back(ops.empty() ? Context::trivial(f.dim) : context_from_commuting(ops, tol, true));
  }
  return out;
}

namespace {

std::string factor_label(const std::vector<std::string>& names) {
  if (names.empty()) return "1";
  std::string out;
  for (const auto& n : names) out += (out.empty() ? "" : "+") + n;
  return out;
}

Projection span_projection(const std::vector<Vector>& vs) {
  Matrix m(vs.front().size(), static_cast<Eigen::Index>(vs.size()));
  for (std::size_t k = 0; k < vs.size(); ++k) m.col(static_cast<Eigen::Index>(k)) = vs[k];
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
  Eigen::Index r = 0;
  while (r < svd.singularValues().size() && svd.singularValues()(r) > 1e-9 * svd.singularValues()(0)) ++r;
  const Matrix u = svd.matrixU().leftCols(r);
  return Projection(u * u.adjoint());
}

}  // namespace

PosetPtr composite_poset(const CompositeDecl& c, const TolerancePolicy& tol) {
  const auto c1 = factor_contexts(c.first, tol);
  const auto c2 = factor_contexts(c.second, tol);
  const bool tensor = c.kind == CompositeKind::Tensor;
  const int total = tensor ? c.first.dim * c.second.dim : c.first.dim + c.second.dim;
  std::vector<Context> contexts;
  std::vector<std::pair<std::string, std::string>> labels;
  for (std::size_t i = 0; i < c1.size(); ++i)
    for (std::size_t k = 0; k < c2.size(); ++k) {
      if (tensor && c1[i].is_trivial() && c2[k].is_trivial()) continue;
      Context v = tensor ? tensor_context(c1[i], c2[k], tol) : direct_sum_context(c1[i], c2[k], tol);
      labels.emplace_back(factor_label(c.first.contexts[i]) + (tensor ? "*" : "|") + factor_label(c.second.contexts[k]),
                          v.id());
      contexts.push_back(std::move(v));
    }
  for (const auto& e : c.entangled) {
    std::vector<Projection> blocks;
    Matrix rest = Matrix::Identity(total, total);
    for (const auto& b : e.blocks) {
      blocks.push_back(span_projection(b));
      rest -= blocks.back().matrix();
    }
    if (rest.trace().real() > 0.5) blocks.emplace_back(rest, tol);
    Context v = Context::from_blocks(std::move(blocks), tol);
    labels.emplace_back(e.name, v.id());
    contexts.push_back(std::move(v));
  }
  if (contexts.empty()) throw Error(ErrorCode::EmptyPoset, "composite declares no contexts");
  ContextPoset poset = ContextPoset::from_contexts(std::move(contexts), false, tol);
  for (const auto& [label, id] : labels) poset.add_label(label, poset.index_of(id));
  return std::make_shared<const ContextPoset>(std::move(poset));
}

}  // namespace tqt
