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

#include "tqt/commands.hpp"

#include <cmath>
#include <cstdlib>
#include <regex>

#include "tqt/ks.hpp"
#include "tqt/qvalue.hpp"
#include "tqt/report.hpp"

namespace tqt {

using nlohmann::json;

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"contexts", "daseinise", "truth", "bracket",
                                              "ks",       "qvalue",    "composite"};
  return names;
}

TolerancePolicy resolve_tolerance(const TolerancePolicy& scenario, std::optional<double> cli, const char* env_value) {
  TolerancePolicy tol = scenario;
  if (cli) {
    tol.eps_matrix = *cli;
  } else if (env_value && *env_value) {
    char* end = nullptr;
    const double v = std::strtod(env_value, &end);
    if (end == env_value || *end != '\0') throw UsageError("TQT_TOLERANCE is not a number: " + std::string(env_value));
    tol.eps_matrix = v;
  }
  tol.validate();
  return tol;
}

Proposition parse_proposition(const std::string& text) {
  static const std::regex head(R"(^\s*([A-Za-z_][A-Za-z0-9_.\-]*)\s+in\s+(.*)$)");
  static const std::regex interval(R"(\[\s*([^,\]\s]+)\s*,\s*([^\]\s]+)\s*\])");
  std::smatch m;
  if (!std::regex_match(text, m, head)) throw UsageError("proposition must read 'A in [a,b]': " + text);
  Proposition p{m[1].str(), {}};
  const std::string rest = m[2].str();
  std::size_t pos = 0;
  for (std::sregex_iterator it(rest.begin(), rest.end(), interval), end; it != end; ++it) {
    std::string gap = rest.substr(pos, static_cast<std::size_t>(it->position()) - pos);
    gap.erase(std::remove_if(gap.begin(), gap.end(), [](unsigned char c) { return std::isspace(c); }), gap.end());
    if (!(p.intervals.empty() ? gap.empty() : (gap == "or" || gap == "u")))
      throw UsageError("unexpected text '" + gap + "' in proposition");
    auto num = [&](const std::string& s) {
      char* e = nullptr;
      const double v = std::strtod(s.c_str(), &e);
      if (e == s.c_str() || *e != '\0') throw UsageError("bad interval bound '" + s + "'");
      return v;
    };
    const Interval iv{num((*it)[1].str()), num((*it)[2].str())};
    if (iv.lo > iv.hi) throw UsageError("empty interval in proposition");
    p.intervals.push_back(iv);
    pos = static_cast<std::size_t>(it->position() + it->length());
  }
  std::string tail = rest.substr(pos);
  tail.erase(std::remove_if(tail.begin(), tail.end(), [](unsigned char c) { return std::isspace(c); }), tail.end());
  if (p.intervals.empty() || !tail.empty()) throw UsageError("proposition must read 'A in [a,b]': " + text);
  return p;
}

Projection proposition_projection(const Scenario& s, const Proposition& p) {
  const HermitianOperator& a = s.op(p.op);
  Projection out = Projection::zero(a.dim());
  for (const auto& iv : p.intervals) out = join(out, proposition_projector(a, iv, s.tol), s.tol);
  return out;
}

namespace {

json header(const CommandOptions& opts, const Scenario& s, const ContextPoset* poset) {
  json h{{"tool", {{"name", "tqt"}, {"version", kToolVersion}}},
         {"command", opts.command},
         {"scenario", {{"name", s.name}, {"fingerprint", fnv1a_hex(canonical_json(scenario_to_json(s)).dump())}}},
         {"tolerance", tolerance_json(s.tol)}};
  if (poset) h["poset"] = poset_json(*poset);
  return h;
}

std::vector<std::size_t> stages(const ContextPoset& poset, const CommandOptions& opts) {
  if (opts.stage) return {poset.resolve(*opts.stage)};
  std::vector<std::size_t> all(poset.size());
  for (std::size_t v = 0; v < poset.size(); ++v) all[v] = v;
  return all;
}

const std::string& need(const std::optional<std::string>& v, const char* flag, const std::string& command) {
  if (!v) throw UsageError(command + " requires " + flag);
  return *v;
}

json stage_ref(const ContextPoset& poset, std::size_t v) {
  return {{"id", poset.at(v).id()}, {"name", context_name(poset, v)}};
}

json fn_json(const ContextPoset& poset, const DownsetFn& f) {
  json out = json::object();
  for (std::size_t i = 0; i < f.domain().size(); ++i) out[poset.at(f.domain()[i]).id()] = f.values()[i];
  return out;
}

std::vector<std::size_t> mask_blocks(BlockMask m) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < 64; ++i)
    if (m >> i & 1U) out.push_back(i);
  return out;
}

std::optional<Projection> as_projection(const HermitianOperator& a, const TolerancePolicy& tol) {
  try {
    return Projection(a.matrix(), tol);
  } catch (const Error&) {
    return std::nullopt;
  }
}

json cmd_contexts(const CommandOptions& opts, const Scenario& s) {
  const PosetPtr poset = scenario_poset(s);
  json r = header(opts, s, poset.get());
  json downsets = json::object();
  json maximal = json::array();
  for (std::size_t v = 0; v < poset->size(); ++v) {
    downsets[poset->at(v).id()] = sieve_ids(*poset, principal_sieve(*poset, v));
    if (poset->upset(v).size() == 1) maximal.push_back(poset->at(v).id());
  }
  r["results"] = {{"count", poset->size()}, {"maximal", maximal}, {"downsets", downsets}};
  return r;
}

json cmd_daseinise(const CommandOptions& opts, const Scenario& s) {
  if (opts.mode != "outer" && opts.mode != "inner") throw UsageError("--mode must be outer or inner");
  const DasMode mode = opts.mode == "outer" ? DasMode::Outer : DasMode::Inner;
  const PosetPtr poset = scenario_poset(s);
  json r = header(opts, s, poset.get());
  json per = json::array();
  json target;
  if (opts.prop) {
    const Proposition prop = parse_proposition(*opts.prop);
    const Projection p = proposition_projection(s, prop);
    target = {{"kind", "proposition"}, {"text", *opts.prop}, {"projection", matrix_json(p.matrix())}};
    for (std::size_t v : stages(*poset, opts)) {
      const BlockMask m = mode == DasMode::Outer ? outer_das_mask(p, poset->at(v), s.tol)
                                                 : inner_das_mask(p, poset->at(v), s.tol);
      per.push_back({{"context", stage_ref(*poset, v)},
                     {"blocks", mask_blocks(m)},
                     {"projection", matrix_json(poset->at(v).lattice_element(m).matrix())}});
    }
  } else {
    const std::string& name = need(opts.op, "--op or --prop", opts.command);
    const HermitianOperator& a = s.op(name);
    target = {{"kind", as_projection(a, s.tol) ? "projection" : "operator"},
              {"name", name},
              {"matrix", matrix_json(a.matrix())}};
    for (std::size_t v : stages(*poset, opts)) {
      const HermitianOperator d =
          mode == DasMode::Outer ? outer_das_sa(a, poset->at(v), s.tol) : inner_das_sa(a, poset->at(v), s.tol);
      const bool bound = mode == DasMode::Outer ? spectral_order_leq(a, d, s.tol) : spectral_order_leq(d, a, s.tol);
      per.push_back({{"context", stage_ref(*poset, v)},
                     {"operator", matrix_json(d.matrix())},
                     {"bounds_operator_in_spectral_order", bound}});
    }
  }
  r["results"] = {{"mode", opts.mode}, {"target", target}, {"per_context", per}};
  return r;
}

json cmd_truth(const CommandOptions& opts, const Scenario& s) {
  const Proposition prop = parse_proposition(need(opts.prop, "--prop", opts.command));
  const std::string& sname = need(opts.state, "--state", opts.command);
  const StateVector& psi = s.state(sname);
  const Projection p = proposition_projection(s, prop);
  const PosetPtr poset = scenario_poset(s);
  const PresheafPtr sigma = spectral_presheaf(poset);
  const PseudoState w = pseudo_state(psi, sigma, s.tol);
  const TruthObject t = truth_object(psi, poset, s.tol);
  json r = header(opts, s, poset.get());
  json per = json::array();
  for (std::size_t v : stages(*poset, opts)) {
    const Sieve direct = truth_value(p, psi, v, *poset, s.tol);
    const Sieve subset = truth_value_subset(p, w, v, *poset, s.tol);
    const auto probs = truth_probabilities(p, psi, v, *poset, s.tol);
    json pj = json::object();
    json near = json::array();
    const auto& down = poset->downset(v);
    for (std::size_t i = 0; i < down.size(); ++i) {
      pj[poset->at(down[i]).id()] = probs[i];
      const double gap = std::abs(probs[i] - 1.0);
      if (gap >= 0.1 * s.tol.eps_prob && gap < 10.0 * s.tol.eps_prob) near.push_back(poset->at(down[i]).id());
    }
    std::sort(near.begin(), near.end());
    per.push_back({{"stage", stage_ref(*poset, v)},
                   {"sieve", sieve_json(*poset, direct)},
                   {"principal", direct == principal_sieve(*poset, v)},
                   {"subset_form_agrees", direct == subset},
                   {"probabilities", pj},
                   {"near_threshold", near}});
  }
  json wj = json::object();
  for (std::size_t v = 0; v < poset->size(); ++v) wj[poset->at(v).id()] = mask_blocks(w.section.values[v]);
  const auto bad = validate_truth_object(t, s.tol);
  r["results"] = {{"proposition", *opts.prop},
                  {"projection", matrix_json(p.matrix())},
                  {"state", sname},
                  {"pseudo_state_blocks", wj},
                  {"truth_object_valid", !bad.has_value()},
                  {"per_stage", per}};
  return r;
}

json cmd_bracket(const CommandOptions& opts, const Scenario& s) {
  const std::string& name = need(opts.op, "--op", opts.command);
  const HermitianOperator& a = s.op(name);
  json r = header(opts, s, nullptr);
  json per = json::array();
  for (const auto& [sname, psi] : s.states) {
    if (opts.state && *opts.state != sname) continue;
    const Bracket b = expectation_bracket(a, psi, s.tol);
    per.push_back({{"state", sname},
                   {"lower", b.lower},
                   {"mean", b.mean},
                   {"upper", b.upper},
                   {"ordered", b.lower <= b.mean + s.tol.eps_eig && b.mean <= b.upper + s.tol.eps_eig},
                   {"collapsed", std::abs(b.upper - b.lower) <= s.tol.eps_eig}});
  }
  if (opts.state && per.empty()) s.state(*opts.state);
  r["results"] = {{"operator", name}, {"per_state", per}};
  return r;
}

json section_json(const ContextPoset& poset, const Section& sec) {
  json out = json::object();
  for (std::size_t v = 0; v < sec.size(); ++v) out[poset.at(v).id()] = sec[v];
  return out;
}

json cmd_ks(const CommandOptions& opts, const Scenario& s) {
  std::optional<std::string> wref = opts.witness ? opts.witness : s.witness;
  std::optional<WitnessSet> witness;
  PosetPtr poset;
  if (wref) {
    witness = load_witness_ref(*wref);
    poset = std::make_shared<const ContextPoset>(ks_poset_from_witness(*witness, s.tol));
  } else {
    poset = scenario_poset(s);
  }
  const PresheafPtr sigma = spectral_presheaf(poset);
  const SearchCertificate cert = section_search(*sigma, 100000);
  const SearchCertificate dual = section_search(*dual_presheaf(poset), 1);
  json r = header(opts, s, poset.get());
  json cj{{"outcome", cert.found ? "section found" : (cert.complete ? "exhausted" : "stopped")},
          {"sections", cert.sections},
          {"complete", cert.complete},
          {"nodes", cert.nodes},
          {"prunes", cert.prunes},
          {"fingerprint", cert.fingerprint}};
  if (cert.section) cj["section"] = section_json(*poset, *cert.section);
  json res{{"certificate", cj}, {"dual_presheaf_agrees", dual.found == cert.found}};
  if (witness) {
    const ParityVerdict pv = parity_oracle(*witness);
    res["witness"] = {{"name", witness->name},
                      {"dimension", witness->dim},
                      {"rays", witness->rays.size()},
                      {"bases", witness->bases.size()},
                      {"provenance", "standard literature data"}};
    res["parity_oracle"] = {{"applies", pv.applies},
                            {"basis_count", pv.basis_count},
                            {"incidence", pv.incidence},
                            {"agrees", !pv.applies || !cert.found}};
  } else if (cert.section && !s.operators.empty()) {
    std::vector<std::pair<std::string, HermitianOperator>> in_scope;
    for (const auto& [n, a] : s.operators)
      for (std::size_t v = 0; v < poset->size(); ++v)
        if (poset->at(v).contains(a.matrix(), s.tol)) {
          in_scope.emplace_back(n, a);
          break;
        }
    const auto violation = func_check(*poset, *cert.section, in_scope, {"square", [](double x) { return x * x; }}, s.tol);
    res["func_check"] = {{"function", "square"}, {"ok", !violation}, {"detail", violation.value_or("")}};
  }
  r["results"] = res;
  return r;
}

json cmd_qvalue(const CommandOptions& opts, const Scenario& s) {
  const std::string& name = need(opts.op, "--op", opts.command);
  const HermitianOperator& a = s.op(name);
  const PosetPtr poset = scenario_poset(s);
  const QuantityArrow q = breve_pair(a, poset, s.tol);
  const auto disp = intrinsic_dispersion(a, poset, s.tol);
  json r = header(opts, s, poset.get());
  json per = json::array();
  for (std::size_t v : stages(*poset, opts))
    for (std::size_t b = 0; b < poset->at(v).size(); ++b) {
      const KPair& d = disp[v][b];
      per.push_back({{"stage", stage_ref(*poset, v)},
                     {"block", b},
                     {"inner", fn_json(*poset, q.inner[v][b].fn())},
                     {"outer", fn_json(*poset, q.outer[v][b].fn())},
                     {"dispersion",
                      {{"nu", fn_json(*poset, d.nu.fn())},
                       {"kappa", fn_json(*poset, d.kappa.fn())},
                       {"difference", fn_json(*poset, d.difference())}}}});
    }
  json distinct = json::array();
  json same = json::array();
  for (const auto& [other, b] : s.operators) {
    if (other == name) continue;
    (arrows_equal(q, breve_pair(b, poset, s.tol), s.tol.eps_eig) ? same : distinct).push_back(other);
  }
  json res{{"operator", name},
           {"naturality_ok", !validate_naturality(q, s.tol.eps_eig)},
           {"per_stage_and_block", per},
           {"arrows_differ_from", distinct},
           {"arrows_coincide_with", same},
           {"note", "whether the quotient pair determines the operator is open; the comparison above is evidence "
                    "over this poset only"}};
  if (opts.state) {
    const PresheafPtr sigma = spectral_presheaf(poset);
    const PseudoState w = pseudo_state(s.state(*opts.state), sigma, s.tol);
    const ValueInState vis = value_in_state(q, w.clopen);
    json vj = json::object();
    for (std::size_t v = 0; v < poset->size(); ++v) {
      json pairs = json::array();
      for (std::size_t k = 0; k < vis.values[v].size(); ++k)
        pairs.push_back({{"block", vis.blocks[v][k]},
                         {"mu", fn_json(*poset, vis.values[v][k].mu.fn())},
                         {"nu", fn_json(*poset, vis.values[v][k].nu.fn())}});
      vj[poset->at(v).id()] = pairs;
    }
    res["value_in_state"] = {{"state", *opts.state},
                             {"values", vj},
                             {"restriction_closed", !validate_value_in_state(q, vis, s.tol.eps_eig)}};
  }
  r["results"] = res;
  return r;
}

json floor_json(const Context& f) {
  json blocks = json::array();
  for (const auto& b : f.blocks()) blocks.push_back(matrix_json(b.matrix()));
  return {{"id", f.id()}, {"trivial", f.is_trivial()}, {"blocks", blocks}};
}

json cmd_composite(const CommandOptions& opts, const Scenario& s) {
  if (!s.composite) throw UsageError("scenario declares no composite system");
  const CompositeDecl& c = *s.composite;
  const PosetPtr poset = composite_poset(c, s.tol);
  json r = header(opts, s, poset.get());
  std::vector<std::pair<std::string, HermitianOperator>> firsts;
  for (const auto& [n, a] : c.first.operators)
    if (!opts.op || *opts.op == n) firsts.emplace_back(n, a);
  if (firsts.empty()) throw UsageError("no first-factor operator selected");
  json per_op = json::array();
  if (c.kind == CompositeKind::Tensor) {
    bool monotone = true;
    std::vector<Context> floors;
    for (std::size_t w = 0; w < poset->size(); ++w)
      floors.push_back(tensor_floor(poset->at(w), c.first.dim, c.second.dim, s.tol));
    for (std::size_t a = 0; a < poset->size(); ++a)
      for (std::size_t b = 0; b < poset->size(); ++b)
        if (poset->leq(a, b) && !is_subcontext(floors[a], floors[b], s.tol)) monotone = false;
    for (const auto& [n, a1] : firsts) {
      const GapSearch g = translation_gap_witness(a1, *poset, c.second.dim, s.tol);
      json recs = json::array();
      for (const auto& rec : g.records)
        recs.push_back({{"context", stage_ref(*poset, rec.context)},
                        {"floor", floor_json(rec.floor)},
                        {"direct", matrix_json(rec.comparison.direct)},
                        {"translated", matrix_json(rec.comparison.translated)},
                        {"difference", rec.comparison.discrepancy},
                        {"equal", rec.comparison.equal}});
      json wit = g.witness ? stage_ref(*poset, g.records[*g.witness].context) : json(nullptr);
      per_op.push_back({{"operator", n}, {"records", recs}, {"gap_witness", wit}});
    }
    r["results"] = {{"kind", "tensor"}, {"floor_monotone", monotone}, {"per_operator", per_op}};
    return r;
  }
  const auto v1s = factor_contexts(c.first, s.tol);
  const auto v2s = factor_contexts(c.second, s.tol);
  for (const auto& [n, a1] : firsts)
    for (const auto& [n2, a2] : c.second.operators) {
      json mrec = json::array();
      for (std::size_t i = 0; i < v1s.size(); ++i) {
        const TranslationRecord t = direct_sum_translate(a1, a2, v1s[i], s.tol);
        mrec.push_back({{"context", v1s[i].id()}, {"difference", t.discrepancy}, {"equal", t.equal},
                        {"direct", matrix_json(t.direct)}});
      }
      json lemma = json::array();
      for (const auto& x : v1s)
        for (const auto& y : v2s)
          for (DasMode m : {DasMode::Outer, DasMode::Inner}) {
            const TranslationRecord t = direct_sum_lemma(a1, a2, x, y, m, s.tol);
            lemma.push_back({{"first", x.id()}, {"second", y.id()}, {"mode", m == DasMode::Outer ? "outer" : "inner"},
                             {"difference", t.discrepancy}, {"equal", t.equal}});
          }
      per_op.push_back({{"first", n}, {"second", n2}, {"m_functor", mrec}, {"lemma", lemma}});
    }
  r["results"] = {{"kind", "direct_sum"}, {"per_operator_pair", per_op}};
  return r;
}

}  // namespace

json dispatch(const CommandOptions& opts, const Scenario& s) {
  if (opts.command == "contexts") return cmd_contexts(opts, s);
  if (opts.command == "daseinise") return cmd_daseinise(opts, s);
  if (opts.command == "truth") return cmd_truth(opts, s);
  if (opts.command == "bracket") return cmd_bracket(opts, s);
  if (opts.command == "ks") return cmd_ks(opts, s);
  if (opts.command == "qvalue") return cmd_qvalue(opts, s);
  if (opts.command == "composite") return cmd_composite(opts, s);
  throw Error(ErrorCode::UnknownCommand, "'" + opts.command + "'");
}

}  // namespace tqt
