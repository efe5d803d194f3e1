#include "evs/report.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "evs/axioms.hpp"
#include "evs/basis.hpp"
#include "evs/core_ops.hpp"
#include "evs/families.hpp"
#include "evs/morphisms.hpp"
#include "evs/table.hpp"
#include "evs/testing_sets.hpp"

namespace evs {

using nlohmann::json;

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

LoadedInstance load_instance(const json& document) {
  LoadedInstance li;
  if (document.is_object() && document.contains("family")) {
    li.instance = make_family(document.at("family"));
    li.document = json{{"family", document.at("family")}};
  } else {
    li.instance = TableEvs::from_json(document);
    li.document = document;
  }
  li.digest = fnv1a_hex(li.document.dump());
  return li;
}

Element parse_element_for(const Evs& X, const std::string& text) {
  std::optional<Element> parsed;
  try {
    parsed = parse_element_literal(X.field(), text);
  } catch (const InputError&) {
  }
  if (parsed && X.contains(*parsed)) return *parsed;
  // bare integers double as carrier indices on abstract tables
  if (!text.empty() && text.find_first_not_of("0123456789") == std::string::npos) {
    Element idx = Element::index(static_cast<std::uint32_t>(std::stoul(text)));
    if (X.contains(idx)) return idx;
  }
  if (!parsed) throw InputError("cannot parse element '" + text + "'");
  throw InputError("element '" + text + "' is outside " + X.describe());
}

namespace {

std::string trimmed(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\n\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\n\r");
  return s.substr(b, e - b + 1);
}

int bracket_step(char c) {
  if (c == '{' || c == '(' || c == '[') return 1;
  if (c == '}' || c == ')' || c == ']') return -1;
  return 0;
}

}  // namespace

std::vector<std::string> split_set_literal(const std::string& text) {
  std::string t = trimmed(text);
  if (t.size() >= 2 && t.front() == '{' && t.back() == '}') {
    // the leading brace must close at the very end, otherwise the braces
    // belong to an element literal, not the set
    int depth = 0;
    bool outer = true;
    for (std::size_t i = 0; i < t.size(); ++i) {
      depth += bracket_step(t[i]);
      if (depth == 0 && i + 1 != t.size()) {
        outer = false;
        break;
      }
    }
    if (outer) {
      std::vector<std::string> items;
      std::string cur;
      depth = 0;
      for (std::size_t i = 1; i + 1 < t.size(); ++i) {
        char c = t[i];
        depth += bracket_step(c);
        if (c == ',' && depth == 0) {
          items.push_back(trimmed(cur));
          cur.clear();
        } else {
          cur += c;
        }
      }
      if (!trimmed(cur).empty()) items.push_back(trimmed(cur));
      std::vector<std::string> kept;
      for (std::string& s : items)
        if (!s.empty()) kept.push_back(std::move(s));
      return kept;
    }
  }
  return {t};
}

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr const char* kSchema = "evs-report/1";

struct Args {
  std::string file, family;
  int n = -1, m = -1, p = -1, dim = -1, bound = -1, base_n = -1;
  std::string field_kind;
  int grid_bound = -1;
  std::uint64_t seed = 0;
  std::size_t samples = 1000;
  std::size_t budget = 200000;
  std::size_t limit = 64;
  std::string format = "human";
  std::string mode = "auto";
  bool timing = false;
  bool find_iso = false;
  bool transport = false;
  std::string x, y, z, alpha, point;
  std::vector<std::string> set_items;
  long gamma = -1, delta = -1;
};

struct Ctx {
  const Args& a;
  std::string verb;
  std::vector<std::string> argv;
  json options = json::object();
  std::optional<LoadedInstance> li = {};
  std::string describe_override = {};
  json result = {};
  std::string verdict = "pass";
  int exit_code = 0;
  std::vector<std::string> lines = {};
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
};

CommandOutcome finish(Ctx& c) {
  json r{{"schema", kSchema},
         {"tool", json{{"name", "evs"}, {"version", kVersion}}},
         {"command", json{{"verb", c.verb},
                          {"argv", json(c.argv)},
                          {"options", c.options}}},
         {"seed", c.a.seed},
         {"result", c.result},
         {"verdict", c.verdict},
         {"exit_code", c.exit_code}};
  if (c.li)
    r["instance"] = json{{"describe", c.describe_override.empty()
                                          ? c.li->instance->describe()
                                          : c.describe_override},
                         {"digest", c.li->digest},
                         {"finite", c.li->instance->finite()}};
  if (c.a.timing) {
    auto us = std::chrono::duration_cast<std::chrono::microseconds>(
                  std::chrono::steady_clock::now() - c.t0)
                  .count();
    r["timing_ms"] = static_cast<double>(us) / 1000.0;
    c.lines.push_back("elapsed: " + std::to_string(us / 1000) + " ms");
  }
  CommandOutcome out;
  out.exit_code = c.exit_code;
  out.machine = std::move(r);
  out.format = c.a.format;
  for (const std::string& l : c.lines) {
    out.human += l;
    out.human += '\n';
  }
  return out;
}

CommandOutcome error_out(Ctx& c, const char* type, const std::string& msg, int code) {
  c.exit_code = code;
  c.verdict = type;
  c.result = json{{"error", json{{"message", msg}, {"type", type}}}};
  c.lines = {std::string(type) + ": " + msg};
  return finish(c);
}

json read_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    json doc;
    in >> doc;
    return doc;
  } catch (const json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

json family_from_flags(const Args& a) {
  json fam{{"tag", a.family}};
  if (a.n >= 0) fam["n"] = a.n;
  if (a.m >= 0) fam["m"] = a.m;
  if (a.dim >= 0) fam["dim"] = a.dim;
  if (a.bound >= 0) fam["bound"] = a.bound;
  if (!a.field_kind.empty()) {
    json fj{{"kind", a.field_kind}};
    if (a.field_kind == "gf") {
      if (a.p < 0) throw InputError("--field gf needs --p");
      fj["p"] = a.p;
    }
    fam["field"] = fj;
  } else if (a.p >= 0) {
    fam["p"] = a.p;
  }
  if (a.base_n >= 0) fam["base"] = json{{"tag", "ray_product"}, {"n", a.base_n}};
  if (a.grid_bound >= 0) fam["grid"] = json{{"max_abs", a.grid_bound}};
  return fam;
}

void resolve_instance(Ctx& c) {
  const Args& a = c.a;
  if (!a.file.empty() && !a.family.empty())
    throw InputError("give --file or --family, not both");
  json doc;
  if (!a.file.empty())
    doc = read_document(a.file);
  else if (!a.family.empty())
    doc = json{{"family", family_from_flags(a)}};
  else
    throw InputError(c.verb + " needs an instance: --file or --family");
  c.li = load_instance(doc);
}

ValidateOptions make_opt(const Args& a, const Evs& X) {
  ValidateOptions o;
  o.seed = a.seed;
  o.trials = a.samples;
  if (a.mode == "exhaustive")
    o.mode = ValidateOptions::Mode::exhaustive;
  else if (a.mode == "sampled")
    o.mode = ValidateOptions::Mode::sampled;
  else
    o.mode = X.finite() ? ValidateOptions::Mode::exhaustive
                        : ValidateOptions::Mode::sampled;
  return o;
}

const char* mode_name(ValidateOptions::Mode m) {
  return m == ValidateOptions::Mode::exhaustive ? "exhaustive" : "sampled";
}

void echo_opt(Ctx& c, const ValidateOptions& o) {
  c.options["mode"] = mode_name(o.mode);
  c.options["samples"] = o.trials;
  c.options["seed"] = o.seed;
}

std::string join_elements(const std::vector<Element>& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += v[i].to_string();
  }
  return s + "}";
}

std::vector<Element> parse_set(const Evs& X, const std::vector<std::string>& occurrences) {
  std::vector<Element> out;
  for (const std::string& occ : occurrences)
    for (const std::string& lit : split_set_literal(occ))
      out.push_back(parse_element_for(X, lit));
  return out;
}

const char* verdict_word(const AxiomVerdict& v) {
  switch (v.status) {
    case AxiomVerdict::Status::pass: return "pass";
    case AxiomVerdict::Status::sampled_pass: return "pass (sampled)";
    default: return "fail";
  }
}

void verdict_lines(Ctx& c, const std::string& label, const AxiomVerdict& v) {
  c.lines.push_back(label + ": " + verdict_word(v));
  if (v.witness) c.lines.push_back("  witness: " + v.witness->to_string());
}

// --- verb handlers ---------------------------------------------------------

void do_validate(Ctx& c) {
  resolve_instance(c);
  const Evs& X = *c.li->instance;
  ValidateOptions opt = make_opt(c.a, X);
  echo_opt(c, opt);
  AxiomReport rep = validate_axioms(X, opt);
  c.result = rep.to_json();
  bool ok = rep.all_pass();
  c.verdict = ok ? "pass" : "fail";
  c.exit_code = ok ? 0 : 2;
  c.lines.push_back(c.verdict);
  for (const auto& [slot, v] : rep.verdicts) verdict_lines(c, slot, v);
}

void do_x0(Ctx& c) {
  resolve_instance(c);
  const Evs& X = *c.li->instance;
  ValidateOptions opt = make_opt(c.a, X);
  echo_opt(c, opt);
  PrimitiveSpace ps = primitive_space(X, opt);
  c.result = ps.to_json();
  c.lines.push_back("dimension: " + ps.dimension_string());
  if (ps.elements)
    c.lines.push_back("elements: " + join_elements(*ps.elements));
  else
    c.lines.push_back(ps.description);
}

void do_primitives(Ctx& c) {
  resolve_instance(c);
  const Evs& X = *c.li->instance;
  c.options["x"] = c.a.x;
  PrimitiveSet s = primitives_of(X, parse_element_for(X, c.a.x));
  c.result = s.to_json();
  c.lines.push_back(join_elements(s.elements));
}

void do_testing_set(Ctx& c) {
  resolve_instance(c);
  const Evs& X = *c.li->instance;
  c.options["x"] = c.a.x;
  Element x = parse_element_for(X, c.a.x);
  if (!c.a.z.empty()) {
    c.options["z"] = c.a.z;
    Element z = parse_element_for(X, c.a.z);
    bool member = testing_set_membership(X, x, z);
    c.result = json{{"base", x.to_json()}, {"probe", z.to_json()}, {"member", member}};
    c.verdict = member ? "true" : "false";
    c.exit_code = member ? 0 : 2;
    c.lines.push_back(c.verdict);
    return;
  }
  TestingSet t = testing_set(X, x);
  c.result = t.to_json();
  if (t.elements)
    c.lines.push_back(join_elements(*t.elements));
  else
    c.lines.push_back("membership by rule (" + t.scope + ")");
}

void do_independent(Ctx& c) {
  resolve_instance(c);
  const Evs& X = *c.li->instance;
  c.options["set"] = json(c.a.set_items);
  IndependenceReport rep = is_orderly_independent_set(X, parse_set(X, c.a.set_items));
  c.result = rep.to_json();
  c.verdict = rep.independent ? "true" : "false";
  c.exit_code = rep.independent ? 0 : 2;
  c.lines.push_back(c.verdict);
  if (rep.witness)
    c.lines.push_back("  dependent pair: " + rep.witness->first.to_string() + ", " +
                      rep.witness->second.to_string() + " (" + rep.direction + ")");
}

void do_generator(Ctx& c) {
  resolve_instance(c);
  const Evs& X = *c.li->instance;
  ValidateOptions opt = make_opt(c.a, X);
  echo_opt(c, opt);
  c.options["set"] = json(c.a.set_items);
  GeneratorReport rep = is_generator(X, parse_set(X, c.a.set_items), opt);
  c.result = rep.to_json();
  bool ok = rep.ok();
  c.verdict = ok ? "true" : "false";
  c.exit_code = ok ? 0 : 2;
  c.lines.push_back(c.verdict);
  if (rep.uncovered) c.lines.push_back("  uncovered: " + rep.uncovered->to_string());
}

void do_qset(Ctx& c) {
  resolve_instance(c);
  const Evs& X = *c.li->instance;
  if (!c.a.x.empty()) {
    c.options["x"] = c.a.x;
    Element x = parse_element_for(X, c.a.x);
    bool member = feasible_membership(X, x);
    c.result = json{{"x", x.to_json()}, {"member", member}};
    c.verdict = member ? "true" : "false";
    c.exit_code = member ? 0 : 2;
    c.lines.push_back(c.verdict);
    return;
  }
  FeasibleSet q = feasible_set(X);
  c.result = q.to_json();
  if (q.elements)
    c.lines.push_back(join_elements(*q.elements));
  else
    c.lines.push_back("membership by rule (" + q.owner + ")");
}

void do_basis(Ctx& c) {
  resolve_instance(c);
  const Evs& X = *c.li->instance;
  ValidateOptions opt = make_opt(c.a, X);
  echo_opt(c, opt);
  FindBasisOutcome out = find_basis(X, opt);
  c.result = out.to_json();
  switch (out.kind) {
    case FindBasisOutcome::Kind::found:
      c.verdict = "found";
      c.lines.push_back("basis: " + join_elements(out.certificate->basis));
      c.lines.push_back("dimension: " + out.certificate->dimension.to_string());
      break;
    case FindBasisOutcome::Kind::no_basis:
      c.verdict = "no-basis";
      c.lines.push_back(out.note.empty() ? "no-basis" : "no-basis (" + out.note + ")");
      break;
    default:
      c.verdict = "undecided";
      c.exit_code = 4;
      c.lines.push_back("undecided: " + out.note);
  }
}

void do_enumerate_bases(Ctx& c) {
  resolve_instance(c);
  const Evs& X = *c.li->instance;
  c.options["limit"] = c.a.limit;
  std::vector<BasisCertificate> all = enumerate_bases(X, c.a.limit);
  json bases = json::array();
  for (const BasisCertificate& b : all) {
    json row{{"dimension", b.dimension.to_string()}};
    json members = json::array();
    for (const Element& e : b.basis) members.push_back(e.to_json());
    row["basis"] = members;
    bases.push_back(row);
  }
  c.result = json{{"count", all.size()}, {"bases", bases}};
  c.lines.push_back("count: " + std::to_string(all.size()));
  for (const BasisCertificate& b : all) c.lines.push_back(join_elements(b.basis));
}

void do_dimension(Ctx& c) {
  resolve_instance(c);
  const Evs& X = *c.li->instance;
  ValidateOptions opt = make_opt(c.a, X);
  echo_opt(c, opt);
  DimensionDescriptor d = dimension(X, opt);
  c.result = d.to_json();
  c.verdict = d.to_string();
  c.lines.push_back(d.to_string());
}

// find_basis gate shared by replace/transform/graded subevs
BasisCertificate need_basis(const Evs& X, const ValidateOptions& opt) {
  FindBasisOutcome out = find_basis(X, opt);
  if (out.kind == FindBasisOutcome::Kind::no_basis)
    throw InputError(X.describe() + " has no basis (" + out.note + ")");
  if (out.kind == FindBasisOutcome::Kind::undecided) throw Undecided(out.note);
  return *out.certificate;
}

void do_replace(Ctx& c) {
  resolve_instance(c);
  const Evs& X = *c.li->instance;
  ValidateOptions opt = make_opt(c.a, X);
  echo_opt(c, opt);
  c.options["x"] = c.a.x;
  c.options["y"] = c.a.y;
  BasisCertificate base = need_basis(X, opt);
  Element x = parse_element_for(X, c.a.x);
  Element y = parse_element_for(X, c.a.y);
  BasisCertificate next = replace_basis_element(X, base, x, y, opt);
  c.result = json{{"before", join_elements(base.basis)}, {"basis", next.to_json()}};
  c.lines.push_back("basis: " + join_elements(next.basis));
  c.lines.push_back("dimension: " + next.dimension.to_string());
}

void do_transform(Ctx& c) {
  resolve_instance(c);
  const Evs& X = *c.li->instance;
  ValidateOptions opt = make_opt(c.a, X);
  echo_opt(c, opt);
  c.options["alpha"] = c.a.alpha;
  Scalar alpha = Scalar::parse(X.field(), c.a.alpha);
  Element p = X.zero();
  if (!c.a.point.empty()) {
    c.options["point"] = c.a.point;
    p = parse_element_for(X, c.a.point);
  }
  BasisCertificate base = need_basis(X, opt);
  BasisCertificate next = transform_basis(X, base, alpha, p, opt);
  c.result = json{{"alpha", alpha.to_json()},
                  {"point", p.to_json()},
                  {"before", join_elements(base.basis)},
                  {"basis", next.to_json()}};
  c.lines.push_back("basis: " + join_elements(next.basis));
  c.lines.push_back("dimension: " + next.dimension.to_string());
}

void do_subevs(Ctx& c) {
  resolve_instance(c);
  EvsPtr X = c.li->instance;
  ValidateOptions opt = make_opt(c.a, *X);
  echo_opt(c, opt);
  bool graded = c.a.gamma >= 0 || c.a.delta >= 0;
  if (!c.a.x.empty() && graded)
    throw InputError("give --x or --gamma/--delta, not both");
  SubEvsView view = [&] {
    if (!c.a.x.empty()) {
      c.options["x"] = c.a.x;
      return construct_Bx_subevs(X, parse_element_for(*X, c.a.x), opt);
    }
    if (c.a.gamma < 0 || c.a.delta < 0)
      throw InputError("subevs needs --x or both --gamma and --delta");
    c.options["gamma"] = c.a.gamma;
    c.options["delta"] = c.a.delta;
    BasisCertificate base = need_basis(*X, opt);
    return construct_graded_subevs(X, base, static_cast<std::size_t>(c.a.gamma),
                                   static_cast<std::size_t>(c.a.delta), opt);
  }();
  c.result = view.to_json();
  c.lines.push_back("dimension: " + view.dimension.to_string());
  c.lines.push_back("view: " + view.view->describe());
}

void do_family(Ctx& c) {
  resolve_instance(c);
  const Evs& X = *c.li->instance;
  json r{{"describe", X.describe()},
         {"field", X.field().to_string()},
         {"finite", X.finite()}};
  c.lines.push_back("describe: " + X.describe());
  c.lines.push_back("field: " + X.field().to_string());
  if (X.finite()) {
    r["carrier_size"] = X.carrier_size();
    c.lines.push_back("carrier: " + std::to_string(X.carrier_size()) + " elements");
  } else {
    c.lines.push_back("carrier: infinite");
  }
  try {
    r["classification"] = classify(X).to_json();
  } catch (const Undecided& e) {
    r["classification"] = json{{"status", "undecided"}, {"note", e.what()}};
  }
  if (const FamilyOracle* o = X.oracle()) {
    json oj{{"dimension", o->dimension.to_string()},
            {"l_rule", o->l_rule},
            {"q_rule", o->q_rule}};
    if (!o->basis_note.empty()) oj["basis_note"] = o->basis_note;
    if (o->basis) {
      json b = json::array();
      for (const Element& e : *o->basis) b.push_back(e.to_json());
      oj["basis"] = b;
      c.lines.push_back("recorded basis: " + join_elements(*o->basis));
    }
    r["oracle"] = oj;
    c.lines.push_back("recorded dimension: " + o->dimension.to_string());
    c.lines.push_back("testing-set rule: " + o->l_rule);
    c.lines.push_back("feasible rule: " + o->q_rule);
  }
  c.result = std::move(r);
}

void do_counterexample(Ctx& c) {
  int bound = c.a.grid_bound >= 0 ? c.a.grid_bound : 2;
  c.options["grid-bound"] = bound;
  HCounterexample h = counterexample_H(bound);
  LoadedInstance li;
  li.instance = h.ambient;
  li.document = json{{"counterexample", json{{"bound", bound}}}};
  li.digest = fnv1a_hex(li.document.dump());
  c.li = std::move(li);
  c.result = h.to_json();
  bool shown = h.pairwise_independent && h.covers_every_grid_triple && !h.is_generator;
  c.verdict = shown ? "demonstrated" : "failed";
  c.exit_code = shown ? 0 : 2;
  c.lines.push_back(c.verdict);
  c.lines.push_back("representatives: " + std::to_string(h.representatives.size()) +
                    " (of " + std::to_string(h.three_point_sets) +
                    " three-point grid sets)");
  c.lines.push_back(std::string("pairwise independent: ") +
                    (h.pairwise_independent ? "true" : "false"));
  c.lines.push_back(std::string("covers every grid triple: ") +
                    (h.covers_every_grid_triple ? "true" : "false"));
  c.lines.push_back(std::string("generator: ") + (h.is_generator ? "true" : "false"));
  c.lines.push_back("uncovered: " + h.uncovered.to_string());
  c.lines.push_back("covered example: " + h.covered_example.to_string());
}

void do_morphism(Ctx& c) {
  if (c.a.file.empty())
    throw InputError("morphism needs --file with {source, target, morphism}");
  json doc = read_document(c.a.file);
  if (!doc.is_object() || !doc.contains("source") || !doc.contains("target"))
    throw InputError("morphism document needs 'source' and 'target' instances");
  LoadedInstance src = load_instance(doc.at("source"));
  LoadedInstance dst = load_instance(doc.at("target"));
  json canon{{"source", src.document}, {"target", dst.document}};
  if (doc.contains("morphism")) canon["morphism"] = doc.at("morphism");
  LoadedInstance li;
  li.instance = src.instance;
  li.document = canon;
  li.digest = fnv1a_hex(canon.dump());
  c.li = std::move(li);
  c.describe_override = src.instance->describe() + " -> " + dst.instance->describe();

  if (c.a.find_iso) {
    c.options["budget"] = c.a.budget;
    IsoSearchOutcome out = find_order_isomorphism(src.instance, dst.instance, c.a.budget);
    c.result = out.to_json();
    switch (out.kind) {
      case IsoSearchOutcome::Kind::found:
        c.verdict = "found";
        c.lines.push_back("order-isomorphic");
        break;
      case IsoSearchOutcome::Kind::proven_none:
        c.verdict = "none";
        c.exit_code = 2;
        c.lines.push_back("not order-isomorphic: " + out.note);
        break;
      default:
        c.verdict = "undecided";
        c.exit_code = 4;
        c.lines.push_back("undecided: " + out.note);
    }
    return;
  }

  if (!doc.contains("morphism"))
    throw InputError("morphism document needs a 'morphism' map or rule");
  MorphismSpec spec = MorphismSpec::from_json(src.instance, dst.instance, doc.at("morphism"));
  ValidateOptions opt = make_opt(c.a, *src.instance);
  echo_opt(c, opt);
  MorphismReport rep = verify_order_morphism(spec, opt);
  bool ok = rep.ok();
  c.verdict = ok ? "pass" : "fail";
  c.exit_code = ok ? 0 : 2;
  c.lines.push_back(c.verdict + std::string(" (claimed ") + rep.claimed_kind + ")");
  verdict_lines(c, "additivity", rep.additivity);
  verdict_lines(c, "homogeneity", rep.homogeneity);
  verdict_lines(c, "order", rep.order);
  verdict_lines(c, "preimage", rep.preimage);
  verdict_lines(c, "kind", rep.kind);
  if (c.a.transport && ok) {
    BasisCertificate base = need_basis(*src.instance, opt);
    BasisCertificate moved = transport_basis(spec, rep, base, opt);
    json r{{"verify", rep.to_json()}, {"transport", moved.to_json()}};
    c.lines.push_back("transported basis: " + join_elements(moved.basis));
    c.lines.push_back("dimension: " + moved.dimension.to_string());
    if (src.instance->finite() && dst.instance->finite()) {
      bool same = compare_feasible_sets(spec, rep);
      r["feasible_sets_correspond"] = same;
      c.lines.push_back(std::string("feasible sets correspond: ") +
                        (same ? "true" : "false"));
      if (!same) {
        c.verdict = "fail";
        c.exit_code = 2;
      }
    }
    c.result = std::move(r);
    return;
  }
  c.result = rep.to_json();
}

void do_report(Ctx& c) {
  resolve_instance(c);
  const Evs& X = *c.li->instance;
  ValidateOptions opt = make_opt(c.a, X);
  echo_opt(c, opt);
  auto guarded = [](auto&& fn) -> json {
    try {
      return fn();
    } catch (const Undecided& e) {
      return json{{"status", "undecided"}, {"note", e.what()}};
    } catch (const DomainError& e) {
      return json{{"status", "violation"}, {"note", e.what()}};
    }
  };
  json r;
  AxiomReport ax = validate_axioms(X, opt);
  r["axioms"] = ax.to_json();
  r["primitive_space"] = guarded([&] { return primitive_space(X, opt).to_json(); });
  r["classification"] = guarded([&] { return classify(X).to_json(); });
  if (X.finite()) r["feasible"] = guarded([&] { return feasible_set(X).to_json(); });
  std::string dim_line = "undecided";
  r["basis"] = guarded([&] {
    FindBasisOutcome fb = find_basis(X, opt);
    if (fb.kind == FindBasisOutcome::Kind::found)
      dim_line = fb.certificate->dimension.to_string();
    else if (fb.kind == FindBasisOutcome::Kind::no_basis)
      dim_line = "no-basis";
    return fb.to_json();
  });
  r["dimension"] = dim_line;
  c.result = std::move(r);
  bool ok = ax.all_pass();
  c.verdict = ok ? "pass" : "fail";
  c.exit_code = ok ? 0 : 2;
  c.lines.push_back(c.verdict);
  c.lines.push_back("dimension: " + dim_line);
  for (const std::string& slot : ax.failed_slots()) c.lines.push_back("failed: " + slot);
}

}  // namespace

CommandOutcome run_command(std::vector<std::string> args) {
  Args a;
  CLI::App app{"exact computations on exponential vector spaces"};
  app.name("evs");
  app.set_version_flag("--version", std::string("evs ") + kVersion);
  app.require_subcommand(1);

  auto instance_opts = [&](CLI::App* s) {
    s->add_option("--file", a.file, "instance document: explicit table or {\"family\": ...}");
    s->add_option("--family", a.family,
                  "family tag: ray, ray_product, cone_times_vector, evs_times_vector, "
                  "hyperspace, hyperspace_with_theta, subspace_lattice, "
                  "dictionary_power, dictionary_omega");
    s->add_option("--n", a.n, "family parameter n");
    s->add_option("--m", a.m, "family parameter m");
    s->add_option("--p", a.p, "prime: subspace_lattice order or gf modulus");
    s->add_option("--dim", a.dim, "hyperspace ambient dimension");
    s->add_option("--bound", a.bound, "hyperspace carrier bound");
    s->add_option("--base-n", a.base_n, "evs_times_vector base: ray_product(n)");
    s->add_option("--field", a.field_kind, "hyperspace scalars: rational | gf")
        ->check(CLI::IsMember({"rational", "gf"}));
    s->add_option("--grid-bound", a.grid_bound, "max |coordinate| drawn by rational samplers");
  };
  auto common_opts = [&](CLI::App* s) {
    s->add_option("--seed", a.seed, "seed for every sampled check");
    s->add_option("--samples", a.samples, "trials per sampled check");
    s->add_option("--format", a.format, "human | machine")
        ->check(CLI::IsMember({"human", "machine"}));
    s->add_flag("--timing", a.timing, "append wall-clock time (breaks byte-identity)");
  };
  auto verb = [&](const char* name, const char* desc, bool instance = true) {
    CLI::App* s = app.add_subcommand(name, desc);
    if (instance) instance_opts(s);
    common_opts(s);
    return s;
  };

  CLI::App* v;
  v = verb("validate", "check the six axiom groups");
  v->add_option("--mode", a.mode, "auto | exhaustive | sampled")
      ->check(CLI::IsMember({"auto", "exhaustive", "sampled"}));
  verb("x0", "minimal elements and their vector-space structure");
  v = verb("primitives", "minimal elements below --x");
  v->add_option("--x", a.x, "element literal")->required();
  v = verb("testing-set", "the testing set of --x; with --z, membership of z");
  v->add_option("--x", a.x, "base element")->required();
  v->add_option("--z", a.z, "probe element");
  v = verb("independent", "orderly independence of --set");
  v->add_option("--set", a.set_items, "elements, e.g. '{(1,0),(0,1)}'")->required();
  v = verb("generator", "do the testing sets of --set cover everything non-minimal");
  v->add_option("--set", a.set_items, "elements, e.g. '{{0,1}}'")->required();
  v = verb("qset", "the feasible set; with --x, membership of x");
  v->add_option("--x", a.x, "probe element");
  verb("basis", "canonical basis search");
  v = verb("enumerate-bases", "all bases of a finite instance, up to --limit");
  v->add_option("--limit", a.limit, "stop after this many");
  verb("dimension", "[evs-part : primitive-part], or no-basis");
  v = verb("replace", "swap --x out of the canonical basis for --y");
  v->add_option("--x", a.x, "basis member to drop")->required();
  v->add_option("--y", a.y, "replacement strictly below x")->required();
  v = verb("transform", "dilate the canonical basis by --alpha and translate by --point");
  v->add_option("--alpha", a.alpha, "nonzero scalar literal")->required();
  v->add_option("--point", a.point, "minimal element (default: the identity)");
  v = verb("subevs", "certified sub-instance: --x for B(x), or --gamma/--delta graded");
  v->add_option("--x", a.x, "generator of the smallest sub-instance");
  v->add_option("--gamma", a.gamma, "target evs-part dimension");
  v->add_option("--delta", a.delta, "target primitive-part dimension");
  verb("family", "summary card: field, carrier, classification, recorded rules");
  v = verb("counterexample-h", "maximal independent non-generator in the rational hyperspace", false);
  v->add_option("--grid-bound", a.grid_bound, "grid radius (default 2)");
  v = verb("morphism", "verify a structure map document; --find-iso searches instead", false);
  v->add_option("--file", a.file, "document with source, target, morphism")->required();
  v->add_flag("--find-iso", a.find_iso, "search for an order-isomorphism");
  v->add_flag("--transport", a.transport, "push the source basis through and re-verify");
  v->add_option("--budget", a.budget, "assignment attempts before giving up");
  verb("report", "axioms, primitives, feasible set, basis and dimension in one document");

  std::vector<std::string> original = args;
  std::reverse(args.begin(), args.end());
  try {
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    std::ostringstream out, err;
    app.exit(e, out, err);
    bool help = dynamic_cast<const CLI::CallForHelp*>(&e) ||
                dynamic_cast<const CLI::CallForAllHelp*>(&e) ||
                dynamic_cast<const CLI::CallForVersion*>(&e);
    CommandOutcome c;
    c.exit_code = help ? 0 : 3;
    c.format = a.format;
    c.human = out.str() + err.str();
    c.machine = json{{"schema", kSchema},
                     {"error", json{{"type", help ? "help" : "usage"},
                                    {"message", e.what()}}},
                     {"exit_code", c.exit_code}};
    return c;
  }

  Ctx c{a, app.get_subcommands().at(0)->get_name(), std::move(original)};
  try {
    if (c.verb == "validate") do_validate(c);
    else if (c.verb == "x0") do_x0(c);
    else if (c.verb == "primitives") do_primitives(c);
    else if (c.verb == "testing-set") do_testing_set(c);
    else if (c.verb == "independent") do_independent(c);
    else if (c.verb == "generator") do_generator(c);
    else if (c.verb == "qset") do_qset(c);
    else if (c.verb == "basis") do_basis(c);
    else if (c.verb == "enumerate-bases") do_enumerate_bases(c);
    else if (c.verb == "dimension") do_dimension(c);
    else if (c.verb == "replace") do_replace(c);
    else if (c.verb == "transform") do_transform(c);
    else if (c.verb == "subevs") do_subevs(c);
    else if (c.verb == "family") do_family(c);
    else if (c.verb == "counterexample-h") do_counterexample(c);
    else if (c.verb == "morphism") do_morphism(c);
    else if (c.verb == "report") do_report(c);
    else throw InputError("unknown verb " + c.verb);
  } catch (const InputError& e) {
    return error_out(c, "input-error", e.what(), 3);
  } catch (const Undecided& e) {
    return error_out(c, "undecided", e.what(), 4);
  } catch (const DomainError& e) {
    return error_out(c, "violation", e.what(), 2);
  } catch (const json::exception& e) {
    return error_out(c, "input-error", e.what(), 3);
  }
  return finish(c);
}

}  // namespace evs
