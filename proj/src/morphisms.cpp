#include "evs/morphisms.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>
#include <set>

namespace evs {
namespace {

nlohmann::json verdict_json(const AxiomVerdict& v) {
  nlohmann::json item;
  switch (v.status) {
    case AxiomVerdict::Status::pass: item["status"] = "pass"; break;
    case AxiomVerdict::Status::sampled_pass: item["status"] = "sampled-pass"; break;
    case AxiomVerdict::Status::fail: item["status"] = "fail"; break;
  }
  if (v.witness) item["witness"] = v.witness->to_json();
  return item;
}

AxiomVerdict fail_with(AxiomWitness w) {
  return {AxiomVerdict::Status::fail, std::move(w)};
}

Element parse_map_entry(const Field& f, const nlohmann::json& j) {
  if (j.is_string()) return parse_element_literal(f, j.get<std::string>());
  return element_from_json(f, j);
}

const char* rule_name(MorphismSpec::Rule r) {
  switch (r) {
    case MorphismSpec::Rule::table: return "table";
    case MorphismSpec::Rule::identity: return "identity";
    case MorphismSpec::Rule::scale: return "scale";
    case MorphismSpec::Rule::permute: return "permute";
    default: return "negate-vector";
  }
}

}  // namespace

Element MorphismSpec::apply(const Element& x) const {
  switch (rule) {
    case Rule::table: {
      auto it = graph.find(x);
      if (it == graph.end())
        throw InputError("the map table has no entry for " + x.to_string());
      return it->second;
    }
    case Rule::identity:
      return x;
    case Rule::scale:
      return target->scale(*alpha, x);
    case Rule::permute: {
      const Tuple& t = x.as_tuple();
      if (t.size() != permutation.size())
        throw InputError("permutation arity mismatch at " + x.to_string());
      Tuple out;
      for (int i : permutation) out.push_back(t[static_cast<std::size_t>(i)]);
      return Element::tuple(std::move(out));
    }
    case Rule::negate_vector: {
      Tuple t = x.as_tuple();
      for (std::size_t i = 1; i < t.size(); ++i) t[i] = t[i].neg();
      return Element::tuple(std::move(t));
    }
  }
  throw InputError("unhandled morphism rule");
}

bool MorphismSpec::invertible() const {
  if (rule != Rule::table) return true;  // every shipped rule is a bijection
  std::set<Element> values;
  for (const auto& [k, v] : graph) values.insert(v);
  return values.size() == graph.size();
}

Element MorphismSpec::apply_inverse(const Element& y) const {
  switch (rule) {
    case Rule::identity:
      return y;
    case Rule::scale:
      return target->scale(alpha->inv(), y);
    case Rule::permute: {
      const Tuple& t = y.as_tuple();
      if (t.size() != permutation.size())
        throw InputError("permutation arity mismatch at " + y.to_string());
      Tuple out(t.size(), Scalar::zero(target->field()));
      for (std::size_t i = 0; i < permutation.size(); ++i)
        out[static_cast<std::size_t>(permutation[i])] = t[i];
      return Element::tuple(std::move(out));
    }
    case Rule::negate_vector:
      return apply(y);
    case Rule::table:
      for (const auto& [k, v] : graph)
        if (v == y) return k;
      throw InputError("no table preimage for " + y.to_string());
  }
  throw InputError("unhandled morphism rule");
}

MorphismSpec MorphismSpec::from_json(EvsPtr source, EvsPtr target,
                                     const nlohmann::json& doc) {
  MorphismSpec m;
  m.source = std::move(source);
  m.target = std::move(target);
  m.claimed_kind = doc.value("claimed_kind", "morphism");
  static const std::set<std::string> kinds{"morphism", "monomorphism",
                                           "epimorphism", "isomorphism"};
  if (!kinds.count(m.claimed_kind))
    throw InputError("unknown claimed kind: " + m.claimed_kind);

  if (doc.contains("map")) {
    m.rule = Rule::table;
    for (const auto& entry : doc.at("map")) {
      if (!entry.is_array() || entry.size() != 2)
        throw InputError("map entries must be [x, f(x)] pairs");
      Element k = parse_map_entry(m.source->field(), entry[0]);
      Element v = parse_map_entry(m.target->field(), entry[1]);
      if (!m.graph.emplace(std::move(k), std::move(v)).second)
        throw InputError("duplicate map entry for " + entry[0].dump());
    }
    return m;
  }

  const std::string r = doc.value("rule", "");
  if (r == "identity") {
    m.rule = Rule::identity;
  } else if (r == "scale") {
    m.rule = Rule::scale;
    m.alpha = Scalar::from_json(m.source->field(), doc.at("alpha"));
    if (m.alpha->is_zero())
      throw InputError("a scaling morphism needs a nonzero scalar");
  } else if (r == "permute") {
    m.rule = Rule::permute;
    m.permutation = doc.at("permutation").get<std::vector<int>>();
    std::vector<int> sorted = m.permutation;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i)
      if (sorted[i] != static_cast<int>(i))
        throw InputError("the permutation must list each index exactly once");
  } else if (r == "negate-vector") {
    m.rule = Rule::negate_vector;
  } else {
    throw InputError("a morphism document needs a `map` table or a known "
                     "`rule`, got: " + doc.dump());
  }
  return m;
}

nlohmann::json MorphismSpec::to_json() const {
  nlohmann::json out{{"source", source->describe()},
                     {"target", target->describe()},
                     {"claimed_kind", claimed_kind},
                     {"rule", rule_name(rule)}};
  if (rule == Rule::table) {
    nlohmann::json map = nlohmann::json::array();
    for (const auto& [k, v] : graph)
      map.push_back(nlohmann::json::array({k.to_json(), v.to_json()}));
    out["map"] = std::move(map);
  }
  if (alpha) out["alpha"] = alpha->to_json();
  if (!permutation.empty()) out["permutation"] = permutation;
  return out;
}

bool MorphismReport::ok() const {
  return additivity.ok() && homogeneity.ok() && order.ok() && preimage.ok() &&
         kind.ok();
}

nlohmann::json MorphismReport::to_json() const {
  return {{"claimed_kind", claimed_kind},
          {"mode", mode},
          {"additivity", verdict_json(additivity)},
          {"homogeneity", verdict_json(homogeneity)},
          {"order-preservation", verdict_json(order)},
          {"preimage", verdict_json(preimage)},
          {"kind", verdict_json(kind)}};
}

namespace {

// Scalars the source declares and can apply; homogeneity is quantified over
// exactly these (a table only defines part of the rational action).
std::vector<Scalar> usable_scalars(const Evs& X) {
  std::vector<Scalar> out;
  for (const Scalar& s : X.scalar_set())
    if (X.scale_defined(s)) out.push_back(s);
  return out;
}

AxiomWitness pair_witness(const char* note, const Element& x, const Element& y,
                          const Element& fx, const Element& fy) {
  AxiomWitness w;
  w.note = note;
  w.elements = {{"x", x}, {"y", y}, {"f(x)", fx}, {"f(y)", fy}};
  return w;
}

MorphismReport verify_exhaustive(const MorphismSpec& m) {
  const Evs& X = *m.source;
  const Evs& Y = *m.target;
  MorphismReport rep;
  rep.claimed_kind = m.claimed_kind;
  rep.mode = "exhaustive";

  const std::vector<Element>& xs = X.carrier();
  std::map<Element, Element> f;
  for (const Element& x : xs) {
    Element fx = m.apply(x);
    if (!Y.contains(fx))
      throw InputError("the image of " + x.to_string() + " lies outside " +
                       Y.describe() + ": " + fx.to_string());
    f.emplace(x, std::move(fx));
  }

  // (i) additivity
  for (const Element& x : xs) {
    if (!rep.additivity.ok()) break;
    for (const Element& y : xs) {
      Element lhs = f.at(X.add(x, y));
      Element rhs = Y.add(f.at(x), f.at(y));
      if (!(lhs == rhs)) {
        AxiomWitness w = pair_witness("f(x+y) and f(x)+f(y) disagree", x, y,
                                      lhs, rhs);
        rep.additivity = fail_with(std::move(w));
        break;
      }
    }
  }

  // (ii) homogeneity
  for (const Scalar& a : usable_scalars(X)) {
    if (!rep.homogeneity.ok()) break;
    for (const Element& x : xs) {
      if (!Y.scale_defined(a)) {
        AxiomWitness w;
        w.note = "the target does not define this scalar";
        w.scalars = {{"alpha", a}};
        w.elements = {{"x", x}};
        rep.homogeneity = fail_with(std::move(w));
        break;
      }
      Element lhs = f.at(X.scale(a, x));
      Element rhs = Y.scale(a, f.at(x));
      if (!(lhs == rhs)) {
        AxiomWitness w;
        w.note = "f(alpha*x) and alpha*f(x) disagree";
        w.scalars = {{"alpha", a}};
        w.elements = {{"x", x}, {"f(alpha*x)", lhs}, {"alpha*f(x)", rhs}};
        rep.homogeneity = fail_with(std::move(w));
        break;
      }
    }
  }

  // (iii) order preservation
  for (const Element& x : xs) {
    if (!rep.order.ok()) break;
    for (const Element& y : xs) {
      if (!X.leq(x, y)) continue;
      if (!Y.leq(f.at(x), f.at(y))) {
        rep.order = fail_with(pair_witness(
            "x <= y but the images are not comparable that way", x, y,
            f.at(x), f.at(y)));
        break;
      }
    }
  }

  // (iv) the preimage bracket over comparable image pairs
  std::map<Element, std::vector<Element>> pre;
  for (const Element& x : xs) pre[f.at(x)].push_back(x);
  for (const auto& [p, pa] : pre) {
    if (!rep.preimage.ok()) break;
    for (const auto& [q, qa] : pre) {
      if (!Y.leq(p, q)) continue;
      bool bad = false;
      AxiomWitness w;
      for (const Element& a : pa) {
        bool below = std::any_of(qa.begin(), qa.end(), [&](const Element& b) {
          return X.leq(a, b);
        });
        if (!below) {
          w.note = "a preimage of p sits below no preimage of q";
          w.elements = {{"p", p}, {"q", q}, {"a", a}};
          bad = true;
          break;
        }
      }
      for (const Element& b : qa) {
        if (bad) break;
        bool above = std::any_of(pa.begin(), pa.end(), [&](const Element& a) {
          return X.leq(a, b);
        });
        if (!above) {
          w.note = "a preimage of q sits above no preimage of p";
          w.elements = {{"p", p}, {"q", q}, {"b", b}};
          bad = true;
        }
      }
      if (bad) {
        rep.preimage = fail_with(std::move(w));
        break;
      }
    }
  }

  // bijectivity per the claim
  bool want_injective = m.claimed_kind == "monomorphism" ||
                        m.claimed_kind == "isomorphism";
  bool want_surjective = m.claimed_kind == "epimorphism" ||
                         m.claimed_kind == "isomorphism";
  if (want_injective) {
    for (const auto& [img, pa] : pre)
      if (pa.size() > 1) {
        AxiomWitness w;
        w.note = "two elements share an image";
        w.elements = {{"x", pa[0]}, {"y", pa[1]}, {"f(x)", img}};
        rep.kind = fail_with(std::move(w));
        break;
      }
  }
  if (want_surjective && rep.kind.ok()) {
    for (const Element& y : Y.carrier())
      if (!pre.count(y)) {
        AxiomWitness w;
        w.note = "nothing maps onto this target element";
        w.elements = {{"y", y}};
        rep.kind = fail_with(std::move(w));
        break;
      }
  }
  return rep;
}

MorphismReport verify_sampled(const MorphismSpec& m,
                              const ValidateOptions& opt) {
  const Evs& X = *m.source;
  const Evs& Y = *m.target;
  MorphismReport rep;
  rep.claimed_kind = m.claimed_kind;
  rep.mode = "sampled";
  auto done = [&](AxiomVerdict& v) {
    if (v.status == AxiomVerdict::Status::pass)
      v.status = AxiomVerdict::Status::sampled_pass;
  };

  Rng rng(opt.seed);
  const std::vector<Scalar> scalars = usable_scalars(X);
  bool want_injective = m.claimed_kind == "monomorphism" ||
                        m.claimed_kind == "isomorphism";
  bool want_surjective = m.claimed_kind == "epimorphism" ||
                         m.claimed_kind == "isomorphism";

  for (std::size_t t = 0; t < opt.trials; ++t) {
    Element x = X.sample_one(rng);
    Element y = X.sample_one(rng);
    Element fx = m.apply(x);
    Element fy = m.apply(y);
    if (!Y.contains(fx))
      throw InputError("the image of " + x.to_string() + " lies outside " +
                       Y.describe() + ": " + fx.to_string());

    if (rep.additivity.ok()) {
      Element lhs = m.apply(X.add(x, y));
      Element rhs = Y.add(fx, fy);
      if (!(lhs == rhs))
        rep.additivity = fail_with(
            pair_witness("f(x+y) and f(x)+f(y) disagree", x, y, lhs, rhs));
    }
    if (rep.homogeneity.ok()) {
      const Scalar& a = rng.pick(scalars);
      if (Y.scale_defined(a)) {
        Element lhs = m.apply(X.scale(a, x));
        Element rhs = Y.scale(a, fx);
        if (!(lhs == rhs)) {
          AxiomWitness w;
          w.note = "f(alpha*x) and alpha*f(x) disagree";
          w.scalars = {{"alpha", a}};
          w.elements = {{"x", x}, {"f(alpha*x)", lhs}, {"alpha*f(x)", rhs}};
          rep.homogeneity = fail_with(std::move(w));
        }
      }
    }
    if (rep.order.ok()) {
      Element up = X.sample_upper(rng, x);
      if (!Y.leq(fx, m.apply(up)))
        rep.order = fail_with(pair_witness(
            "x <= y but the images are not comparable that way", x, up, fx,
            m.apply(up)));
    }
    if (rep.preimage.ok() && Y.leq(fx, fy)) {
      // Rules are bijections: the preimages are the singletons {x}, {y}.
      if (!X.leq(x, y)) {
        AxiomWitness w;
        w.note = "the images compare but the preimages do not";
        w.elements = {{"p", fx}, {"q", fy}, {"a", x}, {"b", y}};
        rep.preimage = fail_with(std::move(w));
      }
    }
    if (rep.kind.ok() && want_injective && !(x == y) && fx == fy) {
      AxiomWitness w;
      w.note = "two elements share an image";
      w.elements = {{"x", x}, {"y", y}, {"f(x)", fx}};
      rep.kind = fail_with(std::move(w));
    }
    if (rep.kind.ok() && want_surjective) {
      Element z = Y.sample_one(rng);
      Element back = m.apply_inverse(z);
      if (!X.contains(back) || !(m.apply(back) == z)) {
        AxiomWitness w;
        w.note = "the inverse rule does not land this target element";
        w.elements = {{"y", z}};
        rep.kind = fail_with(std::move(w));
      }
    }
  }
  done(rep.additivity);
  done(rep.homogeneity);
  done(rep.order);
  done(rep.preimage);
  done(rep.kind);
  return rep;
}

}  // namespace

MorphismReport verify_order_morphism(const MorphismSpec& m,
                                     const ValidateOptions& opt) {
  if (!m.source || !m.target)
    throw InputError("a morphism needs both a source and a target");
  if (!(m.source->field() == m.target->field()))
    throw InputError("order-morphisms need a common scalar field");
  if (m.source->finite() && m.target->finite()) return verify_exhaustive(m);
  if (m.rule == MorphismSpec::Rule::table)
    throw InputError("an explicit table cannot be total on an infinite carrier");
  return verify_sampled(m, opt);
}

nlohmann::json IsoSearchOutcome::to_json() const {
  nlohmann::json out;
  switch (kind) {
    case Kind::found: out["kind"] = "found"; break;
    case Kind::proven_none: out["kind"] = "proven-none"; break;
    case Kind::undecided: out["kind"] = "undecided"; break;
  }
  out["nodes"] = nodes;
  if (!note.empty()) out["note"] = note;
  if (iso) out["morphism"] = iso->to_json();
  return out;
}

namespace {

// Cheap per-element invariants any order-isomorphism must preserve.
struct NodeSig {
  bool zero = false, minimal = false, idem = false;
  std::size_t below = 0, above = 0;

  auto key() const { return std::tie(zero, minimal, idem, below, above); }
  bool operator==(const NodeSig& o) const { return key() == o.key(); }
  bool operator<(const NodeSig& o) const { return key() < o.key(); }
};

std::vector<NodeSig> signatures(const Evs& X) {
  const std::vector<Element>& xs = X.carrier();
  std::vector<NodeSig> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    NodeSig& s = out[i];
    s.zero = xs[i] == X.zero();
    s.minimal = X.is_minimal(xs[i]);
    s.idem = X.is_idempotent(xs[i]);
    for (const Element& y : xs) {
      if (X.leq(y, xs[i])) ++s.below;
      if (X.leq(xs[i], y)) ++s.above;
    }
  }
  return out;
}

struct IsoSearch {
  const Evs& X;
  const Evs& Y;
  EvsPtr Xp, Yp;
  const std::vector<Element>& xs;
  const std::vector<Element>& ys;
  std::vector<NodeSig> xsig, ysig;
  std::vector<Scalar> scalars;
  std::map<Element, Element> partial;
  std::vector<bool> used;
  std::size_t nodes = 0;
  std::size_t budget;
  bool out_of_budget = false;
  std::optional<MorphismSpec> found;

  IsoSearch(EvsPtr xp, EvsPtr yp, std::size_t b)
      : X(*xp), Y(*yp), Xp(std::move(xp)), Yp(std::move(yp)),
        xs(X.carrier()), ys(Y.carrier()), xsig(signatures(X)),
        ysig(signatures(Y)), used(ys.size(), false), budget(b) {
    for (const Scalar& s : X.scalar_set())
      if (X.scale_defined(s) && Y.scale_defined(s)) scalars.push_back(s);
  }

  const Element* image_of(const Element& e) const {
    auto it = partial.find(e);
    return it == partial.end() ? nullptr : &it->second;
  }

  bool consistent(const Element& x, const Element& y) const {
    for (const auto& [a, b] : partial) {
      if (X.leq(a, x) != Y.leq(b, y)) return false;
      if (X.leq(x, a) != Y.leq(y, b)) return false;
      if (const Element* s = image_of(X.add(a, x)))
        if (!(Y.add(b, y) == *s)) return false;
    }
    if (const Element* s = image_of(X.add(x, x)))
      if (!(Y.add(y, y) == *s)) return false;
    for (const Scalar& a : scalars)
      if (const Element* s = image_of(X.scale(a, x)))
        if (!(Y.scale(a, y) == *s)) return false;
    return true;
  }

  bool dfs(std::size_t i) {
    if (out_of_budget) return false;
    if (i == xs.size()) {
      MorphismSpec spec;
      spec.source = Xp;
      spec.target = Yp;
      spec.rule = MorphismSpec::Rule::table;
      spec.graph = partial;
      spec.claimed_kind = "isomorphism";
      if (verify_order_morphism(spec).ok()) {
        found = std::move(spec);
        return true;
      }
      return false;
    }
    for (std::size_t j = 0; j < ys.size(); ++j) {
      if (used[j] || !(xsig[i] == ysig[j])) continue;
      if (++nodes > budget) {
        out_of_budget = true;
        return false;
      }
      if (!consistent(xs[i], ys[j])) continue;
      used[j] = true;
      partial.emplace(xs[i], ys[j]);
      if (dfs(i + 1)) return true;
      partial.erase(xs[i]);
      used[j] = false;
      if (out_of_budget) return false;
    }
    return false;
  }
};

}  // namespace

IsoSearchOutcome find_order_isomorphism(EvsPtr X, EvsPtr Y,
                                        std::size_t budget) {
  if (!X->finite() || !Y->finite())
    throw InputError("isomorphism search requires finite carriers");
  IsoSearchOutcome out;
  auto none = [&](std::string why) {
    out.kind = IsoSearchOutcome::Kind::proven_none;
    out.note = std::move(why);
    return out;
  };
  if (!(X->field() == Y->field()))
    return none("the scalar fields differ: " + X->field().to_string() +
                " vs " + Y->field().to_string());
  if (X->carrier_size() != Y->carrier_size())
    return none("the carrier sizes differ: " +
                std::to_string(X->carrier_size()) + " vs " +
                std::to_string(Y->carrier_size()));
  if (X->minimal_elements().size() != Y->minimal_elements().size())
    return none("the primitive counts differ: " +
                std::to_string(X->minimal_elements().size()) + " vs " +
                std::to_string(Y->minimal_elements().size()));
  auto idems = [](const Evs& Z) {
    std::size_t n = 0;
    for (const Element& z : Z.carrier())
      if (Z.is_idempotent(z)) ++n;
    return n;
  };
  if (idems(*X) != idems(*Y))
    return none("the nonzero idempotent counts differ: " +
                std::to_string(idems(*X)) + " vs " +
                std::to_string(idems(*Y)));

  IsoSearch search(X, Y, budget);
  {
    std::vector<NodeSig> a = search.xsig, b = search.ysig;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (!(a == b))
      return none("the order in/out-degree profiles differ");
  }
  bool hit = search.dfs(0);
  out.nodes = search.nodes;
  if (hit) {
    out.kind = IsoSearchOutcome::Kind::found;
    out.iso = std::move(search.found);
    return out;
  }
  if (search.out_of_budget) {
    out.kind = IsoSearchOutcome::Kind::undecided;
    out.note = "the search budget of " + std::to_string(budget) +
               " assignments ran out";
    return out;
  }
  return none("the bijection search space is exhausted");
}

BasisCertificate transport_basis(const MorphismSpec& m,
                                 const MorphismReport& verified,
                                 const BasisCertificate& B,
                                 const ValidateOptions& opt) {
  if (m.claimed_kind != "isomorphism" ||
      verified.claimed_kind != "isomorphism" || !verified.ok())
    throw InputError("basis transport requires a verified isomorphism");
  std::vector<Element> image;
  for (const Element& b : B.basis) image.push_back(m.apply(b));
  std::optional<BasisCertificate> cert =
      try_certify_basis(*m.target, std::move(image), opt);
  if (!cert)
    throw std::logic_error(
        "the transported set failed basis verification on " +
        m.target->describe() +
        "; this contradicts the isomorphism transport result");
  if (!(cert->dimension == B.dimension))
    throw std::logic_error(
        "the transported basis certifies dimension " +
        cert->dimension.to_string() + " instead of " +
        B.dimension.to_string() +
        "; order-isomorphic instances share their dimension");
  return *cert;
}

bool compare_feasible_sets(const MorphismSpec& m,
                           const MorphismReport& verified) {
  if (m.claimed_kind != "isomorphism" ||
      verified.claimed_kind != "isomorphism" || !verified.ok())
    throw InputError("feasible-set comparison requires a verified isomorphism");
  if (!m.source->finite() || !m.target->finite())
    throw InputError("feasible-set comparison requires finite carriers");
  const FeasibleSet qx = feasible_set(*m.source);
  const FeasibleSet qy = feasible_set(*m.target);
  std::vector<Element> image;
  for (const Element& x : *qx.elements) image.push_back(m.apply(x));
  m.target->canon_sort(image);
  return image == *qy.elements;
}

}  // namespace evs
