#include "evs/core_ops.hpp"

#include <nlohmann/json.hpp>
#include <set>

#include "evs/oracle.hpp"

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

nlohmann::json element_array(const std::vector<Element>& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (const Element& e : v) arr.push_back(e.to_json());
  return arr;
}

[[noreturn]] void not_a_vector_space(const Evs& X, const std::string& why) {
  throw DomainError("minimal elements of " + X.describe() +
                    " do not form a vector space: " + why);
}

}  // namespace

std::string PrimitiveSpace::dimension_string() const {
  return dimension ? std::to_string(*dimension) : dimension_token;
}

nlohmann::json PrimitiveSpace::to_json() const {
  nlohmann::json out;
  if (elements)
    out["elements"] = element_array(*elements);
  else
    out["description"] = description;
  if (dimension)
    out["dimension"] = *dimension;
  else
    out["dimension"] = dimension_token;
  out["mode"] = mode;
  return out;
}

nlohmann::json PrimitiveSet::to_json() const {
  return nlohmann::json{{"owner", owner.to_json()},
                        {"primitives", element_array(elements)}};
}

nlohmann::json SubEvsReport::to_json() const {
  nlohmann::json out{{"closure", verdict_json(closure)},
                     {"primitive", verdict_json(primitive)},
                     {"support", verdict_json(support)},
                     {"mode", mode}};
  if (relative_primitives)
    out["relative_primitives"] = element_array(*relative_primitives);
  return out;
}

nlohmann::json Classification::to_json() const {
  return nlohmann::json{{"single_primitive", single_primitive},
                        {"comparable", comparable},
                        {"has_idempotent", has_idempotent}};
}

PrimitiveSpace primitive_space(const Evs& X, const ValidateOptions& opt) {
  PrimitiveSpace out;
  const Field f = X.field();
  const Scalar minus1 = Scalar::minus_one(f);
  if (X.minimal_enumerable()) {
    const std::vector<Element>& m = X.minimal_elements();
    std::set<Element> members(m.begin(), m.end());
    if (!members.count(X.zero()))
      not_a_vector_space(X, "the zero element is not minimal");
    const auto scalars = X.scalar_set();
    for (const Element& a : m) {
      for (const Element& b : m)
        if (!members.count(X.add(a, b)))
          not_a_vector_space(X, a.to_string() + " + " + b.to_string() +
                                    " leaves the set");
      for (const Scalar& s : scalars)
        if (X.scale_defined(s) && !members.count(X.scale(s, a)))
          not_a_vector_space(X, s.to_string() + " * " + a.to_string() +
                                    " leaves the set");
      if (!(X.add(a, X.scale(minus1, a)) == X.zero()))
        not_a_vector_space(X, a.to_string() + " has no additive inverse");
    }
    out.elements = m;
    out.mode = "exhaustive";
    if (f.kind == Field::Kind::gf) {
      long size = static_cast<long>(m.size()), k = 0, pow = 1;
      while (pow < size) {
        pow *= f.p;
        ++k;
      }
      if (pow != size)
        not_a_vector_space(X, "its size " + std::to_string(size) +
                                  " is not a power of " + std::to_string(f.p));
      out.dimension = k;
    } else if (m.size() == 1) {
      out.dimension = 0;
    } else {
      // A finite table only declares part of the rational action, which is
      // not enough to pin down a Q-dimension.
      out.dimension_token = "indeterminate";
    }
    return out;
  }

  const FamilyOracle* o = X.oracle();
  if (!o || o->dimension.no_basis)
    throw Undecided("no closed-form primitive description for " + X.describe());
  const ExtendedCardinal& pd = o->dimension.primitive_part;
  if (pd.kind == ExtendedCardinal::Kind::finite)
    out.dimension = pd.value;
  else
    out.dimension_token = "c";
  out.description = "minimal elements of " + X.describe() + " (not enumerable)";
  out.mode = "sampled";

  Rng rng(opt.seed);
  const auto scalars = X.scalar_set();
  for (std::size_t t = 0; t < opt.trials; ++t) {
    Element a = X.sample_minimal(rng);
    Element b = X.sample_minimal(rng);
    if (!X.is_minimal(a) || !X.is_minimal(b))
      not_a_vector_space(X, "a sampled member fails the minimality predicate");
    if (!X.is_minimal(X.add(a, b)))
      not_a_vector_space(X, a.to_string() + " + " + b.to_string() +
                                " leaves the set");
    const Scalar& s = rng.pick(scalars);
    if (X.scale_defined(s) && !X.is_minimal(X.scale(s, a)))
      not_a_vector_space(X, s.to_string() + " * " + a.to_string() +
                                " leaves the set");
    if (!(X.add(a, X.scale(minus1, a)) == X.zero()))
      not_a_vector_space(X, a.to_string() + " has no additive inverse");
  }
  return out;
}

PrimitiveSet primitives_of(const Evs& X, const Element& x) {
  if (!X.contains(x))
    throw InputError("element outside " + X.describe() + ": " + x.to_string());
  PrimitiveSet out{x, X.primitives_below(x)};
  if (out.elements.empty())
    throw DomainError("no minimal element lies below " + x.to_string() + " in " +
                      X.describe() + ": the support axiom fails");
  X.canon_sort(out.elements);
  return out;
}

namespace {

SubEvsReport exhaustive_subevs(const Evs& X, const std::vector<Element>& ys) {
  if (ys.empty())
    throw InputError("a sub exponential vector space cannot be empty");
  std::set<Element> members(ys.begin(), ys.end());
  for (const Element& y : ys)
    if (!X.contains(y))
      throw InputError("candidate carrier escapes " + X.describe() + ": " +
                       y.to_string());
  if (!members.count(X.zero()))
    throw InputError("a sub exponential vector space must contain the zero element");

  SubEvsReport rep;
  rep.mode = "exhaustive";
  const auto scalars = X.scalar_set();

  for (const Element& x : ys) {
    for (const Element& y : ys) {
      for (const Scalar& s : scalars) {
        if (!X.scale_defined(s)) continue;
        Element z = X.add(X.scale(s, x), y);
        if (!members.count(z)) {
          rep.closure.status = AxiomVerdict::Status::fail;
          rep.closure.witness = AxiomWitness{
              "a*x + y leaves the candidate carrier",
              {{"x", x}, {"y", y}, {"z", z}},
              {{"alpha", s}}};
          goto closure_done;
        }
      }
    }
  }
closure_done:

  // Relative minimals, by an order scan inside the candidate.
  std::vector<Element> y0;
  for (const Element& m : ys) {
    bool minimal = true;
    for (const Element& y : ys)
      if (!(y == m) && X.leq(y, m)) {
        minimal = false;
        break;
      }
    if (minimal) y0.push_back(m);
  }
  X.canon_sort(y0);
  rep.relative_primitives = y0;

  for (const Element& m : y0)
    if (!X.is_minimal(m)) {
      rep.primitive.status = AxiomVerdict::Status::fail;
      rep.primitive.witness = AxiomWitness{
          "minimal in the candidate but not in the ambient instance",
          {{"y0", m}},
          {}};
      break;
    }

  for (const Element& y : ys) {
    bool supported = false;
    for (const Element& m : y0)
      if (X.leq(m, y)) {
        supported = true;
        break;
      }
    if (!supported) {
      rep.support.status = AxiomVerdict::Status::fail;
      rep.support.witness = AxiomWitness{
          "no relative minimal lies below this member", {{"y", y}}, {}};
      break;
    }
  }
  return rep;
}

}  // namespace

SubEvsReport validate_subevs(const Evs& X, const Evs& Y,
                             const ValidateOptions& opt) {
  if (opt.mode == ValidateOptions::Mode::exhaustive) {
    if (!Y.finite())
      throw InputError(
          "exhaustive subevs validation requires a finite candidate; use "
          "sampled mode");
    return exhaustive_subevs(X, Y.carrier());
  }

  SubEvsReport rep;
  rep.mode = "sampled";
  rep.closure.status = AxiomVerdict::Status::sampled_pass;
  rep.primitive.status = AxiomVerdict::Status::sampled_pass;
  rep.support.status = AxiomVerdict::Status::sampled_pass;
  if (Y.minimal_enumerable()) rep.relative_primitives = Y.minimal_elements();

  Rng rng(opt.seed);
  const auto scalars = X.scalar_set();
  for (std::size_t t = 0; t < opt.trials; ++t) {
    Element x = Y.sample_one(rng);
    Element y = Y.sample_one(rng);
    const Scalar& s = rng.pick(scalars);
    if (rep.closure.ok() && X.scale_defined(s)) {
      Element z = X.add(X.scale(s, x), y);
      if (!Y.contains(z)) {
        rep.closure.status = AxiomVerdict::Status::fail;
        rep.closure.witness =
            AxiomWitness{"a*x + y leaves the candidate carrier",
                         {{"x", x}, {"y", y}, {"z", z}},
                         {{"alpha", s}}};
      }
    }
    if (rep.primitive.ok()) {
      Element m = Y.sample_minimal(rng);
      if (!Y.contains(m) || !X.is_minimal(m)) {
        rep.primitive.status = AxiomVerdict::Status::fail;
        rep.primitive.witness = AxiomWitness{
            "minimal in the candidate but not in the ambient instance",
            {{"y0", m}},
            {}};
      }
    }
    if (rep.support.ok()) {
      auto ps = Y.primitives_below(y);
      bool good = !ps.empty();
      if (good) {
        const Element& p = ps.front();
        good = Y.contains(p) && Y.is_minimal(p) && X.leq(p, y);
      }
      if (!good) {
        rep.support.status = AxiomVerdict::Status::fail;
        rep.support.witness = AxiomWitness{
            "no relative minimal lies below this member", {{"y", y}}, {}};
      }
    }
  }
  return rep;
}

SubEvsReport validate_subevs(const Evs& X, const std::vector<Element>& subset,
                             const ValidateOptions&) {
  return exhaustive_subevs(X, subset);
}

std::vector<Element> detect_idempotents(const Evs& X) {
  if (X.finite()) {
    std::vector<Element> out;
    for (const Element& x : X.carrier())
      if (X.is_idempotent(x)) out.push_back(x);
    X.canon_sort(out);
    return out;
  }
  auto rule = X.idempotents_rule();
  if (!rule)
    throw Undecided("no closed-form idempotent rule for " + X.describe());
  X.canon_sort(*rule);
  return *rule;
}

Classification classify(const Evs& X) {
  Classification c;
  if (X.finite()) {
    const auto& xs = X.carrier();
    std::vector<std::vector<Element>> prim;
    prim.reserve(xs.size());
    c.single_primitive = true;
    for (const Element& x : xs) {
      prim.push_back(X.primitives_below(x));
      X.canon_sort(prim.back());
      if (prim.back().size() != 1) c.single_primitive = false;
    }
    c.comparable = true;
    for (std::size_t i = 0; i < xs.size() && c.comparable; ++i)
      for (std::size_t j = i + 1; j < xs.size(); ++j)
        if (prim[i] == prim[j] && !X.leq(xs[i], xs[j]) && !X.leq(xs[j], xs[i])) {
          c.comparable = false;
          break;
        }
    for (const Element& x : xs)
      if (X.is_idempotent(x)) {
        c.has_idempotent = true;
        break;
      }
    return c;
  }
  auto sp = X.single_primitive_rule();
  auto cmp = X.comparable_rule();
  auto idem = X.idempotents_rule();
  if (!sp || !cmp || !idem)
    throw Undecided("structural classification needs closed-form rules for " +
                    X.describe());
  c.single_primitive = *sp;
  c.comparable = *cmp;
  c.has_idempotent = !idem->empty();
  return c;
}

}  // namespace evs
