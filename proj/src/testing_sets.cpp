#include "evs/testing_sets.hpp"

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

void require_scope_member(const Evs& X, const Element& e) {
  if (!X.contains(e))
    throw InputError("element outside " + X.describe() + ": " + e.to_string());
}

void require_base(const Evs& X, const Element& x) {
  require_scope_member(X, x);
  if (X.is_minimal(x))
    throw DomainError("testing sets are undefined on primitive elements: " +
                      x.to_string());
}

// Nonzero scalars the instance can actually apply.
std::vector<Scalar> usable_nonzero(const Evs& X) {
  std::vector<Scalar> out;
  for (const Scalar& s : X.scalar_set())
    if (!s.is_zero() && X.scale_defined(s)) out.push_back(s);
  return out;
}

Element sample_nonminimal(const Evs& X, Rng& rng) {
  for (int i = 0; i < 256; ++i) {
    Element e = X.sample_one(rng);
    if (!X.is_minimal(e)) return e;
  }
  throw Undecided("could not sample a non-primitive element of " + X.describe());
}

}  // namespace

bool TestingSet::member(const Evs& X, const Element& z) const {
  if (elements)
    return std::find(elements->begin(), elements->end(), z) != elements->end();
  return X.L_member(base, z);
}

nlohmann::json TestingSet::to_json() const {
  nlohmann::json out{{"base", base.to_json()}, {"scope", scope}};
  if (elements) {
    nlohmann::json arr = nlohmann::json::array();
    for (const Element& e : *elements) arr.push_back(e.to_json());
    out["elements"] = arr;
  } else {
    out["representation"] = "predicate";
  }
  return out;
}

nlohmann::json IndependenceReport::to_json() const {
  nlohmann::json out{{"independent", independent}};
  if (witness) {
    out["witness"] = {{"x", witness->first.to_json()},
                      {"y", witness->second.to_json()},
                      {"direction", direction}};
  }
  nlohmann::json arr = nlohmann::json::array();
  for (const Element& e : set_checked) arr.push_back(e.to_json());
  out["set"] = arr;
  return out;
}

nlohmann::json GeneratorReport::to_json() const {
  nlohmann::json out{{"mode", mode}};
  switch (status) {
    case AxiomVerdict::Status::pass: out["status"] = "pass"; break;
    case AxiomVerdict::Status::sampled_pass: out["status"] = "sampled-pass"; break;
    case AxiomVerdict::Status::fail: out["status"] = "fail"; break;
  }
  if (uncovered) out["uncovered"] = uncovered->to_json();
  return out;
}

bool PropertyReport::all_pass() const {
  for (const auto& [_, v] : verdicts)
    if (!v.ok()) return false;
  return true;
}

std::vector<std::string> PropertyReport::failed_slots() const {
  std::vector<std::string> out;
  for (const auto& [slot, v] : verdicts)
    if (!v.ok()) out.push_back(slot);
  return out;
}

nlohmann::json PropertyReport::to_json() const {
  nlohmann::json v = nlohmann::json::object();
  for (const auto& [slot, verdict] : verdicts) v[slot] = verdict_json(verdict);
  nlohmann::json out{{"verdicts", v}, {"mode", mode}};
  if (mode == "sampled") {
    out["seed"] = seed;
    out["trials"] = trials;
  }
  return out;
}

bool testing_set_membership(const Evs& X, const Element& x, const Element& z) {
  require_base(X, x);
  require_scope_member(X, z);
  return X.L_member(x, z);
}

TestingSet testing_set(const Evs& X, const Element& x) {
  require_base(X, x);
  TestingSet out{x, std::nullopt, X.describe()};
  if (X.finite()) {
    std::vector<Element> members;
    for (const Element& z : X.carrier())
      if (X.L_member(x, z)) members.push_back(z);
    X.canon_sort(members);
    out.elements = std::move(members);
  }
  return out;
}

bool orderly_dependent(const Evs& X, const Element& x, const Element& y) {
  require_base(X, x);
  require_base(X, y);
  return X.L_member(x, y) || X.L_member(y, x);
}

IndependenceReport is_orderly_independent_set(const Evs& X,
                                              std::vector<Element> S) {
  for (const Element& s : S) require_base(X, s);
  X.canon_sort(S);
  S.erase(std::unique(S.begin(), S.end()), S.end());
  IndependenceReport rep;
  rep.set_checked = S;
  for (std::size_t i = 0; i < S.size() && rep.independent; ++i)
    for (std::size_t j = i + 1; j < S.size(); ++j) {
      if (X.L_member(S[i], S[j])) {
        rep.independent = false;
        rep.witness = {S[i], S[j]};
        rep.direction = "second lies in the testing set of the first";
        break;
      }
      if (X.L_member(S[j], S[i])) {
        rep.independent = false;
        rep.witness = {S[i], S[j]};
        rep.direction = "first lies in the testing set of the second";
        break;
      }
    }
  return rep;
}

GeneratorReport is_generator(const Evs& X, const std::vector<Element>& S,
                             const ValidateOptions& opt) {
  for (const Element& s : S) require_base(X, s);
  GeneratorReport rep;
  auto covered = [&](const Element& z) {
    for (const Element& s : S)
      if (X.L_member(s, z)) return true;
    return false;
  };
  if (X.finite()) {
    rep.mode = "exhaustive";
    for (const Element& z : X.carrier()) {
      if (X.is_minimal(z)) continue;
      if (!covered(z)) {
        rep.status = AxiomVerdict::Status::fail;
        rep.uncovered = z;
        return rep;
      }
    }
    return rep;
  }
  rep.mode = "sampled";
  rep.status = AxiomVerdict::Status::sampled_pass;
  Rng rng(opt.seed);
  for (std::size_t t = 0; t < opt.trials; ++t) {
    Element z = sample_nonminimal(X, rng);
    if (!covered(z)) {
      rep.status = AxiomVerdict::Status::fail;
      rep.uncovered = z;
      return rep;
    }
  }
  return rep;
}

namespace {

PropertyReport exhaustive_properties(const Evs& X) {
  PropertyReport rep;
  rep.mode = "exhaustive";
  for (const char* slot :
       {"base-inside-up-closed", "larger-base-smaller-set", "base-invariant",
        "primitive-free", "membership-transitive", "sum-in-both"})
    rep.verdicts[slot];

  std::vector<Element> np;
  for (const Element& x : X.carrier())
    if (!X.is_minimal(x)) np.push_back(x);
  const auto& minimal = X.minimal_elements();
  const auto nonzero = usable_nonzero(X);

  std::map<Element, std::set<Element>> L;
  for (const Element& x : np) {
    auto& set = L[x];
    for (const Element& z : X.carrier())
      if (X.L_member(x, z)) set.insert(z);
  }

  auto fail = [&](const char* slot, AxiomWitness w) {
    auto& v = rep.verdicts[slot];
    if (!v.ok()) return;
    v.status = AxiomVerdict::Status::fail;
    v.witness = std::move(w);
  };

  for (const Element& x : np) {
    const auto& Lx = L[x];
    if (!Lx.count(x))
      fail("base-inside-up-closed",
           {"the base escapes its own testing set", {{"x", x}}, {}});
    for (const Element& z : Lx)
      for (const Element& w : X.carrier())
        if (X.leq(z, w) && !Lx.count(w))
          fail("base-inside-up-closed",
               {"not up-closed", {{"x", x}, {"z", z}, {"w", w}}, {}});
    for (const Element& m : minimal)
      if (Lx.count(m))
        fail("primitive-free",
             {"a primitive entered the testing set", {{"x", x}, {"m", m}}, {}});
  }

  for (const Element& x : np)
    for (const Element& y : np) {
      if (X.leq(x, y))
        for (const Element& z : L[y])
          if (!L[x].count(z))
            fail("larger-base-smaller-set",
                 {"membership lost under a smaller base",
                  {{"x", x}, {"y", y}, {"z", z}},
                  {}});
      if (L[x].count(y))  // y in L(x)
        for (const Element& z : L[y])
          if (!L[x].count(z))
            fail("membership-transitive",
                 {"nested membership fails",
                  {{"b", x}, {"a", y}, {"z", z}},
                  {}});
      Element s = X.add(x, y);
      if (!L[x].count(s) || !L[y].count(s))
        fail("sum-in-both",
             {"the sum escapes a factor's testing set", {{"x", x}, {"y", y}}, {}});
    }

  for (const Element& y : np)
    for (const Scalar& a : nonzero)
      for (const Element& p : minimal) {
        Element x = X.add(X.scale(a, y), p);
        if (X.is_minimal(x)) {
          fail("base-invariant",
               {"a dilation-translation of a non-primitive landed on a "
                "primitive",
                {{"y", y}, {"p", p}},
                {{"alpha", a}}});
          continue;
        }
        if (L[x] != L[y])
          fail("base-invariant",
               {"testing set changed under dilation-translation",
                {{"y", y}, {"p", p}, {"x", x}},
                {{"alpha", a}}});
      }

  return rep;
}

PropertyReport sampled_properties(const Evs& X, const ValidateOptions& opt) {
  PropertyReport rep;
  rep.mode = "sampled";
  rep.seed = opt.seed;
  rep.trials = opt.trials;
  for (const char* slot :
       {"base-inside-up-closed", "larger-base-smaller-set", "base-invariant",
        "primitive-free", "membership-transitive", "sum-in-both"})
    rep.verdicts[slot].status = AxiomVerdict::Status::sampled_pass;

  const auto nonzero = usable_nonzero(X);
  Rng rng(opt.seed);

  auto fail = [&](const char* slot, AxiomWitness w) {
    auto& v = rep.verdicts[slot];
    if (!v.ok()) return;
    v.status = AxiomVerdict::Status::fail;
    v.witness = std::move(w);
  };

  for (std::size_t t = 0; t < opt.trials; ++t) {
    Element x = sample_nonminimal(X, rng);
    Element y = sample_nonminimal(X, rng);
    const Scalar& a = rng.pick(nonzero);
    Element p = X.sample_minimal(rng);

    // Membership built by hand must be recognized, and stay once raised.
    Element z0 = X.add(X.scale(a, x), p);
    Element w = X.sample_upper(rng, z0);
    if (!X.L_member(x, x))
      fail("base-inside-up-closed",
           {"the base escapes its own testing set", {{"x", x}}, {}});
    if (!X.L_member(x, z0) || !X.L_member(x, w))
      fail("base-inside-up-closed",
           {"a constructed member is refused",
            {{"x", x}, {"z", z0}, {"w", w}},
            {{"alpha", a}}});

    Element above = X.sample_upper(rng, x);
    if (!X.is_minimal(above)) {
      Element zy = X.sample_upper(rng, X.add(X.scale(a, above), p));
      if (!X.L_member(x, zy))
        fail("larger-base-smaller-set",
             {"membership lost under a smaller base",
              {{"x", x}, {"y", above}, {"z", zy}},
              {}});
    }

    Element xp = X.add(X.scale(a, y), p);
    if (X.is_minimal(xp)) {
      fail("base-invariant",
           {"a dilation-translation of a non-primitive landed on a primitive",
            {{"y", y}, {"p", p}},
            {{"alpha", a}}});
    } else {
      Element probe = X.sample_one(rng);
      if (X.L_member(xp, probe) != X.L_member(y, probe))
        fail("base-invariant",
             {"testing set changed under dilation-translation",
              {{"y", y}, {"p", p}, {"x", xp}, {"z", probe}},
              {{"alpha", a}}});
      if (!X.L_member(xp, w) && X.L_member(y, w))
        fail("base-invariant",
             {"testing set changed under dilation-translation",
              {{"y", y}, {"p", p}, {"x", xp}, {"z", w}},
              {{"alpha", a}}});
    }

    Element m = X.sample_minimal(rng);
    if (X.L_member(x, m))
      fail("primitive-free",
           {"a primitive entered the testing set", {{"x", x}, {"m", m}}, {}});

    Element a_in_b = X.sample_upper(rng, X.add(X.scale(a, y), p));
    if (X.is_minimal(a_in_b)) {
      fail("primitive-free",
           {"a primitive entered the testing set",
            {{"x", y}, {"m", a_in_b}},
            {}});
    } else {
      Element za = X.sample_upper(rng, X.add(X.scale(a, a_in_b), p));
      if (!X.L_member(y, za))
        fail("membership-transitive",
             {"nested membership fails",
              {{"b", y}, {"a", a_in_b}, {"z", za}},
              {}});
    }

    Element s = X.add(x, y);
    if (!X.L_member(x, s) || !X.L_member(y, s))
      fail("sum-in-both",
           {"the sum escapes a factor's testing set", {{"x", x}, {"y", y}}, {}});
  }
  return rep;
}

}  // namespace

PropertyReport check_L_properties(const Evs& X, const ValidateOptions& opt) {
  if (X.finite() && opt.mode == ValidateOptions::Mode::exhaustive)
    return exhaustive_properties(X);
  if (!X.finite() && opt.mode == ValidateOptions::Mode::exhaustive)
    throw InputError(
        "exhaustive property checks require a finite carrier; use sampled "
        "mode");
  return sampled_properties(X, opt);
}

}  // namespace evs
