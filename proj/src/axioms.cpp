#include "evs/axioms.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>

namespace evs {

const Element& AxiomWitness::element(const std::string& role) const {
  for (const auto& [r, e] : elements)
    if (r == role) return e;
  throw DomainError("witness has no element '" + role + "'");
}

const Scalar& AxiomWitness::scalar(const std::string& role) const {
  for (const auto& [r, s] : scalars)
    if (r == role) return s;
  throw DomainError("witness has no scalar '" + role + "'");
}

nlohmann::json AxiomWitness::to_json() const {
  nlohmann::json e = nlohmann::json::object();
  for (const auto& [r, x] : elements) e[r] = x.to_json();
  nlohmann::json s = nlohmann::json::object();
  for (const auto& [r, a] : scalars) s[r] = a.to_json();
  return {{"note", note}, {"elements", e}, {"scalars", s}};
}

std::string AxiomWitness::to_string() const {
  std::string out = note;
  for (const auto& [r, x] : elements) out += "  " + r + "=" + x.to_string();
  for (const auto& [r, a] : scalars) out += "  " + r + "=" + a.to_string();
  return out;
}

bool AxiomReport::all_pass() const {
  return std::all_of(verdicts.begin(), verdicts.end(),
                     [](const auto& kv) { return kv.second.ok(); });
}

std::vector<std::string> AxiomReport::failed_slots() const {
  std::vector<std::string> out;
  for (const auto& [slot, v] : verdicts)
    if (!v.ok()) out.push_back(slot);
  return out;
}

nlohmann::json AxiomReport::to_json() const {
  nlohmann::json v = nlohmann::json::object();
  for (const auto& [slot, verdict] : verdicts) {
    nlohmann::json item;
    switch (verdict.status) {
      case AxiomVerdict::Status::pass: item["status"] = "pass"; break;
      case AxiomVerdict::Status::sampled_pass: item["status"] = "sampled-pass"; break;
      case AxiomVerdict::Status::fail: item["status"] = "fail"; break;
    }
    if (verdict.witness) item["witness"] = verdict.witness->to_json();
    v[slot] = item;
  }
  nlohmann::json out{{"verdicts", v}};
  if (mode == ValidateOptions::Mode::sampled) {
    out["mode"] = "sampled";
    out["seed"] = seed;
    out["trials"] = trials;
  } else {
    out["mode"] = "exhaustive";
  }
  return out;
}

const std::vector<std::string>& axiom_slots() {
  static const std::vector<std::string> slots = {
      "A1.assoc", "A1.comm", "A1.identity", "A2.add", "A2.scale", "A3.i",
      "A3.ii",    "A3.iii",  "A3.iv",       "A4",     "A5",       "A6"};
  return slots;
}

namespace {

struct Checker {
  const Evs& X;
  AxiomReport rep;
  Element theta;

  explicit Checker(const Evs& x) : X(x), theta(x.zero()) {
    for (const auto& slot : axiom_slots()) rep.verdicts[slot];
  }

  bool open(const std::string& slot) const { return rep.verdicts.at(slot).ok(); }

  void fail(const std::string& slot, AxiomWitness w) {
    auto& v = rep.verdicts[slot];
    if (!v.ok()) return;  // keep the first witness
    v.status = AxiomVerdict::Status::fail;
    v.witness = std::move(w);
  }

  static AxiomWitness wit(std::string note,
                          std::initializer_list<std::pair<std::string, Element>> es,
                          std::initializer_list<std::pair<std::string, Scalar>> ss = {}) {
    AxiomWitness w;
    w.note = std::move(note);
    w.elements.assign(es);
    w.scalars.assign(ss);
    return w;
  }

  // --- single-case predicates (shared by both modes and recheck) ---------

  void check_assoc(const Element& x, const Element& y, const Element& z) {
    if (!open("A1.assoc")) return;
    if (!(X.add(X.add(x, y), z) == X.add(x, X.add(y, z))))
      fail("A1.assoc", wit("(x+y)+z differs from x+(y+z)", {{"x", x}, {"y", y}, {"z", z}}));
  }
  void check_comm(const Element& x, const Element& y) {
    if (!open("A1.comm")) return;
    if (!(X.add(x, y) == X.add(y, x)))
      fail("A1.comm", wit("x+y differs from y+x", {{"x", x}, {"y", y}}));
  }
  void check_identity(const Element& x) {
    if (!open("A1.identity")) return;
    if (!(X.add(theta, x) == x) || !(X.add(x, theta) == x))
      fail("A1.identity", wit("theta is not neutral at x", {{"x", x}}));
  }
  void check_order_add(const Element& x, const Element& y, const Element& z) {
    if (!open("A2.add")) return;
    if (X.leq(x, y) && !X.leq(X.add(x, z), X.add(y, z)))
      fail("A2.add", wit("x<=y but x+z is not <= y+z", {{"x", x}, {"y", y}, {"z", z}}));
  }
  void check_order_scale(const Scalar& a, const Element& x, const Element& y) {
    if (!open("A2.scale")) return;
    if (X.leq(x, y) && !X.leq(X.scale(a, x), X.scale(a, y)))
      fail("A2.scale",
           wit("x<=y but alpha*x is not <= alpha*y", {{"x", x}, {"y", y}}, {{"alpha", a}}));
  }
  void check_distributes(const Scalar& a, const Element& x, const Element& y) {
    if (!open("A3.i")) return;
    if (!(X.scale(a, X.add(x, y)) == X.add(X.scale(a, x), X.scale(a, y))))
      fail("A3.i",
           wit("alpha*(x+y) differs from alpha*x+alpha*y", {{"x", x}, {"y", y}}, {{"alpha", a}}));
  }
  void check_associates(const Scalar& a, const Scalar& b, const Element& x) {
    if (!open("A3.ii")) return;
    Scalar ab = a * b;
    if (!X.scale_defined(ab)) return;
    if (!(X.scale(a, X.scale(b, x)) == X.scale(ab, x)))
      fail("A3.ii", wit("alpha*(beta*x) differs from (alpha*beta)*x", {{"x", x}},
                        {{"alpha", a}, {"beta", b}}));
  }
  void check_subadditive(const Scalar& a, const Scalar& b, const Element& x) {
    if (!open("A3.iii")) return;
    Scalar ab = a + b;
    if (!X.scale_defined(ab)) return;
    if (!X.leq(X.scale(ab, x), X.add(X.scale(a, x), X.scale(b, x))))
      fail("A3.iii", wit("(alpha+beta)*x is not <= alpha*x+beta*x", {{"x", x}},
                         {{"alpha", a}, {"beta", b}}));
  }
  void check_unit(const Element& x) {
    if (!open("A3.iv")) return;
    if (!(X.scale(Scalar::one(X.field()), x) == x))
      fail("A3.iv", wit("1*x differs from x", {{"x", x}}));
  }
  void check_null_product(const Scalar& a, const Element& x) {
    if (!open("A4")) return;
    bool is_theta = X.scale(a, x) == theta;
    bool should = a.is_zero() || x == theta;
    if (is_theta != should)
      fail("A4",
           wit(is_theta ? "alpha*x = theta with alpha and x both nonzero"
                        : "alpha*x differs from theta although alpha=0 or x=theta",
               {{"x", x}}, {{"alpha", a}}));
  }

  bool cancellative(const Element& x) const {
    return X.add(x, X.scale(Scalar::minus_one(X.field()), x)) == theta;
  }

  // --- exhaustive sweep ---------------------------------------------------

  void run_exhaustive() {
    rep.mode = ValidateOptions::Mode::exhaustive;
    const auto& xs = X.carrier();
    std::vector<Scalar> scalars = X.scalar_set();

    for (const Element& x : xs) {
      check_identity(x);
      check_unit(x);
      for (const Element& y : xs) {
        check_comm(x, y);
        for (const Element& z : xs) check_assoc(x, y, z);
      }
    }
    for (const Element& x : xs)
      for (const Element& y : xs) {
        if (!X.leq(x, y)) continue;
        for (const Element& z : xs) check_order_add(x, y, z);
        for (const Scalar& a : scalars) check_order_scale(a, x, y);
      }
    for (const Scalar& a : scalars) {
      for (const Element& x : xs) {
        check_null_product(a, x);
        for (const Element& y : xs) check_distributes(a, x, y);
        for (const Scalar& b : scalars) {
          check_associates(a, b, x);
          check_subadditive(a, b, x);
        }
      }
    }

    // A5/A6 against honestly recomputed sets: M by order scan, S by the
    // cancellation identity.
    std::vector<char> in_s(xs.size());
    std::vector<char> in_m(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
      in_s[i] = cancellative(xs[i]);
      bool minimal = true;
      for (const Element& y : xs)
        if (!(y == xs[i]) && X.leq(y, xs[i])) {
          minimal = false;
          break;
        }
      in_m[i] = minimal;
    }
    for (std::size_t i = 0; i < xs.size() && open("A5"); ++i) {
      if (in_m[i] && !in_s[i])
        fail("A5", wit("x is order-minimal but x+(-1)x differs from theta", {{"x", xs[i]}}));
      else if (in_s[i] && !in_m[i])
        fail("A5", wit("x+(-1)x = theta but x is not order-minimal", {{"x", xs[i]}}));
    }
    for (std::size_t i = 0; i < xs.size() && open("A6"); ++i) {
      bool covered = false;
      for (std::size_t j = 0; j < xs.size(); ++j)
        if (in_s[j] && X.leq(xs[j], xs[i])) {
          covered = true;
          break;
        }
      if (!covered)
        fail("A6", wit("no primitive element lies below x", {{"x", xs[i]}}));
    }
  }

  // --- sampled sweep --------------------------------------------------------

  void run_sampled(std::uint64_t seed, std::size_t trials) {
    rep.mode = ValidateOptions::Mode::sampled;
    rep.seed = seed;
    rep.trials = trials;
    Rng rng(seed);
    std::vector<Scalar> scalars = X.scalar_set();

    for (std::size_t t = 0; t < trials; ++t) {
      Element x = X.sample_one(rng);
      Element y = X.sample_one(rng);
      Element z = X.sample_one(rng);
      Element w = X.sample_upper(rng, x);
      Scalar a = rng.pick(scalars);
      Scalar b = rng.pick(scalars);

      check_assoc(x, y, z);
      check_comm(x, y);
      check_identity(x);
      check_order_add(x, w, z);
      check_order_scale(a, x, w);
      check_distributes(a, x, y);
      check_associates(a, b, x);
      check_subadditive(a, b, x);
      check_unit(x);
      check_null_product(a, x);
      check_null_product(Scalar::zero(X.field()), x);
      check_null_product(a, theta);

      if (open("A5")) {
        bool s = cancellative(x);
        bool m = X.is_minimal(x);
        if (m && !s)
          fail("A5", wit("x is minimal (family rule) but x+(-1)x differs from theta", {{"x", x}}));
        else if (s && !m)
          fail("A5", wit("x+(-1)x = theta but x is not minimal (family rule)", {{"x", x}}));
        Element p = X.sample_minimal(rng);
        if (open("A5") && !cancellative(p))
          fail("A5", wit("sampled primitive fails the cancellation identity", {{"x", p}}));
      }
      if (open("A6")) {
        auto below = X.primitives_below(x);
        if (below.empty()) {
          fail("A6", wit("no primitive element lies below x", {{"x", x}}));
        } else {
          for (const Element& p : below)
            if (!X.leq(p, x) || !cancellative(p)) {
              fail("A6", wit("claimed primitive below x is invalid",
                             {{"x", x}, {"p", p}}));
              break;
            }
        }
      }
    }
    for (auto& [slot, v] : rep.verdicts)
      if (v.status == AxiomVerdict::Status::pass)
        v.status = AxiomVerdict::Status::sampled_pass;
  }
};

}  // namespace

AxiomReport validate_axioms(const Evs& X, const ValidateOptions& opt) {
  Checker c(X);
  if (opt.mode == ValidateOptions::Mode::exhaustive) {
    if (!X.finite())
      throw InputError("exhaustive validation requires a finite carrier; use sampled mode");
    c.run_exhaustive();
  } else {
    c.run_sampled(opt.seed, opt.trials);
  }
  return c.rep;
}

bool witness_violates(const Evs& X, const std::string& slot, const AxiomWitness& w) {
  Checker c(X);
  if (slot == "A1.assoc")
    c.check_assoc(w.element("x"), w.element("y"), w.element("z"));
  else if (slot == "A1.comm")
    c.check_comm(w.element("x"), w.element("y"));
  else if (slot == "A1.identity")
    c.check_identity(w.element("x"));
  else if (slot == "A2.add")
    c.check_order_add(w.element("x"), w.element("y"), w.element("z"));
  else if (slot == "A2.scale")
    c.check_order_scale(w.scalar("alpha"), w.element("x"), w.element("y"));
  else if (slot == "A3.i")
    c.check_distributes(w.scalar("alpha"), w.element("x"), w.element("y"));
  else if (slot == "A3.ii")
    c.check_associates(w.scalar("alpha"), w.scalar("beta"), w.element("x"));
  else if (slot == "A3.iii")
    c.check_subadditive(w.scalar("alpha"), w.scalar("beta"), w.element("x"));
  else if (slot == "A3.iv")
    c.check_unit(w.element("x"));
  else if (slot == "A4")
    c.check_null_product(w.scalar("alpha"), w.element("x"));
  else if (slot == "A5") {
    const Element& x = w.element("x");
    bool s = c.cancellative(x);
    bool m = X.finite() ? [&] {
      for (const Element& y : X.carrier())
        if (!(y == x) && X.leq(y, x)) return false;
      return true;
    }()
                        : X.is_minimal(x);
    return s != m;
  } else if (slot == "A6") {
    const Element& x = w.element("x");
    if (X.finite()) {
      for (const Element& p : X.carrier())
        if (c.cancellative(p) && X.leq(p, x)) return false;
      return true;
    }
    return X.primitives_below(x).empty();
  } else {
    throw DomainError("unknown axiom slot " + slot);
  }
  return !c.rep.verdicts.at(slot).ok();
}

}  // namespace evs
