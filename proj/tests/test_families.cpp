#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "evs/families.hpp"

#include <functional>
#include <nlohmann/json.hpp>

#include "doctest.h"
#include "evs/axioms.hpp"

using namespace evs;
using nlohmann::json;

namespace {

Element rt(std::vector<Rational> v) {
  Tuple t;
  for (Rational& q : v) t.push_back(Scalar::rational(std::move(q)));
  return Element::tuple(std::move(t));
}

Element pts1(std::vector<Rational> v) {
  std::vector<Tuple> ts;
  for (Rational& q : v) ts.push_back(Tuple{Scalar::rational(std::move(q))});
  return Element::point_set(PointSet::canonical(std::move(ts)));
}

std::vector<Rational> flatten_rats(const Element& e) {
  std::vector<Rational> out;
  std::function<void(const Element&)> walk = [&](const Element& x) {
    if (std::holds_alternative<Tuple>(x.payload)) {
      for (const Scalar& s : x.as_tuple()) out.push_back(s.rat());
    } else if (std::holds_alternative<PointSet>(x.payload)) {
      for (const Tuple& p : x.as_points().points)
        for (const Scalar& s : p) out.push_back(s.rat());
    } else {
      for (const Element& part : x.as_composite().parts) walk(part);
    }
  };
  walk(e);
  return out;
}

// Scalar candidates for a brute-force witness search: the declared grid plus
// every ratio of a z-coordinate to a nonzero x-coordinate (and simple
// multiples, covering tie-breaking witnesses that halve a ratio).
std::vector<Scalar> ratio_alphas(const Evs& X, const Element& x, const Element& z) {
  std::vector<Scalar> out = X.scalar_set();
  auto xs = flatten_rats(x), zs = flatten_rats(z);
  for (const Rational& zi : zs)
    for (const Rational& xj : xs) {
      if (xj.is_zero()) continue;
      Rational r = zi / xj;
      out.push_back(Scalar::rational(r));
      out.push_back(Scalar::rational(-r));
      out.push_back(Scalar::rational(r / 2));
      out.push_back(Scalar::rational(2 * r));
    }
  return out;
}

// Definitional search: some nonzero alpha and candidate primitive p with
// alpha*x + p <= z. The primitive candidates come from the caller, which
// knows what shapes are worth trying; every candidate is checked honestly.
bool brute_L(const Evs& X, const Element& x, const Element& z,
             const std::function<std::vector<Element>(const Scalar&)>& prim_candidates) {
  for (const Scalar& a : ratio_alphas(X, x, z)) {
    if (a.is_zero()) continue;
    Element ax = X.scale(a, x);
    for (const Element& p : prim_candidates(a)) {
      if (!X.contains(p) || !X.is_minimal(p)) continue;
      if (X.leq(X.add(ax, p), z)) return true;
    }
  }
  return false;
}

void check_witness_sound(const Evs& X, const Element& x, const Element& z) {
  auto w = X.L_witness(x, z);
  REQUIRE(w.has_value());
  CHECK_FALSE(w->alpha.is_zero());
  CHECK(X.contains(w->p));
  CHECK(X.is_minimal(w->p));
  CHECK(X.leq(X.add(X.scale(w->alpha, x), w->p), z));
}

// Runs `trials` sampled (x, z) pairs -- random, built to land in L(x), upper
// closures, and caller-spoiled non-members -- and requires the closed-form
// answer to match the brute search on every one.
void cross_check_L(const Evs& X, std::uint64_t seed, int trials,
                   const std::function<std::vector<Element>(const Scalar&)>& prims_for,
                   const std::function<Element(const Element&)>& spoiler = nullptr,
                   int* positives = nullptr, int* negatives = nullptr) {
  Rng rng(seed);
  int pos = 0, neg = 0;
  for (int i = 0; i < trials; ++i) {
    Element x = X.sample_one(rng);
    for (int guard = 0; X.is_minimal(x) && guard < 64; ++guard) x = X.sample_one(rng);
    if (X.is_minimal(x)) continue;
    Element z = X.sample_one(rng);
    if (i % 4 == 1) {
      auto alphas = X.scalar_set();
      Scalar a = alphas[rng.index(alphas.size())];
      if (a.is_zero()) a = Scalar::one(X.field());
      z = X.add(X.scale(a, x), X.sample_minimal(rng));
    } else if (i % 4 == 2) {
      z = X.sample_upper(rng, z);
    } else if (i % 4 == 3 && spoiler) {
      z = spoiler(x);
    }
    bool closed = X.L_member(x, z);
    bool brute = brute_L(X, x, z, prims_for);
    CHECK(closed == brute);
    if (closed) {
      ++pos;
      check_witness_sound(X, x, z);
    } else {
      ++neg;
    }
  }
  if (positives) *positives = pos;
  if (negatives) *negatives = neg;
}

// Erases the first supported coordinate: the spoiled copy drops out of L(x)
// for the support-sensitive tuple rules.
Element zero_first_support(const Element& x, bool trim = false) {
  std::vector<Rational> v = flatten_rats(x);
  for (Rational& q : v)
    if (!q.is_zero()) {
      q = 0;
      break;
    }
  if (trim)
    while (!v.empty() && v.back().is_zero()) v.pop_back();
  Tuple t;
  for (Rational& q : v) t.push_back(Scalar::rational(std::move(q)));
  return Element::tuple(std::move(t));
}

std::function<std::vector<Element>(const Scalar&)> only_theta(const Evs& X) {
  Element theta = X.zero();
  return [theta](const Scalar&) { return std::vector<Element>{theta}; };
}

}  // namespace

// ---------------------------------------------------------------------------
// sampled axiom validation across the symbolic catalog
// ---------------------------------------------------------------------------

TEST_CASE("symbolic families satisfy the axioms under sampling") {
  std::vector<EvsPtr> catalog = {
      std::make_shared<RayProduct>(1),
      std::make_shared<RayProduct>(3),
      std::make_shared<ConeTimesVector>(2),
      std::make_shared<EvsTimesVector>(std::make_shared<RayProduct>(2), 1),
      std::make_shared<Hyperspace>(Field::rational(), 1, 3),
      std::make_shared<Hyperspace>(Field::rational(), 2, 3),
      std::make_shared<HyperspaceTheta>(Field::rational(), 1, 3),
      std::make_shared<DictionaryPower>(3),
      std::make_shared<DictionaryOmega>(),
  };
  for (const auto& X : catalog) {
    CAPTURE(X->describe());
    auto rep = validate_axioms(
        *X, {ValidateOptions::Mode::sampled, /*seed=*/7, /*trials=*/400});
    CHECK(rep.all_pass());
    CHECK(rep.verdicts.size() == 12);
    for (const auto& [slot, verdict] : rep.verdicts)
      CHECK(verdict.status == AxiomVerdict::Status::sampled_pass);
  }
}

TEST_CASE("finite families pass exhaustively with the expected carriers") {
  auto h22 = std::make_shared<Hyperspace>(Field::gf(2), 2, 4);
  CHECK(h22->carrier_size() == 15);
  CHECK(h22->minimal_elements().size() == 4);
  CHECK(validate_axioms(*h22).all_pass());

  auto h31 = std::make_shared<Hyperspace>(Field::gf(3), 1, 3);
  CHECK(h31->carrier_size() == 7);
  CHECK(h31->minimal_elements().size() == 3);
  CHECK(validate_axioms(*h31).all_pass());

  auto t22 = std::make_shared<HyperspaceTheta>(Field::gf(2), 2, 4);
  CHECK(t22->carrier_size() == 8);
  CHECK(t22->minimal_elements().size() == 1);
  CHECK(validate_axioms(*t22).all_pass());

  auto l22 = std::make_shared<SubspaceLattice>(2, 2);
  CHECK(l22->carrier_size() == 5);
  CHECK(l22->minimal_elements().size() == 1);
  CHECK(validate_axioms(*l22).all_pass());
  int idempotents = 0;
  for (const Element& u : l22->carrier())
    if (!(u == l22->zero())) {
      CHECK(l22->is_idempotent(u));
      ++idempotents;
    }
  CHECK(idempotents == 4);

  auto l32 = std::make_shared<SubspaceLattice>(3, 2);
  CHECK(l32->carrier_size() == 6);  // zero, four lines, the plane
  CHECK(validate_axioms(*l32).all_pass());
}

// ---------------------------------------------------------------------------
// closed-form testing-set rules vs. brute force
// ---------------------------------------------------------------------------

TEST_CASE("ray product: L rule matches the definition") {
  RayProduct X(3);
  int pos = 0, neg = 0;
  cross_check_L(X, 11, 200, only_theta(X),
                [](const Element& x) { return zero_first_support(x); }, &pos, &neg);
  CHECK(pos > 20);
  CHECK(neg > 20);

  Element x = rt({1, 0, 2});
  CHECK(X.L_member(x, rt({3, 0, 1})));
  CHECK_FALSE(X.L_member(x, rt({3, 1, 0})));
  CHECK_FALSE(X.L_member(x, rt({0, 0, 0})));
  CHECK(X.L_member(x, rt({{1, 2}, 4, {1, 3}})));
  CHECK_THROWS_AS(X.L_member(X.zero(), x), DomainError);
}

TEST_CASE("cone: L rule matches the definition") {
  ConeTimesVector X(2);
  // forced-solve brute: for each alpha, p = (0, vec(z) - alpha*vec(x)) is the
  // only primitive that can align the vector parts
  Rng rng(13);
  int pos = 0, neg = 0;
  for (int i = 0; i < 200; ++i) {
    Element x = X.sample_one(rng);
    for (int g = 0; X.is_minimal(x) && g < 64; ++g) x = X.sample_one(rng);
    Element z = i % 3 == 1 ? X.sample_upper(rng, X.sample_one(rng)) : X.sample_one(rng);
    if (i % 3 == 2) {
      auto zs = flatten_rats(z);
      zs[0] = 0;  // flatten onto the primitive hyperplane: never in any L
      z = rt(zs);
    }
    bool brute = false;
    for (const Scalar& a : ratio_alphas(X, x, z)) {
      if (a.is_zero()) continue;
      auto ax = flatten_rats(X.scale(a, x)), zs = flatten_rats(z);
      std::vector<Rational> p(ax.size(), Rational(0));
      for (std::size_t k = 1; k < ax.size(); ++k) p[k] = zs[k] - ax[k];
      if (X.leq(X.add(X.scale(a, x), rt(p)), z)) brute = true;
    }
    bool closed = X.L_member(x, z);
    CHECK(closed == brute);
    if (closed) {
      check_witness_sound(X, x, z);
      ++pos;
    } else {
      ++neg;
    }
  }
  CHECK(pos > 20);
  CHECK(neg > 20);

  CHECK(X.L_member(rt({2, 5, 0}), rt({1, 7, -3})));
  CHECK_FALSE(X.L_member(rt({2, 5, 0}), rt({0, 3, 0})));
}

TEST_CASE("evs x vector: testing sets reduce to the base") {
  auto base = std::make_shared<RayProduct>(2);
  EvsTimesVector X(base, 1);
  Rng rng(17);
  int pos = 0, neg = 0;
  for (int i = 0; i < 150; ++i) {
    Element x = X.sample_one(rng);
    for (int g = 0; X.is_minimal(x) && g < 64; ++g) x = X.sample_one(rng);
    Element z = X.sample_one(rng);
    if (i % 3 == 1) {
      Scalar a = Scalar::rational(Rational(1, 2));
      z = X.add(X.scale(a, x), X.sample_minimal(rng));
    } else if (i % 3 == 2) {
      // drop the base support that x needs: a guaranteed non-member
      z = X.pair(zero_first_support(X.base_part(x)), X.vec_part(z));
    }
    // forced solve: alpha from base ratios, vector part of p pinned to match
    bool brute = false;
    for (const Scalar& a : ratio_alphas(X, x, z)) {
      if (a.is_zero()) continue;
      Element ax = X.scale(a, x);
      Rational need = flatten_rats(X.vec_part(z))[0] - flatten_rats(X.vec_part(ax))[0];
      Element p = X.pair(rt({0, 0}), rt({need}));
      if (X.leq(X.add(ax, p), z)) brute = true;
    }
    bool closed = X.L_member(x, z);
    CHECK(closed == brute);
    if (closed) {
      check_witness_sound(X, x, z);
      ++pos;
    } else {
      ++neg;
    }
  }
  CHECK(pos > 15);
  CHECK(neg > 15);

  Element x = X.pair(rt({1, 1}), rt({3}));
  CHECK(X.L_member(x, X.pair(rt({2, 2}), rt({0}))));
  CHECK_FALSE(X.L_member(x, X.pair(rt({2, 0}), rt({0}))));
}

TEST_CASE("rational hyperspace: pair-search L rule matches brute force") {
  Hyperspace X(Field::rational(), 1, 3, Grid{2, 1});
  Rng rng(19);
  int pos = 0, neg = 0;
  for (int i = 0; i < 150; ++i) {
    Element x = X.sample_one(rng);
    for (int g = 0; X.is_minimal(x) && g < 64; ++g) x = X.sample_one(rng);
    Element z = i % 3 == 2 ? X.sample_upper(rng, X.sample_one(rng)) : X.sample_one(rng);
    if (i % 3 == 1)
      z = X.add(X.scale(Scalar::rational(Rational(-1, 2)), x), X.sample_minimal(rng));
    // brute: alpha from coordinate-difference ratios, t from z - alpha*x points
    bool brute = false;
    const auto& xp = x.as_points().points;
    const auto& zp = z.as_points().points;
    std::vector<Scalar> alphas = X.scalar_set();
    for (std::size_t u = 0; u < zp.size(); ++u)
      for (std::size_t v = 0; v < zp.size(); ++v)
        for (std::size_t a = 0; a < xp.size(); ++a)
          for (std::size_t b = 0; b < xp.size(); ++b) {
            Rational dx = xp[a][0].rat() - xp[b][0].rat();
            if (dx.is_zero()) continue;
            alphas.push_back(
                Scalar::rational((zp[u][0].rat() - zp[v][0].rat()) / dx));
          }
    for (const Scalar& al : alphas) {
      if (al.is_zero() || brute) continue;
      Element ax = X.scale(al, x);
      for (const Tuple& upt : zp)
        for (const Tuple& apt : ax.as_points().points) {
          Tuple t{Scalar::rational(upt[0].rat() - apt[0].rat())};
          Element p = Element::point_set(PointSet::canonical({t}));
          if (X.leq(X.add(ax, p), z)) brute = true;
        }
    }
    bool closed = X.L_member(x, z);
    CHECK(closed == brute);
    if (closed) {
      check_witness_sound(X, x, z);
      ++pos;
    } else {
      ++neg;
    }
  }
  CHECK(pos > 15);
  CHECK(neg > 15);

  // a*{0,1}+t lands in {0,1,2} for a=1,t=0 (and others); never in {0} alone
  CHECK(X.L_member(pts1({0, 1}), pts1({0, 1, 2})));
  CHECK_FALSE(X.L_member(pts1({0, 1}), pts1({0})));
  // image cardinality obstruction: 3-point sets never land in 2-point sets
  CHECK_FALSE(X.L_member(pts1({0, 1, 2}), pts1({0, 5})));
}

TEST_CASE("origin-pinned hyperspace: scaling-search L rule") {
  HyperspaceTheta X(Field::rational(), 1, 3, Grid{2, 1});
  Rng rng(23);
  int pos = 0, neg = 0;
  for (int i = 0; i < 150; ++i) {
    Element x = X.sample_one(rng);
    for (int g = 0; X.is_minimal(x) && g < 64; ++g) x = X.sample_one(rng);
    Element z = X.sample_one(rng);
    if (i % 3 == 1) z = X.scale(Scalar::rational(Rational(3, 2)), x);
    if (i % 3 == 2) z = X.sample_upper(rng, z);
    bool brute = false;
    std::vector<Scalar> alphas = ratio_alphas(X, x, z);
    for (const Scalar& al : alphas) {
      if (al.is_zero()) continue;
      if (X.leq(X.scale(al, x), z)) brute = true;  // p = {0} adds nothing
    }
    bool closed = X.L_member(x, z);
    CHECK(closed == brute);
    if (closed) {
      check_witness_sound(X, x, z);
      ++pos;
    } else {
      ++neg;
    }
  }
  CHECK(pos > 15);
  CHECK(neg > 15);
}

TEST_CASE("dictionary power: first-nonzero rule matches brute force") {
  DictionaryPower X(3);
  int pos = 0, neg = 0;
  cross_check_L(X, 29, 200, only_theta(X),
                [](const Element& x) { return zero_first_support(x); }, &pos, &neg);
  CHECK(pos > 20);
  CHECK(neg > 20);

  Element x = rt({0, 2, 1});
  CHECK(X.L_member(x, rt({0, 1, 5})));
  CHECK(X.L_member(x, rt({1, 0, 0})));
  CHECK_FALSE(X.L_member(x, rt({0, 0, 4})));
  CHECK_FALSE(X.L_member(x, rt({0, 0, 0})));
}

TEST_CASE("dictionary omega: same rule, no last position") {
  DictionaryOmega X;
  int pos = 0, neg = 0;
  cross_check_L(X, 31, 200, only_theta(X),
                [](const Element& x) { return zero_first_support(x, /*trim=*/true); },
                &pos, &neg);
  CHECK(pos > 20);
  CHECK(neg > 20);

  CHECK(X.L_member(rt({0, 2}), rt({0, 1, 5})));
  CHECK_FALSE(X.L_member(rt({0, 2}), rt({0, 0, 1})));
}

// ---------------------------------------------------------------------------
// feasibility rules vs. the definition on bounded down-sets
// ---------------------------------------------------------------------------

TEST_CASE("ray product: Q = one positive coordinate, definition agrees") {
  RayProduct X(3);
  auto down_candidates = [&X](const Element& x) {
    std::vector<Element> out;
    auto xs = flatten_rats(x);
    std::vector<std::vector<Rational>> per;
    for (const Rational& xi : xs) {
      std::vector<Rational> vals;
      for (const Rational& v : Grid{}.nonneg())
        if (v <= xi) vals.push_back(v);
      per.push_back(vals);
    }
    std::vector<std::size_t> idx(per.size(), 0);
    while (true) {
      std::vector<Rational> y;
      for (std::size_t i = 0; i < per.size(); ++i) y.push_back(per[i][idx[i]]);
      out.push_back(rt(y));
      std::size_t k = 0;
      while (k < idx.size()) {
        if (++idx[k] < per[k].size()) break;
        idx[k] = 0;
        ++k;
      }
      if (k == idx.size()) break;
    }
    return out;
  };
  for (const Element& x : {rt({1, 0, 0}), rt({0, 2, 0}), rt({1, 1, 0}), rt({2, 3, 1}),
                           rt({0, 0, {1, 2}})}) {
    bool definitional = true;
    for (const Element& y : down_candidates(x)) {
      if (X.is_minimal(y)) continue;
      REQUIRE(X.leq(y, x));
      if (!X.L_member(x, y)) definitional = false;
    }
    CHECK(X.Q_member(x) == definitional);
  }
  CHECK(X.Q_member(rt({1, 0, 0})));
  CHECK(X.Q_member(rt({0, 0, {1, 2}})));
  CHECK_FALSE(X.Q_member(rt({1, 1, 0})));
  CHECK_FALSE(X.Q_member(X.zero()));
}

TEST_CASE("cone: everything off the primitive space is feasible") {
  ConeTimesVector X(2);
  for (Rational r : {Rational(1), Rational(3), Rational(1, 2)}) {
    Element x = rt({r, 2, -1});
    CHECK(X.Q_member(x));
    // the punctured down-set is the segment below; spot check it stays in L
    for (Rational t : {Rational(1, 4), Rational(r / 2), r})
      if (t <= r && !t.is_zero()) CHECK(X.L_member(x, rt({t, 2, -1})));
  }
  CHECK_FALSE(X.Q_member(rt({0, 5, 5})));
}

TEST_CASE("hyperspaces: Q is exactly the two-point sets") {
  Hyperspace X(Field::rational(), 1, 4);
  // down-sets of point sets are their subsets, so the check is complete
  Element three = pts1({0, 1, 3});
  CHECK_FALSE(X.Q_member(three));
  CHECK_FALSE(X.L_member(three, pts1({0, 1})));  // the failing subset
  Element two = pts1({-1, 2});
  CHECK(X.Q_member(two));
  CHECK(X.L_member(two, two));
  CHECK_FALSE(X.Q_member(pts1({5})));

  HyperspaceTheta T(Field::rational(), 1, 4);
  CHECK(T.Q_member(pts1({0, 3})));
  CHECK_FALSE(T.Q_member(pts1({0, 1, 3})));
  CHECK_FALSE(T.Q_member(pts1({0})));

  // finite side: count feasible elements of the gf(2)^2 hyperspace
  Hyperspace H(Field::gf(2), 2, 4);
  int feasible = 0;
  for (const Element& e : H.carrier())
    if (H.Q_member(e)) {
      CHECK(e.as_points().points.size() == 2);
      ++feasible;
    }
  CHECK(feasible == 6);

  HyperspaceTheta TT(Field::gf(2), 2, 4);
  int tf = 0;
  for (const Element& e : TT.carrier())
    if (TT.Q_member(e)) ++tf;
  CHECK(tf == 3);
}

TEST_CASE("dictionary power: only the last axis is feasible") {
  DictionaryPower X(3);
  CHECK(X.Q_member(rt({0, 0, 2})));
  CHECK_FALSE(X.Q_member(rt({0, 1, 0})));
  CHECK_FALSE(X.Q_member(rt({1, 0, 0})));
  // the obstruction: the next axis sits below but outside L
  Element x = rt({0, 1, 0});
  Element y = rt({0, 0, 1});
  CHECK(X.leq(y, x));
  CHECK_FALSE(X.is_minimal(y));
  CHECK_FALSE(X.L_member(x, y));
}

TEST_CASE("dictionary omega: empty feasible set with explicit witnesses") {
  DictionaryOmega X;
  Rng rng(37);
  for (int i = 0; i < 100; ++i) {
    Element x = X.sample_one(rng);
    if (X.is_minimal(x)) continue;
    CHECK_FALSE(X.Q_member(x));
    Element y = X.no_basis_witness(x);
    CHECK(X.contains(y));
    CHECK(X.leq(y, x));
    CHECK_FALSE(X.is_minimal(y));
    CHECK_FALSE(X.L_member(x, y));
  }
}

TEST_CASE("subspace lattice: feasibility picks out the lines") {
  SubspaceLattice X(2, 2);
  int lines = 0;
  for (const Element& u : X.carrier()) {
    bool is_line = u.as_subspace().dim() == 1;
    CHECK(X.Q_member(u) == is_line);
    if (is_line) ++lines;
  }
  CHECK(lines == 3);
}

// ---------------------------------------------------------------------------
// recorded oracles: basis claims re-verified
// ---------------------------------------------------------------------------

namespace {
void check_oracle_basis(const Evs& X, std::uint64_t seed, int coverage_trials) {
  const FamilyOracle& o = family_oracle(X);
  REQUIRE(o.basis.has_value());
  const auto& B = *o.basis;
  for (const Element& b : B) {
    CHECK(X.contains(b));
    CHECK_FALSE(X.is_minimal(b));
    CHECK(X.Q_member(b));
  }
  for (std::size_t i = 0; i < B.size(); ++i)
    for (std::size_t j = 0; j < B.size(); ++j)
      if (i != j) CHECK_FALSE(X.L_member(B[i], B[j]));
  if (X.finite()) {
    for (const Element& z : X.carrier()) {
      if (X.is_minimal(z)) continue;
      bool covered = false;
      for (const Element& b : B)
        if (X.L_member(b, z)) covered = true;
      CHECK(covered);
    }
  } else {
    Rng rng(seed);
    for (int i = 0; i < coverage_trials; ++i) {
      Element z = X.sample_one(rng);
      if (X.is_minimal(z)) continue;
      bool covered = false;
      for (const Element& b : B)
        if (X.L_member(b, z)) covered = true;
      CHECK(covered);
    }
  }
}
}  // namespace

TEST_CASE("family oracles hold up under re-verification") {
  RayProduct ray3(3);
  CHECK(family_oracle(ray3).dimension.to_string() == "[3:0]");
  check_oracle_basis(ray3, 41, 100);

  ConeTimesVector cone2(2);
  CHECK(family_oracle(cone2).dimension.to_string() == "[1:2]");
  check_oracle_basis(cone2, 43, 100);

  EvsTimesVector xv(std::make_shared<RayProduct>(3), 2);
  CHECK(family_oracle(xv).dimension.to_string() == "[3:2]");
  CHECK(family_oracle(xv).basis->size() == 3);
  check_oracle_basis(xv, 47, 100);

  Hyperspace hq1(Field::rational(), 1, 3);
  CHECK(family_oracle(hq1).dimension.to_string() == "[1:1]");
  check_oracle_basis(hq1, 53, 100);

  Hyperspace hq2(Field::rational(), 2, 3);
  CHECK(family_oracle(hq2).dimension.to_string() == "[c:2]");
  CHECK_FALSE(family_oracle(hq2).basis.has_value());

  Hyperspace h22(Field::gf(2), 2, 4);
  CHECK(family_oracle(h22).dimension.to_string() == "[3:2]");
  CHECK(family_oracle(h22).basis->size() == 3);
  check_oracle_basis(h22, 59, 0);

  Hyperspace h31(Field::gf(3), 1, 3);
  CHECK(family_oracle(h31).dimension.to_string() == "[1:1]");
  CHECK(family_oracle(h31).basis->size() == 1);
  check_oracle_basis(h31, 61, 0);

  HyperspaceTheta t1(Field::rational(), 1, 3);
  CHECK(family_oracle(t1).dimension.to_string() == "[1:0]");
  check_oracle_basis(t1, 67, 100);

  HyperspaceTheta t22(Field::gf(2), 2, 4);
  CHECK(family_oracle(t22).dimension.to_string() == "[3:0]");
  check_oracle_basis(t22, 71, 0);

  SubspaceLattice l22(2, 2);
  CHECK(family_oracle(l22).dimension.to_string() == "[3:0]");
  check_oracle_basis(l22, 73, 0);

  SubspaceLattice l32(3, 2);
  CHECK(family_oracle(l32).dimension.to_string() == "[4:0]");
  check_oracle_basis(l32, 79, 0);

  DictionaryPower d3(3);
  CHECK(family_oracle(d3).dimension.to_string() == "[1:0]");
  check_oracle_basis(d3, 83, 100);

  DictionaryOmega om;
  CHECK(family_oracle(om).dimension.no_basis);
  CHECK_FALSE(family_oracle(om).basis.has_value());
  CHECK(family_oracle(om).dimension.to_string() == "no-basis");
}

TEST_CASE("product composes carriers, axioms, and oracles") {
  auto P = product_evs({std::make_shared<Hyperspace>(Field::gf(2), 1, 2),
                        std::make_shared<SubspaceLattice>(2, 2)});
  CHECK(P->describe() == "product(hyperspace(gf(2),d=1),subspace_lattice(2,2))");
  CHECK(P->finite());
  CHECK(P->carrier_size() == 15);
  CHECK(P->minimal_elements().size() == 2);
  CHECK(validate_axioms(*P).all_pass());
  CHECK(family_oracle(*P).dimension.to_string() == "[4:1]");
  CHECK(family_oracle(*P).basis->size() == 4);
  check_oracle_basis(*P, 89, 0);

  CHECK_THROWS_AS(product_evs({std::make_shared<Hyperspace>(Field::gf(2), 1, 2),
                               std::make_shared<RayProduct>(1)}),
                  InputError);

  auto empty = product_evs({});
  CHECK(empty->carrier_size() == 1);
  CHECK(validate_axioms(*empty).all_pass());
  CHECK(family_oracle(*empty).dimension.to_string() == "[0:0]");
  CHECK(family_oracle(*empty).basis->empty());
}

// ---------------------------------------------------------------------------
// the deliberately broken instance
// ---------------------------------------------------------------------------

TEST_CASE("punctured cone fails exactly the primitive-below axiom") {
  PuncturedCone X(1);
  CHECK(X.contains(rt({1, 2})));
  CHECK_FALSE(X.contains(rt({0, 2})));  // the removed primitives
  CHECK(X.contains(X.zero()));

  auto rep = validate_axioms(
      X, {ValidateOptions::Mode::sampled, /*seed=*/5, /*trials=*/500});
  CHECK_FALSE(rep.all_pass());
  CHECK(rep.failed_slots() == std::vector<std::string>{"A6"});
  const auto& w = rep.verdicts.at("A6").witness;
  REQUIRE(w.has_value());
  CHECK(witness_violates(X, "A6", *w));
  // the witness element has a nonzero vector part: nothing primitive below it
  auto coords = flatten_rats(w->element("x"));
  CHECK_FALSE(coords[1].is_zero());
}

// ---------------------------------------------------------------------------
// symbolic sub-instances
// ---------------------------------------------------------------------------

TEST_CASE("ray sections behave like the ray") {
  auto ambient = std::make_shared<RayProduct>(2);
  RaySection S(ambient, rt({1, 2}));
  CHECK(S.contains(rt({2, 4})));
  CHECK(S.section_coefficient(rt({2, 4})) == Rational(2));
  CHECK_FALSE(S.contains(rt({2, 3})));
  CHECK(S.contains(S.zero()));
  CHECK(S.Q_member(rt({3, 6})));
  CHECK_FALSE(S.Q_member(S.zero()));
  CHECK(S.L_member(rt({2, 4}), rt({{1, 2}, 1})));
  check_witness_sound(S, rt({2, 4}), rt({{1, 2}, 1}));
  CHECK(family_oracle(S).dimension.to_string() == "[1:0]");

  auto rep = validate_axioms(
      S, {ValidateOptions::Mode::sampled, /*seed=*/3, /*trials=*/300});
  CHECK(rep.all_pass());

  CHECK_THROWS_AS(RaySection(ambient, ambient->zero()), DomainError);
  CHECK_THROWS_AS(RaySection(ambient, rt({1, -2})), DomainError);
  // cone elements with a nonzero vector part do not sit above the identity
  auto cone = std::make_shared<ConeTimesVector>(1);
  CHECK_THROWS_AS(RaySection(cone, rt({1, 5})), DomainError);
  CHECK_NOTHROW(RaySection(cone, rt({1, 0})));
}

TEST_CASE("graded views restrict ray-tuple ambients") {
  auto ambient = std::make_shared<EvsTimesVector>(std::make_shared<RayProduct>(3), 2);
  GradedView G(ambient, {0, 1}, {0});
  auto elem = [&](std::vector<Rational> ray, std::vector<Rational> vec) {
    Tuple rt_, vt_;
    for (Rational& q : ray) rt_.push_back(Scalar::rational(std::move(q)));
    for (Rational& q : vec) vt_.push_back(Scalar::rational(std::move(q)));
    return Element::composite({Element::tuple(rt_), Element::tuple(vt_)});
  };
  CHECK(G.contains(elem({1, 2, 0}, {3, 0})));
  CHECK_FALSE(G.contains(elem({1, 0, 2}, {3, 0})));
  CHECK_FALSE(G.contains(elem({1, 2, 0}, {0, 3})));
  CHECK(G.is_minimal(elem({0, 0, 0}, {5, 0})));

  CHECK(G.L_member(elem({1, 2, 0}, {3, 0}), elem({2, 2, 0}, {1, 0})));
  check_witness_sound(G, elem({1, 2, 0}, {3, 0}), elem({2, 2, 0}, {1, 0}));
  CHECK_FALSE(G.L_member(elem({1, 2, 0}, {3, 0}), elem({0, 2, 0}, {1, 0})));
  CHECK(G.Q_member(elem({0, 2, 0}, {1, 0})));
  CHECK_FALSE(G.Q_member(elem({1, 2, 0}, {1, 0})));

  CHECK(family_oracle(G).dimension.to_string() == "[2:1]");
  CHECK(family_oracle(G).basis->size() == 2);
  check_oracle_basis(G, 97, 100);

  auto rep = validate_axioms(
      G, {ValidateOptions::Mode::sampled, /*seed=*/9, /*trials=*/300});
  CHECK(rep.all_pass());

  CHECK_THROWS_AS(GradedView(ambient, {0, 7}, {}), InputError);
  CHECK_THROWS_AS(GradedView(ambient, {0}, {5}), InputError);
  CHECK_THROWS_AS(
      GradedView(std::make_shared<DictionaryPower>(2), {0}, {}), InputError);

  // plain ray-product ambient: no vector part at all
  GradedView G2(std::make_shared<RayProduct>(4), {1, 3}, {});
  CHECK(G2.contains(rt({0, 1, 0, 2})));
  CHECK_FALSE(G2.contains(rt({1, 1, 0, 2})));
  CHECK(family_oracle(G2).dimension.to_string() == "[2:0]");
  CHECK(validate_axioms(
            G2, {ValidateOptions::Mode::sampled, /*seed=*/15, /*trials=*/200})
            .all_pass());
}

// ---------------------------------------------------------------------------
// construction entry points
// ---------------------------------------------------------------------------

TEST_CASE("family documents construct the catalog") {
  CHECK(make_family(json{{"tag", "ray"}})->describe() == "ray");
  CHECK(make_family(json{{"tag", "ray_product"}, {"n", 3}})->describe() ==
        "ray_product(3)");
  CHECK(make_family(json{{"tag", "cone_times_vector"}, {"m", 2}})->describe() ==
        "cone_times_vector(2)");
  CHECK(make_family(json{{"tag", "evs_times_vector"},
                         {"base", json{{"tag", "ray_product"}, {"n", 3}}},
                         {"m", 2}})
            ->describe() == "evs_times_vector(ray_product(3),2)");
  auto h = make_family(json{
      {"tag", "hyperspace"}, {"field", json{{"kind", "gf"}, {"p", 2}}}, {"dim", 1}});
  CHECK(h->describe() == "hyperspace(gf(2),d=1)");
  CHECK(h->carrier_size() == 3);
  CHECK(make_family(json{{"tag", "hyperspace"},
                         {"field", json{{"kind", "rational"}}},
                         {"dim", 1}})
            ->describe() == "hyperspace(rational,d=1,bound=3)");
  CHECK(make_family(json{{"tag", "hyperspace_with_theta"},
                         {"field", json{{"kind", "rational"}}},
                         {"dim", 1},
                         {"bound", 4}})
            ->describe() == "hyperspace_with_theta(rational,d=1,bound=4)");
  CHECK(make_family(json{{"tag", "subspace_lattice"}, {"p", 2}, {"n", 2}})
            ->describe() == "subspace_lattice(2,2)");
  CHECK(make_family(json{{"tag", "dictionary_power"}, {"base", "ray"}, {"n", 3}})
            ->describe() == "dictionary_power(ray,3)");
  CHECK(make_family(json{{"tag", "dictionary_omega"}})->describe() ==
        "dictionary_omega(ray)");
  auto prod = make_family(json{
      {"tag", "product"},
      {"components",
       json::array({json{{"tag", "hyperspace"},
                         {"field", json{{"kind", "gf"}, {"p", 2}}},
                         {"dim", 1}},
                    json{{"tag", "subspace_lattice"}, {"p", 2}, {"n", 2}}})}});
  CHECK(prod->carrier_size() == 15);

  json table_doc{
      {"tag", "finite_table"},
      {"document",
       json{{"field", json{{"kind", "rational"}}},
            {"elements", 2},
            {"zero", 0},
            {"add", {{0, 1}, {1, 1}}},
            {"scalar",
             {{0, 0, 0}, {0, 1, 0}, {1, 0, 0}, {1, 1, 1}, {-1, 0, 0}, {-1, 1, 1}}},
            {"leq", {{0, 0}, {1, 1}, {0, 1}}}}}};
  CHECK(make_family(table_doc)->carrier_size() == 2);
}

TEST_CASE("malformed family documents are rejected") {
  auto reject = [](json doc) {
    CHECK_THROWS_AS(make_family(doc), InputError);
  };
  reject(json{{"tag", "no_such_family"}});
  reject(json{{"n", 3}});
  reject(json{{"tag", "ray_product"}, {"n", 0}});
  reject(json{{"tag", "ray_product"}});
  reject(json{{"tag", "cone_times_vector"}, {"m", -1}});
  reject(json{{"tag", "evs_times_vector"}, {"m", 2}});
  reject(json{{"tag", "hyperspace"}, {"dim", 1}});
  reject(json{{"tag", "hyperspace"},
              {"field", json{{"kind", "gf"}, {"p", 2}}},
              {"dim", 1},
              {"bound", 1}});  // truncation would break Minkowski closure
  reject(json{{"tag", "hyperspace"},
              {"field", json{{"kind", "gf"}, {"p", 3}}},
              {"dim", 2}});  // 9 ambient vectors exceed the enumeration cap
  reject(json{{"tag", "subspace_lattice"}, {"p", 4}, {"n", 2}});
  reject(json{{"tag", "dictionary_power"}, {"base", "cone"}, {"n", 2}});
  reject(json{{"tag", "finite_table"}});
  reject(json{{"tag", "product"}, {"components", json{{"not", "array"}}}});
  reject(json{{"tag", "ray"}, {"grid", json{{"max_abs", 0}}}});

  // the vector part is rational, so a gf base cannot be attached
  CHECK_THROWS_AS(EvsTimesVector(std::make_shared<SubspaceLattice>(2, 2), 1),
                  InputError);
}

// ---------------------------------------------------------------------------
// the independent-but-not-generating construction
// ---------------------------------------------------------------------------

TEST_CASE("three-point classes at grid scale two") {
  HCounterexample H = counterexample_H(2);
  CHECK(H.three_point_sets == 6);
  REQUIRE(H.representatives.size() == 3);
  CHECK(H.representatives[0] == pts1({-2, -1, 0}));
  CHECK(H.representatives[1] == pts1({-2, 0, 1}));
  CHECK(H.representatives[2] == pts1({-2, 0, 2}));
  CHECK(H.pairwise_independent);
  CHECK(H.covers_every_grid_triple);
  CHECK_FALSE(H.is_generator);
  CHECK(H.uncovered == pts1({0, 1}));
  for (const Element& r : H.representatives)
    CHECK_FALSE(H.ambient->L_member(r, H.uncovered));

  json j = H.to_json();
  CHECK(j["class_count"] == 3);
  CHECK(j["pairwise_independent"] == true);
  CHECK(j["maximal_at_grid_scale"] == true);
  CHECK(j["generates"] == false);
  CHECK(j["covered_larger_example_holds"] == true);

  HCounterexample H1 = counterexample_H(1);
  CHECK(H1.representatives.size() == 1);
  CHECK(H1.representatives[0] == pts1({-1, 0, 1}));
  CHECK_THROWS_AS(counterexample_H(0), InputError);
}

// ---------------------------------------------------------------------------
// determinism
// ---------------------------------------------------------------------------

TEST_CASE("sampled validation is reproducible for a fixed seed") {
  RayProduct X(2);
  ValidateOptions opt{ValidateOptions::Mode::sampled, /*seed=*/99, /*trials=*/200};
  auto a = validate_axioms(X, opt);
  auto b = validate_axioms(X, opt);
  CHECK(a.to_json() == b.to_json());
}
