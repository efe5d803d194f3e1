#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <nlohmann/json.hpp>
#include <set>

#include "doctest.h"
#include "evs/families.hpp"
#include "evs/table.hpp"
#include "evs/testing_sets.hpp"

using namespace evs;
using nlohmann::json;

namespace {

EvsPtr fam(json spec) { return make_family(spec); }

Element lit(const Evs& X, const char* text) {
  return parse_element_literal(X.field(), text);
}

ValidateOptions sampled(std::uint64_t seed, std::size_t trials) {
  ValidateOptions opt;
  opt.mode = ValidateOptions::Mode::sampled;
  opt.seed = seed;
  opt.trials = trials;
  return opt;
}

// GF(2) table with minimals {t, q} and one element x above t. The add table
// sends x+q back onto the primitive q, so the testing-set laws about
// primitives break while the order-driven ones keep holding. (q+q=t makes q
// cancellable; associativity is beside the point here.)
json primitive_absorber_doc() {
  return json{
      {"field", {{"kind", "gf"}, {"p", 2}}},
      {"elements", 3},
      {"zero", 0},
      {"add", {{0, 1, 2}, {1, 0, 1}, {2, 1, 2}}},
      {"scalar", {{0, 0, 0}, {0, 1, 0}, {0, 2, 0}, {1, 0, 0}, {1, 1, 1}, {1, 2, 2}}},
      {"leq", {{0, 0}, {1, 1}, {2, 2}, {0, 2}}},
  };
}

json trivial_doc() {
  return json{
      {"field", {{"kind", "rational"}}},
      {"elements", 1},
      {"zero", 0},
      {"add", {{0}}},
      {"scalar", {{0, 0, 0}, {1, 0, 0}, {-1, 0, 0}}},
      {"leq", {{0, 0}}},
  };
}

}  // namespace

TEST_CASE("membership agrees with the defining witnesses") {
  auto rp2 = fam({{"tag", "ray_product"}, {"n", 2}});
  Element e1 = lit(*rp2, "(1,0)");
  CHECK(testing_set_membership(*rp2, e1, lit(*rp2, "(3,1)")));
  CHECK_FALSE(testing_set_membership(*rp2, e1, lit(*rp2, "(0,1)")));

  auto ht = fam({{"tag", "hyperspace_with_theta"},
                 {"field", {{"kind", "rational"}}},
                 {"dim", 1}});
  Element x025 = lit(*ht, "{0,2,5}");
  CHECK_FALSE(testing_set_membership(*ht, x025, lit(*ht, "{0,1}")));
  CHECK(testing_set_membership(*ht, x025, lit(*ht, "{0,2,5,7}")));

  auto d2 = fam({{"tag", "dictionary_power"}, {"base", "ray"}, {"n", 2}});
  CHECK(testing_set_membership(*d2, lit(*d2, "(0,1)"), lit(*d2, "(1,0)")));
  CHECK_FALSE(testing_set_membership(*d2, lit(*d2, "(1,0)"), lit(*d2, "(0,1)")));

  CHECK_THROWS_AS(testing_set_membership(*rp2, rp2->zero(), e1), DomainError);
  auto h3 =
      fam({{"tag", "hyperspace"}, {"field", {{"kind", "gf"}, {"p", 3}}}, {"dim", 1}});
  CHECK_THROWS_AS(testing_set_membership(*h3, lit(*h3, "{0}"), lit(*h3, "{0,1}")),
                  DomainError);
  CHECK_THROWS_AS(testing_set_membership(*rp2, e1, lit(*rp2, "(-1,0)")),
                  InputError);
}

TEST_CASE("explicit testing sets on finite carriers") {
  auto h2 =
      fam({{"tag", "hyperspace"}, {"field", {{"kind", "gf"}, {"p", 2}}}, {"dim", 1}});
  TestingSet L = testing_set(*h2, lit(*h2, "{0,1}"));
  REQUIRE(L.elements.has_value());
  CHECK(*L.elements == std::vector<Element>{lit(*h2, "{0,1}")});
  CHECK(L.member(*h2, lit(*h2, "{0,1}")));
  CHECK_FALSE(L.member(*h2, lit(*h2, "{0}")));
  CHECK(L.to_json().contains("elements"));

  auto h3 =
      fam({{"tag", "hyperspace"}, {"field", {{"kind", "gf"}, {"p", 3}}}, {"dim", 1}});
  TestingSet L3 = testing_set(*h3, lit(*h3, "{0,1}"));
  REQUIRE(L3.elements.has_value());
  CHECK(L3.elements->size() == 4);
  for (const char* t : {"{0,1}", "{0,2}", "{1,2}", "{0,1,2}"})
    CHECK(L3.member(*h3, lit(*h3, t)));

  auto rp2 = fam({{"tag", "ray_product"}, {"n", 2}});
  TestingSet Lr = testing_set(*rp2, lit(*rp2, "(1,1)"));
  CHECK_FALSE(Lr.elements.has_value());
  CHECK(Lr.member(*rp2, lit(*rp2, "(3,5)")));
  CHECK_FALSE(Lr.member(*rp2, lit(*rp2, "(0,1)")));
  CHECK(Lr.to_json()["representation"] == "predicate");
  CHECK(Lr.scope == rp2->describe());
}

TEST_CASE("testing-set invariants hold pointwise on finite instances") {
  for (json spec : {json{{"tag", "hyperspace"},
                         {"field", {{"kind", "gf"}, {"p", 3}}},
                         {"dim", 1}},
                    json{{"tag", "hyperspace"},
                         {"field", {{"kind", "gf"}, {"p", 2}}},
                         {"dim", 2}},
                    json{{"tag", "subspace_lattice"}, {"p", 2}, {"n", 2}}}) {
    auto X = fam(spec);
    for (const Element& x : X->carrier()) {
      if (X->is_minimal(x)) continue;
      TestingSet L = testing_set(*X, x);
      REQUIRE(L.elements.has_value());
      std::set<Element> members(L.elements->begin(), L.elements->end());
      CHECK(members.count(x));
      for (const Element& z : *L.elements) {
        CHECK_FALSE(X->is_minimal(z));
        for (const Element& w : X->carrier())
          if (X->leq(z, w)) CHECK(members.count(w));
      }
    }
  }
}

TEST_CASE("orderly dependence in relative and ambient scope") {
  auto ht = fam({{"tag", "hyperspace_with_theta"},
                 {"field", {{"kind", "rational"}}},
                 {"dim", 1}});
  Element a = lit(*ht, "{0,2,5}");
  Element b = lit(*ht, "{0,-2,3}");
  CHECK_FALSE(orderly_dependent(*ht, a, b));

  auto hq = fam(
      {{"tag", "hyperspace"}, {"field", {{"kind", "rational"}}}, {"dim", 1}});
  CHECK(orderly_dependent(*hq, lit(*hq, "{0,2,5}"), lit(*hq, "{0,-2,3}")));

  auto rp2 = fam({{"tag", "ray_product"}, {"n", 2}});
  Element d = lit(*rp2, "(1,1)");
  CHECK(orderly_dependent(*rp2, d, d));
}

TEST_CASE("independence reports") {
  auto rp3 = fam({{"tag", "ray_product"}, {"n", 3}});
  auto rep = is_orderly_independent_set(
      *rp3, {lit(*rp3, "(1,0,0)"), lit(*rp3, "(0,1,0)"), lit(*rp3, "(0,0,1)")});
  CHECK(rep.independent);
  CHECK(rep.set_checked.size() == 3);
  CHECK_FALSE(rep.witness.has_value());

  auto rp2 = fam({{"tag", "ray_product"}, {"n", 2}});
  rep = is_orderly_independent_set(*rp2,
                                   {lit(*rp2, "(1,0)"), lit(*rp2, "(2,0)")});
  CHECK_FALSE(rep.independent);
  REQUIRE(rep.witness.has_value());
  CHECK(orderly_dependent(*rp2, rep.witness->first, rep.witness->second));
  CHECK_FALSE(rep.direction.empty());
  json j = rep.to_json();
  CHECK(j["independent"] == false);
  CHECK(j["witness"].contains("direction"));

  // Duplicates collapse before the pair scan.
  rep = is_orderly_independent_set(*rp2, {lit(*rp2, "(1,0)"), lit(*rp2, "(1,0)")});
  CHECK(rep.independent);
  CHECK(rep.set_checked.size() == 1);

  auto lat = fam({{"tag", "subspace_lattice"}, {"p", 2}, {"n", 2}});
  std::vector<Element> lines;
  for (const Element& x : lat->carrier()) {
    std::size_t below = 0;
    for (const Element& y : lat->carrier())
      if (lat->leq(y, x)) ++below;
    if (below == 2) lines.push_back(x);  // itself and the zero subspace
  }
  REQUIRE(lines.size() == 3);
  CHECK(is_orderly_independent_set(*lat, lines).independent);

  CHECK_THROWS_AS(is_orderly_independent_set(*rp2, {rp2->zero()}), DomainError);
}

TEST_CASE("generator verdicts") {
  auto h3 =
      fam({{"tag", "hyperspace"}, {"field", {{"kind", "gf"}, {"p", 3}}}, {"dim", 1}});
  auto rep = is_generator(*h3, {lit(*h3, "{0,1}")});
  CHECK(rep.ok());
  CHECK(rep.mode == "exhaustive");
  CHECK(rep.status == AxiomVerdict::Status::pass);

  // The whole non-primitive part always generates.
  std::vector<Element> all_np;
  for (const Element& z : h3->carrier())
    if (!h3->is_minimal(z)) all_np.push_back(z);
  CHECK(is_generator(*h3, all_np).ok());

  // The full set {0,1,2} only tests itself: everything else is uncovered.
  rep = is_generator(*h3, {lit(*h3, "{0,1,2}")});
  CHECK_FALSE(rep.ok());
  REQUIRE(rep.uncovered.has_value());
  CHECK_FALSE(testing_set_membership(*h3, lit(*h3, "{0,1,2}"), *rep.uncovered));

  auto rp2 = fam({{"tag", "ray_product"}, {"n", 2}});
  rep = is_generator(*rp2, {lit(*rp2, "(1,0)")}, sampled(3, 500));
  CHECK_FALSE(rep.ok());
  CHECK(rep.mode == "sampled");
  REQUIRE(rep.uncovered.has_value());
  CHECK_FALSE(rp2->is_minimal(*rep.uncovered));
  CHECK_FALSE(rp2->L_member(lit(*rp2, "(1,0)"), *rep.uncovered));

  rep = is_generator(*rp2, {lit(*rp2, "(1,0)"), lit(*rp2, "(0,1)")},
                     sampled(3, 500));
  CHECK(rep.ok());
  CHECK(rep.status == AxiomVerdict::Status::sampled_pass);
  CHECK(rep.to_json()["status"] == "sampled-pass");

  // Empty sets generate only when nothing needs covering.
  auto trivial = TableEvs::from_json(trivial_doc());
  CHECK(is_generator(*trivial, {}).ok());
  CHECK_FALSE(is_generator(*h3, {}).ok());
}

TEST_CASE("property suite passes exhaustively on finite instances") {
  for (json spec : {json{{"tag", "hyperspace"},
                         {"field", {{"kind", "gf"}, {"p", 2}}},
                         {"dim", 1}},
                    json{{"tag", "hyperspace"},
                         {"field", {{"kind", "gf"}, {"p", 3}}},
                         {"dim", 1}},
                    json{{"tag", "hyperspace"},
                         {"field", {{"kind", "gf"}, {"p", 2}}},
                         {"dim", 2}},
                    json{{"tag", "subspace_lattice"}, {"p", 2}, {"n", 2}}}) {
    auto X = fam(spec);
    PropertyReport rep = check_L_properties(*X);
    INFO(X->describe());
    CHECK(rep.all_pass());
    CHECK(rep.failed_slots().empty());
    CHECK(rep.mode == "exhaustive");
    CHECK(rep.verdicts.size() == 6);
  }

  json j = check_L_properties(
               *fam({{"tag", "hyperspace"},
                     {"field", {{"kind", "gf"}, {"p", 2}}},
                     {"dim", 1}}))
               .to_json();
  for (const char* slot :
       {"base-inside-up-closed", "larger-base-smaller-set", "base-invariant",
        "primitive-free", "membership-transitive", "sum-in-both"})
    CHECK(j["verdicts"][slot]["status"] == "pass");
}

TEST_CASE("property suite passes on sampled families") {
  auto rp2 = fam({{"tag", "ray_product"}, {"n", 2}});
  PropertyReport rep = check_L_properties(*rp2, sampled(1, 1000));
  CHECK(rep.all_pass());
  CHECK(rep.mode == "sampled");
  CHECK(rep.to_json()["trials"] == 1000);

  for (json spec :
       {json{{"tag", "cone_times_vector"}, {"m", 1}},
        json{{"tag", "evs_times_vector"},
             {"base", {{"tag", "ray_product"}, {"n", 2}}},
             {"m", 1}},
        json{{"tag", "hyperspace"}, {"field", {{"kind", "rational"}}}, {"dim", 1}},
        json{{"tag", "hyperspace_with_theta"},
             {"field", {{"kind", "rational"}}},
             {"dim", 1}},
        json{{"tag", "dictionary_power"}, {"base", "ray"}, {"n", 2}},
        json{{"tag", "dictionary_omega"}, {"base", "ray"}}}) {
    auto X = fam(spec);
    PropertyReport r = check_L_properties(*X, sampled(5, 150));
    INFO(X->describe());
    CHECK(r.all_pass());
  }

  CHECK_THROWS_AS(check_L_properties(*rp2), InputError);  // exhaustive + infinite
}

TEST_CASE("property suite reports real failures with live witnesses") {
  auto bad = TableEvs::from_json(primitive_absorber_doc());
  PropertyReport rep = check_L_properties(*bad);
  CHECK_FALSE(rep.all_pass());
  CHECK(rep.failed_slots() ==
        std::vector<std::string>{"base-invariant", "primitive-free"});

  const auto& pf = rep.verdicts.at("primitive-free");
  REQUIRE(pf.witness.has_value());
  CHECK(bad->is_minimal(pf.witness->element("m")));
  CHECK(bad->L_member(pf.witness->element("x"), pf.witness->element("m")));

  const auto& bi = rep.verdicts.at("base-invariant");
  REQUIRE(bi.witness.has_value());
  Element landed = bad->add(bad->scale(bi.witness->scalar("alpha"),
                                       bi.witness->element("y")),
                            bi.witness->element("p"));
  CHECK(bad->is_minimal(landed));
}

TEST_CASE("relative scopes shrink testing sets but keep independence") {
  auto h22 =
      fam({{"tag", "hyperspace"}, {"field", {{"kind", "gf"}, {"p", 2}}}, {"dim", 2}});
  std::vector<Element> with_origin;
  for (const Element& a : h22->carrier())
    if (h22->leq(h22->zero(), a)) with_origin.push_back(a);
  RestrictedEvs Y(h22, with_origin, "origin-sets");
  REQUIRE(Y.carrier_size() == 8);
  CHECK(Y.minimal_elements() == std::vector<Element>{h22->zero()});

  for (const Element& y : Y.carrier()) {
    if (Y.is_minimal(y)) continue;
    for (const Element& z : Y.carrier())
      if (Y.L_member(y, z)) CHECK(h22->L_member(y, z));
  }

  // Strictness: translates give the ambient set members the relative one
  // cannot reach.
  Element x = lit(*h22, "{(0,0),(1,0)}");
  Element far = lit(*h22, "{(0,0),(0,1),(1,1)}");
  CHECK(h22->L_member(x, far));
  CHECK_FALSE(Y.L_member(x, far));

  // Dependence found relative to Y persists in the ambient instance, i.e.
  // ambient-independent sets stay independent in the relative scope.
  for (const Element& a : Y.carrier()) {
    if (Y.is_minimal(a)) continue;
    for (const Element& b : Y.carrier()) {
      if (Y.is_minimal(b) || b == a) continue;
      if (orderly_dependent(Y, a, b)) CHECK(orderly_dependent(*h22, a, b));
    }
  }
  Element y2 = lit(*h22, "{(0,0),(0,1)}");
  CHECK_FALSE(orderly_dependent(*h22, x, y2));
  CHECK_FALSE(orderly_dependent(Y, x, y2));

  PropertyReport rep = check_L_properties(Y);
  CHECK(rep.all_pass());
}
