#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <nlohmann/json.hpp>

#include "doctest.h"
#include "evs/core_ops.hpp"
#include "evs/families.hpp"
#include "evs/table.hpp"

using namespace evs;
using nlohmann::json;

namespace {

EvsPtr fam(json spec) { return make_family(spec); }

Element lit(const Evs& X, const char* text) {
  return parse_element_literal(X.field(), text);
}

// GF(2) table whose minimal elements {t, a} fail additive closure: a+a lands
// on the non-minimal b.
json broken_minimal_closure_doc() {
  return json{
      {"field", {{"kind", "gf"}, {"p", 2}}},
      {"elements", 3},
      {"zero", 0},
      {"add", {{0, 1, 2}, {1, 2, 2}, {2, 2, 2}}},
      {"scalar", {{0, 0, 0}, {0, 1, 0}, {0, 2, 0}, {1, 0, 0}, {1, 1, 1}, {1, 2, 2}}},
      {"leq", {{0, 0}, {1, 1}, {2, 2}, {0, 2}}},
  };
}

// Three mutually-cancelling minimal elements over GF(2): closed, but 3 is not
// a power of 2.
json wrong_size_minimal_doc() {
  return json{
      {"field", {{"kind", "gf"}, {"p", 2}}},
      {"elements", 3},
      {"zero", 0},
      {"add", {{0, 1, 2}, {1, 0, 0}, {2, 0, 0}}},
      {"scalar", {{0, 0, 0}, {0, 1, 0}, {0, 2, 0}, {1, 0, 0}, {1, 1, 1}, {1, 2, 2}}},
      {"leq", {{0, 0}, {1, 1}, {2, 2}}},
  };
}

// Rational two-element table: {t, p} with p + p = t and -1*p = p. Both are
// minimal, so the set is a group but its Q-dimension is not determined by a
// declared-scalar table.
json rational_pair_doc() {
  return json{
      {"field", {{"kind", "rational"}}},
      {"elements", 2},
      {"zero", 0},
      {"add", {{0, 1}, {1, 0}}},
      {"scalar", {{0, 0, 0}, {0, 1, 0}, {1, 0, 0}, {1, 1, 1}, {-1, 0, 0}, {-1, 1, 1}}},
      {"leq", {{0, 0}, {1, 1}}},
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

TEST_CASE("primitive space: enumerable carriers") {
  auto h3 = fam({{"tag", "hyperspace"}, {"field", {{"kind", "gf"}, {"p", 3}}}, {"dim", 1}});
  auto ps = primitive_space(*h3);
  REQUIRE(ps.elements.has_value());
  CHECK(ps.elements->size() == 3);
  for (const Element& m : *ps.elements) CHECK(m.as_points().points.size() == 1);
  CHECK(ps.dimension == 1);
  CHECK(ps.mode == "exhaustive");
  CHECK(ps.dimension_string() == "1");

  auto h22 = fam({{"tag", "hyperspace"}, {"field", {{"kind", "gf"}, {"p", 2}}}, {"dim", 2}});
  CHECK(primitive_space(*h22).dimension == 2);
  CHECK(primitive_space(*h22).elements->size() == 4);

  auto rp = fam({{"tag", "ray_product"}, {"n", 2}});
  ps = primitive_space(*rp);
  CHECK(ps.elements == std::vector<Element>{rp->zero()});
  CHECK(ps.dimension == 0);

  auto lat = fam({{"tag", "subspace_lattice"}, {"p", 2}, {"n", 2}});
  ps = primitive_space(*lat);
  CHECK(ps.elements->size() == 1);
  CHECK(ps.dimension == 0);

  json j = ps.to_json();
  CHECK(j.contains("elements"));
  CHECK(j["dimension"] == 0);
}

TEST_CASE("primitive space: symbolic carriers take the recorded dimension") {
  ValidateOptions opt;
  opt.seed = 7;
  opt.trials = 300;

  auto cone = fam({{"tag", "cone_times_vector"}, {"m", 2}});
  auto ps = primitive_space(*cone, opt);
  CHECK_FALSE(ps.elements.has_value());
  CHECK(ps.dimension == 2);
  CHECK(ps.mode == "sampled");
  CHECK(ps.to_json().contains("description"));

  auto xv = fam({{"tag", "evs_times_vector"},
                 {"base", {{"tag", "ray_product"}, {"n", 2}}},
                 {"m", 3}});
  CHECK(primitive_space(*xv, opt).dimension == 3);

  auto hq = fam({{"tag", "hyperspace"}, {"field", {{"kind", "rational"}}}, {"dim", 1}});
  ps = primitive_space(*hq, opt);
  CHECK(ps.dimension == 1);
  CHECK_FALSE(ps.elements.has_value());

  auto hq2 = fam({{"tag", "hyperspace"}, {"field", {{"kind", "rational"}}}, {"dim", 2}});
  CHECK(primitive_space(*hq2, opt).dimension == 2);
}

TEST_CASE("primitive space: structural failures are reported as errors") {
  auto bad = TableEvs::from_json(broken_minimal_closure_doc());
  CHECK_THROWS_WITH_AS(primitive_space(*bad),
                       doctest::Contains("leaves the set"), DomainError);

  auto odd = TableEvs::from_json(wrong_size_minimal_doc());
  CHECK_THROWS_WITH_AS(primitive_space(*odd),
                       doctest::Contains("not a power of 2"), DomainError);

  auto pair = TableEvs::from_json(rational_pair_doc());
  auto ps = primitive_space(*pair);
  CHECK_FALSE(ps.dimension.has_value());
  CHECK(ps.dimension_token == "indeterminate");
  CHECK(ps.elements->size() == 2);
}

TEST_CASE("primitives below an element") {
  auto h3 = fam({{"tag", "hyperspace"}, {"field", {{"kind", "gf"}, {"p", 3}}}, {"dim", 1}});
  auto p = primitives_of(*h3, lit(*h3, "{0,2}"));
  CHECK(p.elements == std::vector<Element>{lit(*h3, "{0}"), lit(*h3, "{2}")});

  auto rp = fam({{"tag", "ray_product"}, {"n", 2}});
  CHECK(primitives_of(*rp, lit(*rp, "(1,1)")).elements ==
        std::vector<Element>{rp->zero()});

  auto cone = fam({{"tag", "cone_times_vector"}, {"m", 1}});
  CHECK(primitives_of(*cone, lit(*cone, "(2,5)")).elements ==
        std::vector<Element>{lit(*cone, "(0,5)")});

  CHECK_THROWS_AS(primitives_of(*rp, lit(*rp, "(1,-1)")), InputError);

  // The punctured cone keeps every axiom except the support one; there is no
  // minimal element under (1,5).
  auto punct = std::make_shared<PuncturedCone>(1);
  CHECK_THROWS_WITH_AS(primitives_of(*punct, lit(*punct, "(1,5)")),
                       doctest::Contains("support axiom"), DomainError);

  json j = p.to_json();
  CHECK(j["primitives"].size() == 2);
}

TEST_CASE("subevs validation: explicit finite subsets") {
  auto h2 = fam({{"tag", "hyperspace"}, {"field", {{"kind", "gf"}, {"p", 2}}}, {"dim", 1}});
  auto rep = validate_subevs(*h2, std::vector<Element>{h2->zero()});
  CHECK(rep.ok());
  CHECK(rep.mode == "exhaustive");
  CHECK(rep.relative_primitives == std::vector<Element>{h2->zero()});

  // Origin-pinned sets inside the full gf(2)^2 hyperspace: a genuine subevs.
  auto h22 = fam({{"tag", "hyperspace"}, {"field", {{"kind", "gf"}, {"p", 2}}}, {"dim", 2}});
  std::vector<Element> with_origin;
  for (const Element& a : h22->carrier())
    if (h22->leq(h22->zero(), a)) with_origin.push_back(a);
  CHECK(with_origin.size() == 8);
  rep = validate_subevs(*h22, with_origin);
  CHECK(rep.ok());
  CHECK(rep.relative_primitives == std::vector<Element>{h22->zero()});

  // Dropping a Minkowski sum breaks closure with a re-checkable witness.
  auto h3 = fam({{"tag", "hyperspace"}, {"field", {{"kind", "gf"}, {"p", 3}}}, {"dim", 1}});
  rep = validate_subevs(*h3, std::vector<Element>{h3->zero(), lit(*h3, "{1}")});
  CHECK_FALSE(rep.closure.ok());
  REQUIRE(rep.closure.witness.has_value());
  const auto& w = *rep.closure.witness;
  bool escaped = !(w.element("z") == h3->zero()) && !(w.element("z") == lit(*h3, "{1}"));
  CHECK(escaped);

  // {t, {e1,e2}}: the two-point set is minimal relative to the subset but
  // not in the ambient hyperspace.
  rep = validate_subevs(*h22,
                        std::vector<Element>{h22->zero(), lit(*h22, "{(0,1),(1,0)}")});
  CHECK_FALSE(rep.primitive.ok());
  CHECK(rep.primitive.witness->element("y0") == lit(*h22, "{(0,1),(1,0)}"));

  CHECK_THROWS_AS(validate_subevs(*h22, std::vector<Element>{}), InputError);
  CHECK_THROWS_AS(validate_subevs(*h22, std::vector<Element>{lit(*h22, "{(1,1)}")}),
                  InputError);
}

TEST_CASE("subevs validation: sampled symbolic candidates") {
  ValidateOptions opt;
  opt.mode = ValidateOptions::Mode::sampled;
  opt.seed = 11;
  opt.trials = 400;

  // The first axis of the quarter-plane.
  auto rp = fam({{"tag", "ray_product"}, {"n", 2}});
  auto axis = std::make_shared<RaySection>(rp, lit(*rp, "(1,0)"));
  auto rep = validate_subevs(*rp, *axis, opt);
  CHECK(rep.ok());
  CHECK(rep.mode == "sampled");
  CHECK(rep.closure.status == AxiomVerdict::Status::sampled_pass);
  CHECK(rep.relative_primitives == std::vector<Element>{rp->zero()});

  // The punctured cone sits inside the full cone with its nonzero base
  // removed: closure holds, the support condition does not.
  auto cone = fam({{"tag", "cone_times_vector"}, {"m", 1}});
  auto punct = std::make_shared<PuncturedCone>(1);
  rep = validate_subevs(*cone, *punct, opt);
  CHECK(rep.closure.ok());
  CHECK(rep.primitive.ok());
  CHECK_FALSE(rep.support.ok());
  REQUIRE(rep.support.witness.has_value());
  CHECK(punct->primitives_below(rep.support.witness->element("y")).empty());

  CHECK_THROWS_AS(validate_subevs(*rp, *axis), InputError);  // exhaustive + infinite
}

TEST_CASE("idempotent detection") {
  auto lat = fam({{"tag", "subspace_lattice"}, {"p", 2}, {"n", 2}});
  CHECK(detect_idempotents(*lat).size() == 4);

  auto h2 = fam({{"tag", "hyperspace"}, {"field", {{"kind", "gf"}, {"p", 2}}}, {"dim", 1}});
  CHECK(detect_idempotents(*h2) == std::vector<Element>{lit(*h2, "{0,1}")});

  CHECK(detect_idempotents(*fam({{"tag", "ray_product"}, {"n", 3}})).empty());
  CHECK(detect_idempotents(*fam({{"tag", "cone_times_vector"}, {"m", 2}})).empty());
  CHECK(detect_idempotents(*fam({{"tag", "dictionary_omega"}, {"base", "ray"}})).empty());
  CHECK(detect_idempotents(
            *fam({{"tag", "hyperspace"}, {"field", {{"kind", "rational"}}}, {"dim", 1}}))
            .empty());
  CHECK(detect_idempotents(*fam({{"tag", "evs_times_vector"},
                                 {"base", {{"tag", "ray_product"}, {"n", 2}}},
                                 {"m", 1}}))
            .empty());

  // Finite product: the scan and the composed closed form must agree.
  auto prod = fam({{"tag", "product"},
                   {"components",
                    json::array({json{{"tag", "subspace_lattice"}, {"p", 2}, {"n", 2}},
                                 json{{"tag", "hyperspace"},
                                      {"field", {{"kind", "gf"}, {"p", 2}}},
                                      {"dim", 1}}})}});
  auto scanned = detect_idempotents(*prod);
  CHECK(scanned.size() == 9);  // (4+1)*(1+1) - 1 slot-wise choices
  auto composed = prod->idempotents_rule();
  REQUIRE(composed.has_value());
  CHECK(scanned == *composed);

  // Infinite product falls back to the rule.
  auto iprod = fam({{"tag", "product"},
                    {"components",
                     json::array({json{{"tag", "ray"}},
                                  json{{"tag", "cone_times_vector"}, {"m", 1}}})}});
  CHECK(detect_idempotents(*iprod).empty());

  CHECK_THROWS_AS(detect_idempotents(*std::make_shared<PuncturedCone>(1)), Undecided);
}

TEST_CASE("classification flags") {
  auto cone = fam({{"tag", "cone_times_vector"}, {"m", 2}});
  auto c = classify(*cone);
  CHECK(c.single_primitive);
  CHECK(c.comparable);
  CHECK_FALSE(c.has_idempotent);

  auto h3 = fam({{"tag", "hyperspace"}, {"field", {{"kind", "gf"}, {"p", 3}}}, {"dim", 1}});
  c = classify(*h3);
  CHECK_FALSE(c.single_primitive);  // {0,2} owns two primitives
  CHECK(c.comparable);              // equal primitive sets already mean equal sets
  CHECK(c.has_idempotent);          // {0,1,2} absorbs itself

  auto trivial = TableEvs::from_json(trivial_doc());
  c = classify(*trivial);
  CHECK(c.single_primitive);
  CHECK(c.comparable);
  CHECK_FALSE(c.has_idempotent);

  CHECK(classify(*fam({{"tag", "ray"}})).comparable);
  CHECK_FALSE(classify(*fam({{"tag", "ray_product"}, {"n", 2}})).comparable);
  CHECK(classify(*fam({{"tag", "ray_product"}, {"n", 2}})).single_primitive);

  auto dict = fam({{"tag", "dictionary_power"}, {"base", "ray"}, {"n", 2}});
  c = classify(*dict);
  CHECK(c.single_primitive);
  CHECK(c.comparable);  // the dictionary order is total

  auto hq = fam({{"tag", "hyperspace"}, {"field", {{"kind", "rational"}}}, {"dim", 1}});
  c = classify(*hq);
  CHECK_FALSE(c.single_primitive);
  CHECK(c.comparable);

  auto ht = fam({{"tag", "hyperspace_with_theta"}, {"field", {{"kind", "rational"}}}, {"dim", 1}});
  c = classify(*ht);
  CHECK(c.single_primitive);
  CHECK_FALSE(c.comparable);  // {0,1} and {0,2} share the primitive {0}

  auto lat22 = fam({{"tag", "subspace_lattice"}, {"p", 2}, {"n", 2}});
  c = classify(*lat22);
  CHECK(c.single_primitive);
  CHECK_FALSE(c.comparable);  // two distinct lines above the same zero
  CHECK(c.has_idempotent);

  // The pair the isomorphism search cannot tell apart by dimension alone.
  auto lat21 = fam({{"tag", "subspace_lattice"}, {"p", 2}, {"n", 1}});
  CHECK(classify(*lat21).has_idempotent);
  CHECK_FALSE(classify(*fam({{"tag", "ray"}})).has_idempotent);

  CHECK_THROWS_AS(classify(*std::make_shared<PuncturedCone>(1)), Undecided);

  json j = c.to_json();
  CHECK(j["single_primitive"] == true);
}

TEST_CASE("primitive-set laws on finite carriers") {
  for (json spec :
       {json{{"tag", "hyperspace"}, {"field", {{"kind", "gf"}, {"p", 3}}}, {"dim", 1}},
        json{{"tag", "hyperspace"}, {"field", {{"kind", "gf"}, {"p", 2}}}, {"dim", 2}},
        json{{"tag", "subspace_lattice"}, {"p", 3}, {"n", 2}},
        json{{"tag", "hyperspace_with_theta"}, {"field", {{"kind", "gf"}, {"p", 3}}}, {"dim", 1}}}) {
    auto X = fam(spec);
    auto space = primitive_space(*X);
    std::set<Element> x0(space.elements->begin(), space.elements->end());

    // X0 is exactly the set of elements that are their own only primitive.
    for (const Element& x : X->carrier()) {
      auto p = primitives_of(*X, x);
      CHECK(!p.elements.empty());
      for (const Element& m : p.elements) CHECK(x0.count(m) == 1);
      bool self_only = p.elements == std::vector<Element>{x};
      CHECK(self_only == (x0.count(x) == 1));
    }
  }

  // Single-primitive law P_{x+y} = P_x + P_y, P_{ax} = aP_x.
  for (json spec :
       {json{{"tag", "subspace_lattice"}, {"p", 2}, {"n", 2}},
        json{{"tag", "hyperspace_with_theta"}, {"field", {{"kind", "gf"}, {"p", 3}}}, {"dim", 1}}}) {
    auto X = fam(spec);
    REQUIRE(classify(*X).single_primitive);
    for (const Element& x : X->carrier())
      for (const Element& y : X->carrier()) {
        Element px = primitives_of(*X, x).elements.front();
        Element py = primitives_of(*X, y).elements.front();
        CHECK(primitives_of(*X, X->add(x, y)).elements.front() == X->add(px, py));
        for (const Scalar& s : X->scalar_set())
          if (!s.is_zero())
            CHECK(primitives_of(*X, X->scale(s, x)).elements.front() ==
                  X->scale(s, px));
      }
  }
}
