#pragma once

#include <nlohmann/json_fwd.hpp>

#include "evs/instance.hpp"
#include "evs/oracle.hpp"

namespace evs {

// ---------------------------------------------------------------------------
// Rational tuple families
// ---------------------------------------------------------------------------

// [0,inf)^n with componentwise order, componentwise addition and |a|-scaling.
// n = 1 is the ray itself.
class RayProduct final : public Evs {
 public:
  explicit RayProduct(int n, Grid grid = {});

  Field field() const override { return Field::rational(); }
  std::string describe() const override;
  Element zero() const override;
  bool contains(const Element& x) const override;
  Element add(const Element& x, const Element& y) const override;
  Element scale(const Scalar& a, const Element& x) const override;
  bool leq(const Element& x, const Element& y) const override;
  bool finite() const override { return false; }
  std::vector<Scalar> scalar_set() const override;

  bool is_minimal(const Element& x) const override;
  std::vector<Element> primitives_below(const Element& x) const override;
  Element sample_one(Rng& rng) const override;
  Element sample_minimal(Rng& rng) const override;
  Element sample_upper(Rng& rng, const Element& x) const override;
  bool L_member(const Element& x, const Element& z) const override;
  std::optional<LWitness> L_witness(const Element& x, const Element& z) const override;
  bool Q_member(const Element& x) const override;
  const FamilyOracle* oracle() const override { return &oracle_; }

  std::optional<bool> single_primitive_rule() const override { return true; }
  std::optional<bool> comparable_rule() const override { return n_ == 1; }
  std::optional<std::vector<Element>> idempotents_rule() const override {
    return std::vector<Element>{};
  }

  int dim() const { return n_; }
  const Grid& grid() const { return grid_; }

 protected:
  std::vector<Element> enumerate_minimal() const override { return {zero()}; }
  bool minimal_enumerable_hint() const override { return true; }

 private:
  int n_;
  Grid grid_;
  FamilyOracle oracle_;
};

// [0,inf) x Q^m: (r,a) <= (s,b) iff r <= s and a = b. Scaling acts with |a|
// on the ray coordinate and linearly on the vector part, so the primitives
// are exactly {0} x Q^m.
class ConeTimesVector final : public Evs {
 public:
  explicit ConeTimesVector(int m, Grid grid = {});

  Field field() const override { return Field::rational(); }
  std::string describe() const override;
  Element zero() const override;
  bool contains(const Element& x) const override;
  Element add(const Element& x, const Element& y) const override;
  Element scale(const Scalar& a, const Element& x) const override;
  bool leq(const Element& x, const Element& y) const override;
  bool finite() const override { return false; }
  std::vector<Scalar> scalar_set() const override;

  bool is_minimal(const Element& x) const override;
  std::vector<Element> primitives_below(const Element& x) const override;
  Element sample_one(Rng& rng) const override;
  Element sample_minimal(Rng& rng) const override;
  Element sample_upper(Rng& rng, const Element& x) const override;
  bool L_member(const Element& x, const Element& z) const override;
  std::optional<LWitness> L_witness(const Element& x, const Element& z) const override;
  bool Q_member(const Element& x) const override;
  const FamilyOracle* oracle() const override { return &oracle_; }

  std::optional<bool> single_primitive_rule() const override { return true; }
  std::optional<bool> comparable_rule() const override { return true; }
  std::optional<std::vector<Element>> idempotents_rule() const override {
    return std::vector<Element>{};
  }

  int vector_dim() const { return m_; }

 protected:
  bool minimal_enumerable_hint() const override { return false; }

 private:
  int m_;
  Grid grid_;
  FamilyOracle oracle_;
};

// base x Q^m with componentwise operations; order requires equal vector
// parts. Elements are composites [base-element; vector]. Testing sets and
// feasibility reduce to the base component.
class EvsTimesVector final : public Evs {
 public:
  EvsTimesVector(EvsPtr base, int m, Grid grid = {});

  Field field() const override { return Field::rational(); }
  std::string describe() const override;
  Element zero() const override;
  bool contains(const Element& x) const override;
  Element add(const Element& x, const Element& y) const override;
  Element scale(const Scalar& a, const Element& x) const override;
  bool leq(const Element& x, const Element& y) const override;
  bool finite() const override { return false; }
  std::vector<Scalar> scalar_set() const override;

  bool is_minimal(const Element& x) const override;
  std::vector<Element> primitives_below(const Element& x) const override;
  Element sample_one(Rng& rng) const override;
  Element sample_minimal(Rng& rng) const override;
  Element sample_upper(Rng& rng, const Element& x) const override;
  bool L_member(const Element& x, const Element& z) const override;
  std::optional<LWitness> L_witness(const Element& x, const Element& z) const override;
  bool Q_member(const Element& x) const override;
  const FamilyOracle* oracle() const override;

  std::optional<bool> single_primitive_rule() const override;
  std::optional<bool> comparable_rule() const override;
  std::optional<std::vector<Element>> idempotents_rule() const override;

  const Evs& base() const { return *base_; }
  EvsPtr base_ptr() const { return base_; }
  int vector_dim() const { return m_; }
  Element pair(const Element& base_part, const Element& vec_part) const;
  const Element& base_part(const Element& x) const;
  const Element& vec_part(const Element& x) const;

 protected:
  bool minimal_enumerable_hint() const override { return false; }

 private:
  int m_;
  EvsPtr base_;
  Grid grid_;
  std::optional<FamilyOracle> oracle_;
};

// ---------------------------------------------------------------------------
// Hyperspaces: finite point sets under Minkowski sum
// ---------------------------------------------------------------------------

// All non-empty finite subsets of K^d. A+B = {a+b}, a*A = {a*x}, order is
// set inclusion. Finite and exhaustively checkable over GF(p); over the
// rationals the carrier is infinite and `bound` caps sampled cardinalities.
class Hyperspace final : public Evs {
 public:
  Hyperspace(Field f, int d, int bound, Grid grid = {});

  Field field() const override { return field_; }
  std::string describe() const override;
  Element zero() const override;
  bool contains(const Element& x) const override;
  Element add(const Element& x, const Element& y) const override;
  Element scale(const Scalar& a, const Element& x) const override;
  bool leq(const Element& x, const Element& y) const override;
  bool finite() const override { return field_.kind == Field::Kind::gf; }
  std::vector<Scalar> scalar_set() const override;

  bool is_minimal(const Element& x) const override;
  std::vector<Element> primitives_below(const Element& x) const override;
  Element sample_one(Rng& rng) const override;
  Element sample_minimal(Rng& rng) const override;
  Element sample_upper(Rng& rng, const Element& x) const override;
  bool L_member(const Element& x, const Element& z) const override;
  std::optional<LWitness> L_witness(const Element& x, const Element& z) const override;
  bool Q_member(const Element& x) const override;
  const FamilyOracle* oracle() const override { return &oracle_; }

  std::optional<bool> single_primitive_rule() const override;
  std::optional<bool> comparable_rule() const override { return true; }
  std::optional<std::vector<Element>> idempotents_rule() const override;

  int ambient_dim() const { return d_; }
  int cardinality_bound() const { return bound_; }

 protected:
  std::vector<Element> enumerate_carrier() const override;
  std::vector<Element> enumerate_minimal() const override;
  bool minimal_enumerable_hint() const override { return finite(); }

 private:
  Field field_;
  int d_;
  int bound_;
  Grid grid_;
  FamilyOracle oracle_;
};

// The sub-hyperspace of sets containing the origin. Its only primitive is
// {0}, so testing-set membership drops the translation part.
class HyperspaceTheta final : public Evs {
 public:
  HyperspaceTheta(Field f, int d, int bound, Grid grid = {});

  Field field() const override { return field_; }
  std::string describe() const override;
  Element zero() const override;
  bool contains(const Element& x) const override;
  Element add(const Element& x, const Element& y) const override;
  Element scale(const Scalar& a, const Element& x) const override;
  bool leq(const Element& x, const Element& y) const override;
  bool finite() const override { return field_.kind == Field::Kind::gf; }
  std::vector<Scalar> scalar_set() const override;

  bool is_minimal(const Element& x) const override;
  std::vector<Element> primitives_below(const Element& x) const override;
  Element sample_one(Rng& rng) const override;
  Element sample_minimal(Rng& rng) const override;
  Element sample_upper(Rng& rng, const Element& x) const override;
  bool L_member(const Element& x, const Element& z) const override;
  std::optional<LWitness> L_witness(const Element& x, const Element& z) const override;
  bool Q_member(const Element& x) const override;
  const FamilyOracle* oracle() const override { return &oracle_; }

  std::optional<bool> single_primitive_rule() const override { return true; }
  std::optional<bool> comparable_rule() const override;
  std::optional<std::vector<Element>> idempotents_rule() const override;

  int ambient_dim() const { return d_; }

 protected:
  std::vector<Element> enumerate_carrier() const override;
  std::vector<Element> enumerate_minimal() const override;
  bool minimal_enumerable_hint() const override { return true; }

 private:
  Field field_;
  int d_;
  int bound_;
  Grid grid_;
  FamilyOracle oracle_;
};

// ---------------------------------------------------------------------------
// Lattice of subspaces of GF(p)^n: join as addition, trivial nonzero scaling,
// inclusion order. Every nonzero element is idempotent.
// ---------------------------------------------------------------------------
class SubspaceLattice final : public Evs {
 public:
  SubspaceLattice(int p, int n);

  Field field() const override { return Field::gf(p_); }
  std::string describe() const override;
  Element zero() const override;
  bool contains(const Element& x) const override;
  Element add(const Element& x, const Element& y) const override;
  Element scale(const Scalar& a, const Element& x) const override;
  bool leq(const Element& x, const Element& y) const override;
  bool finite() const override { return true; }

  const FamilyOracle* oracle() const override { return &oracle_; }

 protected:
  std::vector<Element> enumerate_carrier() const override;

 private:
  int p_, n_;
  FamilyOracle oracle_;
};

// ---------------------------------------------------------------------------
// Dictionary-order families over the ray
// ---------------------------------------------------------------------------

// [0,inf)^n with lexicographic order; operations componentwise.
class DictionaryPower final : public Evs {
 public:
  explicit DictionaryPower(int n, Grid grid = {});

  Field field() const override { return Field::rational(); }
  std::string describe() const override;
  Element zero() const override;
  bool contains(const Element& x) const override;
  Element add(const Element& x, const Element& y) const override;
  Element scale(const Scalar& a, const Element& x) const override;
  bool leq(const Element& x, const Element& y) const override;
  bool finite() const override { return false; }
  std::vector<Scalar> scalar_set() const override;

  bool is_minimal(const Element& x) const override;
  std::vector<Element> primitives_below(const Element& x) const override;
  Element sample_one(Rng& rng) const override;
  Element sample_minimal(Rng& rng) const override;
  Element sample_upper(Rng& rng, const Element& x) const override;
  bool L_member(const Element& x, const Element& z) const override;
  std::optional<LWitness> L_witness(const Element& x, const Element& z) const override;
  bool Q_member(const Element& x) const override;
  const FamilyOracle* oracle() const override { return &oracle_; }

  std::optional<bool> single_primitive_rule() const override { return true; }
  std::optional<bool> comparable_rule() const override { return true; }
  std::optional<std::vector<Element>> idempotents_rule() const override {
    return std::vector<Element>{};
  }

 protected:
  std::vector<Element> enumerate_minimal() const override { return {zero()}; }
  bool minimal_enumerable_hint() const override { return true; }

 private:
  int n_;
  Grid grid_;
  FamilyOracle oracle_;
};

// Finitely supported sequences over the ray in dictionary order (indices
// run over the naturals; trailing zeros are trimmed away). This instance
// has an empty feasible set and therefore no basis.
class DictionaryOmega final : public Evs {
 public:
  explicit DictionaryOmega(Grid grid = {});

  Field field() const override { return Field::rational(); }
  std::string describe() const override;
  Element zero() const override;
  bool contains(const Element& x) const override;
  Element add(const Element& x, const Element& y) const override;
  Element scale(const Scalar& a, const Element& x) const override;
  bool leq(const Element& x, const Element& y) const override;
  bool finite() const override { return false; }
  std::vector<Scalar> scalar_set() const override;

  bool is_minimal(const Element& x) const override;
  std::vector<Element> primitives_below(const Element& x) const override;
  Element sample_one(Rng& rng) const override;
  Element sample_minimal(Rng& rng) const override;
  Element sample_upper(Rng& rng, const Element& x) const override;
  bool L_member(const Element& x, const Element& z) const override;
  std::optional<LWitness> L_witness(const Element& x, const Element& z) const override;
  bool Q_member(const Element& x) const override;
  const FamilyOracle* oracle() const override { return &oracle_; }

  std::optional<bool> single_primitive_rule() const override { return true; }
  std::optional<bool> comparable_rule() const override { return true; }
  std::optional<std::vector<Element>> idempotents_rule() const override {
    return std::vector<Element>{};
  }

  // For nonzero x: an element y <= x with y outside both the primitives and
  // L(x); its existence is what empties the feasible set.
  Element no_basis_witness(const Element& x) const;

 protected:
  std::vector<Element> enumerate_minimal() const override { return {zero()}; }
  bool minimal_enumerable_hint() const override { return true; }

 private:
  Grid grid_;
  FamilyOracle oracle_;
};

// ---------------------------------------------------------------------------
// Finite products with componentwise structure
// ---------------------------------------------------------------------------
class ProductSpace final : public Evs {
 public:
  ProductSpace(std::vector<EvsPtr> parts, Field field_if_empty = Field::rational());

  Field field() const override { return field_; }
  std::string describe() const override;
  Element zero() const override;
  bool contains(const Element& x) const override;
  Element add(const Element& x, const Element& y) const override;
  Element scale(const Scalar& a, const Element& x) const override;
  bool leq(const Element& x, const Element& y) const override;
  bool finite() const override;
  std::vector<Scalar> scalar_set() const override;

  bool is_minimal(const Element& x) const override;
  std::vector<Element> primitives_below(const Element& x) const override;
  Element sample_one(Rng& rng) const override;
  Element sample_minimal(Rng& rng) const override;
  Element sample_upper(Rng& rng, const Element& x) const override;
  const FamilyOracle* oracle() const override;

  std::optional<bool> single_primitive_rule() const override;
  std::optional<std::vector<Element>> idempotents_rule() const override;

  std::size_t arity() const { return parts_.size(); }
  const Evs& part(std::size_t i) const { return *parts_[i]; }

 protected:
  std::vector<Element> enumerate_carrier() const override;
  std::vector<Element> enumerate_minimal() const override;
  bool minimal_enumerable_hint() const override;

 private:
  std::vector<EvsPtr> parts_;
  Field field_;
  std::optional<FamilyOracle> oracle_;
};

// ---------------------------------------------------------------------------
// Deliberately broken instance: the cone with its nonzero primitives removed.
// Every axiom except "some primitive lies below each element" still holds,
// which makes it the one mutation a finite table cannot express.
// ---------------------------------------------------------------------------
class PuncturedCone final : public Evs {
 public:
  explicit PuncturedCone(int m, Grid grid = {});

  Field field() const override { return Field::rational(); }
  std::string describe() const override;
  Element zero() const override;
  bool contains(const Element& x) const override;
  Element add(const Element& x, const Element& y) const override;
  Element scale(const Scalar& a, const Element& x) const override;
  bool leq(const Element& x, const Element& y) const override;
  bool finite() const override { return false; }
  std::vector<Scalar> scalar_set() const override;

  bool is_minimal(const Element& x) const override;
  std::vector<Element> primitives_below(const Element& x) const override;
  Element sample_one(Rng& rng) const override;
  Element sample_minimal(Rng& rng) const override;
  Element sample_upper(Rng& rng, const Element& x) const override;

 protected:
  std::vector<Element> enumerate_minimal() const override { return {zero()}; }
  bool minimal_enumerable_hint() const override { return true; }

 private:
  int m_;
  Grid grid_;
};

// ---------------------------------------------------------------------------
// Symbolic sub-instances produced by the basis constructions
// ---------------------------------------------------------------------------

// {t*x : t >= 0} inside an ambient rational tuple family; requires x >= 0
// so the section is closed under the |a|-action.
class RaySection final : public Evs {
 public:
  RaySection(EvsPtr ambient, Element x);

  Field field() const override { return ambient_->field(); }
  std::string describe() const override;
  Element zero() const override { return ambient_->zero(); }
  bool contains(const Element& z) const override;
  Element add(const Element& x, const Element& y) const override {
    return ambient_->add(x, y);
  }
  Element scale(const Scalar& a, const Element& x) const override {
    return ambient_->scale(a, x);
  }
  bool leq(const Element& x, const Element& y) const override {
    return ambient_->leq(x, y);
  }
  bool finite() const override { return false; }
  std::vector<Scalar> scalar_set() const override { return ambient_->scalar_set(); }

  bool is_minimal(const Element& x) const override;
  std::vector<Element> primitives_below(const Element& x) const override;
  Element sample_one(Rng& rng) const override;
  Element sample_minimal(Rng&) const override { return zero(); }
  Element sample_upper(Rng& rng, const Element& x) const override;
  bool L_member(const Element& x, const Element& z) const override;
  std::optional<LWitness> L_witness(const Element& x, const Element& z) const override;
  bool Q_member(const Element& x) const override;
  const FamilyOracle* oracle() const override { return &oracle_; }

  std::optional<bool> single_primitive_rule() const override { return true; }
  std::optional<bool> comparable_rule() const override { return true; }
  std::optional<std::vector<Element>> idempotents_rule() const override {
    return std::vector<Element>{};
  }

  EvsPtr ambient_ptr() const { return ambient_; }
  const Element& generator() const { return x_; }
  // The coefficient t with z = t*x, when z lies on the section.
  std::optional<Rational> section_coefficient(const Element& z) const;

 protected:
  std::vector<Element> enumerate_minimal() const override { return {zero()}; }
  bool minimal_enumerable_hint() const override { return true; }

 private:
  EvsPtr ambient_;
  Element x_;
  FamilyOracle oracle_;
};

// The span-like closure {sum a_i d_i + p : d_i in the chosen axes, p in W}
// inside ray-tuple x vector ambients, recorded by which ray coordinates and
// vector directions survive.
class GradedView final : public Evs {
 public:
  GradedView(EvsPtr ambient, std::vector<int> ray_coords, std::vector<int> vec_dims);

  Field field() const override { return ambient_->field(); }
  std::string describe() const override;
  Element zero() const override { return ambient_->zero(); }
  bool contains(const Element& z) const override;
  Element add(const Element& x, const Element& y) const override {
    return ambient_->add(x, y);
  }
  Element scale(const Scalar& a, const Element& x) const override {
    return ambient_->scale(a, x);
  }
  bool leq(const Element& x, const Element& y) const override {
    return ambient_->leq(x, y);
  }
  bool finite() const override { return false; }
  std::vector<Scalar> scalar_set() const override { return ambient_->scalar_set(); }

  bool is_minimal(const Element& x) const override;
  std::vector<Element> primitives_below(const Element& x) const override;
  Element sample_one(Rng& rng) const override;
  Element sample_minimal(Rng& rng) const override;
  Element sample_upper(Rng& rng, const Element& x) const override;
  bool L_member(const Element& x, const Element& z) const override;
  std::optional<LWitness> L_witness(const Element& x, const Element& z) const override;
  bool Q_member(const Element& x) const override;
  const FamilyOracle* oracle() const override { return &oracle_; }

  std::optional<bool> single_primitive_rule() const override { return true; }
  std::optional<bool> comparable_rule() const override {
    return coords_.size() <= 1;
  }
  std::optional<std::vector<Element>> idempotents_rule() const override {
    return std::vector<Element>{};
  }

  EvsPtr ambient_ptr() const { return ambient_; }
  const std::vector<int>& ray_coords() const { return coords_; }
  const std::vector<int>& vec_dims() const { return vdims_; }

 protected:
  bool minimal_enumerable_hint() const override;
  std::vector<Element> enumerate_minimal() const override;

 private:
  // (ray part, vector part) of an ambient element; vector part empty when the
  // ambient has none.
  std::pair<std::vector<Rational>, std::vector<Rational>> split(const Element& z) const;
  Element join(const std::vector<Rational>& ray, const std::vector<Rational>& vec) const;

  EvsPtr ambient_;
  std::vector<int> coords_;
  std::vector<int> vdims_;
  int ray_n_ = 0;
  int vec_m_ = 0;
  FamilyOracle oracle_;
};

// ---------------------------------------------------------------------------
// Construction entry points
// ---------------------------------------------------------------------------

// Builds an instance from a family document: {"tag": ..., parameters...}.
EvsPtr make_family(const nlohmann::json& spec);

// The recorded oracle of an instance; throws InputError when none exists.
const FamilyOracle& family_oracle(const Evs& X);

EvsPtr product_evs(std::vector<EvsPtr> components, Field field_if_empty = Field::rational());

// A maximal-at-grid-scale orderly independent set that fails to generate:
// representatives of the 3-point origin-containing subsets of the integer
// grid [-bound, bound], modulo nonzero scaling, inside the origin-containing
// hyperspace over Q^1.
struct HCounterexample {
  int bound = 0;
  EvsPtr ambient;
  std::vector<Element> representatives;
  std::size_t three_point_sets = 0;
  bool pairwise_independent = false;
  bool covers_every_grid_triple = false;  // maximality at grid scale
  Element uncovered;                      // a 2-point set no L(A) reaches
  Element covered_example;                // a 4-point set some L(A) does reach
  bool is_generator = false;              // stays false: the point of the construction
  nlohmann::json to_json() const;
};

HCounterexample counterexample_H(int bound);

}  // namespace evs
