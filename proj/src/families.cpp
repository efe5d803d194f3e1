#include "evs/families.hpp"

#include <algorithm>
#include <map>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

#include "evs/table.hpp"

namespace evs {
namespace {

std::vector<Rational> rats(const Element& e) {
  const Tuple& t = e.as_tuple();
  std::vector<Rational> out;
  out.reserve(t.size());
  for (const Scalar& s : t) out.push_back(s.rat());
  return out;
}

Element rtuple(const std::vector<Rational>& v) {
  Tuple t;
  t.reserve(v.size());
  for (const Rational& q : v) t.push_back(Scalar::rational(q));
  return Element::tuple(std::move(t));
}

bool rational_tuple_of(const Element& e, std::size_t n) {
  if (!std::holds_alternative<Tuple>(e.payload)) return false;
  const Tuple& t = e.as_tuple();
  if (t.size() != n) return false;
  for (const Scalar& s : t)
    if (!s.is_rational()) return false;
  return true;
}

bool all_nonneg(const std::vector<Rational>& v) {
  for (const Rational& q : v)
    if (q < 0) return false;
  return true;
}

std::vector<Rational> sample_coords(Rng& rng, const std::vector<Rational>& universe,
                                    std::size_t n) {
  std::vector<Rational> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(universe[rng.index(universe.size())]);
  return out;
}

// First index with a nonzero entry; v.size() when none (the identity).
std::size_t first_nonzero(const std::vector<Rational>& v) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!v[i].is_zero()) return i;
  return v.size();
}

void require_scalar(const Evs& X, const Scalar& a) {
  if (!X.scale_defined(a))
    throw InputError(X.describe() + ": scalar " + a.to_string() +
                     " is outside the declared action");
}

// ---- point-set helpers ----------------------------------------------------

Tuple zero_vector(const Field& f, int d) {
  return Tuple(static_cast<std::size_t>(d), Scalar::zero(f));
}

Tuple add_points(const Tuple& u, const Tuple& v) {
  Tuple out;
  out.reserve(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out.push_back(u[i] + v[i]);
  return out;
}

Tuple scale_point(const Scalar& a, const Tuple& u) {
  Tuple out;
  out.reserve(u.size());
  for (const Scalar& s : u) out.push_back(a * s);
  return out;
}

PointSet mink_add(const PointSet& A, const PointSet& B) {
  std::vector<Tuple> sums;
  sums.reserve(A.points.size() * B.points.size());
  for (const Tuple& a : A.points)
    for (const Tuple& b : B.points) sums.push_back(add_points(a, b));
  return PointSet::canonical(std::move(sums));
}

PointSet mink_scale(const Scalar& a, const PointSet& A) {
  std::vector<Tuple> out;
  out.reserve(A.points.size());
  for (const Tuple& p : A.points) out.push_back(scale_point(a, p));
  return PointSet::canonical(std::move(out));
}

bool subset_of(const PointSet& A, const PointSet& B) {
  // both canonical (sorted)
  return std::includes(B.points.begin(), B.points.end(), A.points.begin(), A.points.end());
}

bool valid_point_set(const Element& e, const Field& f, int d) {
  if (!std::holds_alternative<PointSet>(e.payload)) return false;
  const PointSet& ps = e.as_points();
  if (ps.points.empty()) return false;
  for (const Tuple& p : ps.points) {
    if (p.size() != static_cast<std::size_t>(d)) return false;
    for (const Scalar& s : p)
      if (!(s.field() == f)) return false;
  }
  PointSet copy = PointSet::canonical(ps.points);
  return copy.points == ps.points;
}

std::vector<Tuple> all_gf_points(int p, int d) {
  std::vector<Tuple> pts;
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  while (true) {
    Tuple t;
    t.reserve(idx.size());
    for (int r : idx) t.push_back(Scalar::gf(p, r));
    pts.push_back(std::move(t));
    std::size_t k = 0;
    while (k < idx.size()) {
      if (++idx[k] < p) break;
      idx[k] = 0;
      ++k;
    }
    if (k == idx.size()) break;
  }
  std::sort(pts.begin(), pts.end(), [](const Tuple& a, const Tuple& b) {
    return Element::tuple(a) < Element::tuple(b);
  });
  return pts;
}

long power_long(int base, int exp) {
  long r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

// Division line for testing-set searches: the scalar mapping a to u, when the
// tuples are proportional; nullopt otherwise.
std::optional<Rational> proportion(const std::vector<Rational>& a,
                                   const std::vector<Rational>& u) {
  std::size_t k = first_nonzero(a);
  if (k == a.size()) return std::nullopt;
  Rational alpha = u[k] / a[k];
  for (std::size_t j = 0; j < a.size(); ++j)
    if (!(alpha * a[j] == u[j])) return std::nullopt;
  return alpha;
}

std::vector<Rational> point_rats(const Tuple& t) {
  std::vector<Rational> out;
  out.reserve(t.size());
  for (const Scalar& s : t) out.push_back(s.rat());
  return out;
}

}  // namespace

// ===========================================================================
// RayProduct
// ===========================================================================

RayProduct::RayProduct(int n, Grid grid) : n_(n), grid_(grid) {
  if (n < 1) throw InputError("ray power requires n >= 1");
  std::vector<Element> basis;
  for (int i = 0; i < n; ++i) {
    std::vector<Rational> e(static_cast<std::size_t>(n), Rational(0));
    e[static_cast<std::size_t>(i)] = 1;
    basis.push_back(rtuple(e));
  }
  oracle_.basis = std::move(basis);
  oracle_.dimension = DimensionDescriptor::of(n, 0);
  oracle_.l_rule =
      "z in L(x) iff z_i > 0 at every i with x_i > 0: |a|x <= z keeps the "
      "support of x positive, and conversely a = min{z_i/x_i : x_i > 0} "
      "realizes the witness with p = 0";
  oracle_.q_rule =
      "Q = points with exactly one positive coordinate: their punctured "
      "down-sets are chains on one axis, absorbed by the L rule; any point "
      "with two positive coordinates sits above an axis point outside its L";
  oracle_.basis_note =
      "unit tuples, one per axis; independent because the L rule reads off "
      "axis support, and covering because every nonzero z has a positive "
      "coordinate";
}

std::string RayProduct::describe() const {
  return n_ == 1 ? "ray" : "ray_product(" + std::to_string(n_) + ")";
}

Element RayProduct::zero() const {
  return rtuple(std::vector<Rational>(static_cast<std::size_t>(n_), Rational(0)));
}

bool RayProduct::contains(const Element& x) const {
  return rational_tuple_of(x, static_cast<std::size_t>(n_)) && all_nonneg(rats(x));
}

Element RayProduct::add(const Element& x, const Element& y) const {
  auto a = rats(x), b = rats(y);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return rtuple(a);
}

Element RayProduct::scale(const Scalar& a, const Element& x) const {
  require_scalar(*this, a);
  Rational m = rat_abs(a.rat());
  auto v = rats(x);
  for (Rational& q : v) q *= m;
  return rtuple(v);
}

bool RayProduct::leq(const Element& x, const Element& y) const {
  auto a = rats(x), b = rats(y);
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

std::vector<Scalar> RayProduct::scalar_set() const {
  return field_scalars(field(), grid_);
}

bool RayProduct::is_minimal(const Element& x) const { return x == zero(); }

std::vector<Element> RayProduct::primitives_below(const Element&) const {
  return {zero()};
}

Element RayProduct::sample_one(Rng& rng) const {
  return rtuple(sample_coords(rng, grid_.nonneg(), static_cast<std::size_t>(n_)));
}

Element RayProduct::sample_minimal(Rng&) const { return zero(); }

Element RayProduct::sample_upper(Rng& rng, const Element& x) const {
  auto v = rats(x);
  auto bump = sample_coords(rng, grid_.nonneg(), v.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += bump[i];
  return rtuple(v);
}

bool RayProduct::L_member(const Element& x, const Element& z) const {
  return L_witness(x, z).has_value();
}

std::optional<LWitness> RayProduct::L_witness(const Element& x, const Element& z) const {
  auto xs = rats(x), zs = rats(z);
  if (first_nonzero(xs) == xs.size())
    throw DomainError("testing sets are undefined on primitive elements");
  std::optional<Rational> alpha;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i].is_zero()) continue;
    if (zs[i].is_zero()) return std::nullopt;
    Rational ratio = zs[i] / xs[i];
    if (!alpha || ratio < *alpha) alpha = ratio;
  }
  return LWitness{Scalar::rational(*alpha), zero()};
}

bool RayProduct::Q_member(const Element& x) const {
  auto xs = rats(x);
  int positive = 0;
  for (const Rational& q : xs)
    if (q > 0) ++positive;
  return positive == 1;
}

// ===========================================================================
// ConeTimesVector
// ===========================================================================

ConeTimesVector::ConeTimesVector(int m, Grid grid) : m_(m), grid_(grid) {
  if (m < 1) throw InputError("cone evs requires a vector part of dimension >= 1");
  std::vector<Rational> gen(static_cast<std::size_t>(1 + m), Rational(0));
  gen[0] = 1;
  oracle_.basis = std::vector<Element>{rtuple(gen)};
  oracle_.dimension = DimensionDescriptor::of(1, m);
  oracle_.l_rule =
      "z = (s,b) lies in L(x) iff s > 0: a = s/r scales the ray coordinate "
      "into place and the primitive (0, b - a*x_vec) absorbs the vector part";
  oracle_.q_rule =
      "Q is everything off the primitive space: the punctured down-set of "
      "(r,a) is the segment {(t,a) : 0 < t <= r}, inside L by the rule above";
  oracle_.basis_note =
      "the single class representative (1,0): every non-primitive element is "
      "reachable, and a one-element set has no independence to check";
}

std::string ConeTimesVector::describe() const {
  return "cone_times_vector(" + std::to_string(m_) + ")";
}

Element ConeTimesVector::zero() const {
  return rtuple(std::vector<Rational>(static_cast<std::size_t>(1 + m_), Rational(0)));
}

bool ConeTimesVector::contains(const Element& x) const {
  if (!rational_tuple_of(x, static_cast<std::size_t>(1 + m_))) return false;
  return rats(x)[0] >= 0;
}

Element ConeTimesVector::add(const Element& x, const Element& y) const {
  auto a = rats(x), b = rats(y);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return rtuple(a);
}

Element ConeTimesVector::scale(const Scalar& a, const Element& x) const {
  require_scalar(*this, a);
  auto v = rats(x);
  v[0] *= rat_abs(a.rat());
  for (std::size_t i = 1; i < v.size(); ++i) v[i] *= a.rat();
  return rtuple(v);
}

bool ConeTimesVector::leq(const Element& x, const Element& y) const {
  auto a = rats(x), b = rats(y);
  if (a[0] > b[0]) return false;
  for (std::size_t i = 1; i < a.size(); ++i)
    if (!(a[i] == b[i])) return false;
  return true;
}

std::vector<Scalar> ConeTimesVector::scalar_set() const {
  return field_scalars(field(), grid_);
}

bool ConeTimesVector::is_minimal(const Element& x) const { return rats(x)[0].is_zero(); }

std::vector<Element> ConeTimesVector::primitives_below(const Element& x) const {
  auto v = rats(x);
  v[0] = 0;
  return {rtuple(v)};
}

Element ConeTimesVector::sample_one(Rng& rng) const {
  auto v = sample_coords(rng, grid_.all(), static_cast<std::size_t>(1 + m_));
  v[0] = rat_abs(v[0]);
  return rtuple(v);
}

Element ConeTimesVector::sample_minimal(Rng& rng) const {
  auto v = sample_coords(rng, grid_.all(), static_cast<std::size_t>(1 + m_));
  v[0] = 0;
  return rtuple(v);
}

Element ConeTimesVector::sample_upper(Rng& rng, const Element& x) const {
  auto v = rats(x);
  v[0] += grid_.nonneg()[rng.index(grid_.nonneg().size())];
  return rtuple(v);
}

bool ConeTimesVector::L_member(const Element& x, const Element& z) const {
  return L_witness(x, z).has_value();
}

std::optional<LWitness> ConeTimesVector::L_witness(const Element& x, const Element& z) const {
  auto xs = rats(x), zs = rats(z);
  if (xs[0].is_zero())
    throw DomainError("testing sets are undefined on primitive elements");
  if (!(zs[0] > 0)) return std::nullopt;
  Rational alpha = zs[0] / xs[0];
  std::vector<Rational> p(xs.size(), Rational(0));
  for (std::size_t i = 1; i < xs.size(); ++i) p[i] = zs[i] - alpha * xs[i];
  return LWitness{Scalar::rational(alpha), rtuple(p)};
}

bool ConeTimesVector::Q_member(const Element& x) const { return rats(x)[0] > 0; }

// ===========================================================================
// EvsTimesVector
// ===========================================================================

EvsTimesVector::EvsTimesVector(EvsPtr base, int m, Grid grid)
    : m_(m), base_(std::move(base)), grid_(grid) {
  if (!base_) throw InputError("evs-times-vector requires a base instance");
  if (m < 1) throw InputError("evs-times-vector requires a vector part of dimension >= 1");
  if (!(base_->field() == Field::rational()))
    throw InputError("the vector part is rational, so the base field must be rational");
  if (const FamilyOracle* bo = base_->oracle()) {
    FamilyOracle o;
    o.l_rule =
        "(z,w) in L((x,v)) iff z in L(x) in the base: the base witness scalar "
        "a leaves w - a*v to the primitive's vector part";
    o.q_rule = "Q = Q(base) x Q^m, by the same component reduction";
    if (bo->dimension.no_basis) {
      o.dimension = DimensionDescriptor::none();
      o.basis_note = "the base has no basis, and feasibility reduces to the base";
    } else if (bo->dimension.evs_part.kind == ExtendedCardinal::Kind::finite &&
               bo->dimension.primitive_part.kind == ExtendedCardinal::Kind::finite &&
               bo->basis) {
      o.dimension = DimensionDescriptor::of(
          bo->dimension.evs_part.value, bo->dimension.primitive_part.value + m);
      std::vector<Element> lifted;
      for (const Element& b : *bo->basis)
        lifted.push_back(Element::composite(
            {b, rtuple(std::vector<Rational>(static_cast<std::size_t>(m), Rational(0)))}));
      o.basis = std::move(lifted);
      o.basis_note =
          "the base basis paired with the zero vector; primitive dimension "
          "grows by the vector part";
      oracle_ = std::move(o);
      return;
    } else {
      return;  // nothing trustworthy to record
    }
    oracle_ = std::move(o);
  }
}

std::string EvsTimesVector::describe() const {
  return "evs_times_vector(" + base_->describe() + "," + std::to_string(m_) + ")";
}

Element EvsTimesVector::pair(const Element& b, const Element& v) const {
  return Element::composite({b, v});
}

const Element& EvsTimesVector::base_part(const Element& x) const {
  return x.as_composite().parts[0];
}

const Element& EvsTimesVector::vec_part(const Element& x) const {
  return x.as_composite().parts[1];
}

Element EvsTimesVector::zero() const {
  return pair(base_->zero(),
              rtuple(std::vector<Rational>(static_cast<std::size_t>(m_), Rational(0))));
}

bool EvsTimesVector::contains(const Element& x) const {
  if (!std::holds_alternative<Composite>(x.payload)) return false;
  const auto& parts = x.as_composite().parts;
  return parts.size() == 2 && base_->contains(parts[0]) &&
         rational_tuple_of(parts[1], static_cast<std::size_t>(m_));
}

Element EvsTimesVector::add(const Element& x, const Element& y) const {
  auto a = rats(vec_part(x)), b = rats(vec_part(y));
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return pair(base_->add(base_part(x), base_part(y)), rtuple(a));
}

Element EvsTimesVector::scale(const Scalar& a, const Element& x) const {
  require_scalar(*this, a);
  auto v = rats(vec_part(x));
  for (Rational& q : v) q *= a.rat();
  return pair(base_->scale(a, base_part(x)), rtuple(v));
}

bool EvsTimesVector::leq(const Element& x, const Element& y) const {
  return vec_part(x) == vec_part(y) && base_->leq(base_part(x), base_part(y));
}

std::vector<Scalar> EvsTimesVector::scalar_set() const { return base_->scalar_set(); }

bool EvsTimesVector::is_minimal(const Element& x) const {
  return base_->is_minimal(base_part(x));
}

std::vector<Element> EvsTimesVector::primitives_below(const Element& x) const {
  std::vector<Element> out;
  for (const Element& p : base_->primitives_below(base_part(x)))
    out.push_back(pair(p, vec_part(x)));
  return out;
}

Element EvsTimesVector::sample_one(Rng& rng) const {
  Element b = base_->sample_one(rng);
  return pair(b, rtuple(sample_coords(rng, grid_.all(), static_cast<std::size_t>(m_))));
}

Element EvsTimesVector::sample_minimal(Rng& rng) const {
  Element b = base_->sample_minimal(rng);
  return pair(b, rtuple(sample_coords(rng, grid_.all(), static_cast<std::size_t>(m_))));
}

Element EvsTimesVector::sample_upper(Rng& rng, const Element& x) const {
  return pair(base_->sample_upper(rng, base_part(x)), vec_part(x));
}

bool EvsTimesVector::L_member(const Element& x, const Element& z) const {
  return L_witness(x, z).has_value();
}

std::optional<LWitness> EvsTimesVector::L_witness(const Element& x, const Element& z) const {
  auto bw = base_->L_witness(base_part(x), base_part(z));
  if (!bw) return std::nullopt;
  auto vx = rats(vec_part(x)), vz = rats(vec_part(z));
  std::vector<Rational> c(vx.size());
  for (std::size_t i = 0; i < vx.size(); ++i) c[i] = vz[i] - bw->alpha.rat() * vx[i];
  return LWitness{bw->alpha, pair(bw->p, rtuple(c))};
}

bool EvsTimesVector::Q_member(const Element& x) const {
  return base_->Q_member(base_part(x));
}

const FamilyOracle* EvsTimesVector::oracle() const {
  return oracle_ ? &*oracle_ : nullptr;
}

namespace {

// Finite carriers answer by exhaustion, families by their recorded rule.
std::optional<bool> single_primitive_of(const Evs& e) {
  if (!e.finite()) return e.single_primitive_rule();
  for (const Element& x : e.carrier())
    if (e.primitives_below(x).size() != 1) return false;
  return true;
}

std::optional<bool> comparable_of(const Evs& e) {
  if (!e.finite()) return e.comparable_rule();
  const auto& xs = e.carrier();
  std::vector<std::vector<Element>> prim(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) prim[i] = e.primitives_below(xs[i]);
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = i + 1; j < xs.size(); ++j)
      if (prim[i] == prim[j] && !e.leq(xs[i], xs[j]) && !e.leq(xs[j], xs[i]))
        return false;
  return true;
}

std::optional<std::vector<Element>> idempotents_of(const Evs& e) {
  if (!e.finite()) return e.idempotents_rule();
  std::vector<Element> out;
  for (const Element& x : e.carrier())
    if (e.is_idempotent(x)) out.push_back(x);
  return out;
}

}  // namespace

std::optional<bool> EvsTimesVector::single_primitive_rule() const {
  return single_primitive_of(*base_);
}

// P_{(x,v)} = P_x x {v}, so equal primitive sets force equal vector parts and
// the order comparison reduces to the base component.
std::optional<bool> EvsTimesVector::comparable_rule() const {
  return comparable_of(*base_);
}

std::optional<std::vector<Element>> EvsTimesVector::idempotents_rule() const {
  auto base_idem = idempotents_of(*base_);
  if (!base_idem) return std::nullopt;
  Element z = rtuple(std::vector<Rational>(m_, Rational(0)));
  std::vector<Element> out;
  for (const Element& b : *base_idem) out.push_back(pair(b, z));
  canon_sort(out);
  return out;
}

// ===========================================================================
// Hyperspace
// ===========================================================================

Hyperspace::Hyperspace(Field f, int d, int bound, Grid grid)
    : field_(f), d_(d), bound_(bound), grid_(grid) {
  if (d < 1) throw InputError("hyperspace requires ambient dimension >= 1");
  if (bound < 1) throw InputError("hyperspace cardinality bound must be >= 1");
  if (field_.kind == Field::Kind::gf) {
    long total = power_long(field_.p, d_);
    if (total > 8)
      throw InputError("hyperspace enumeration is capped at 8 ambient vectors");
    if (bound_ < total)
      throw InputError(
          "hyperspace over a finite field needs cardinality bound >= " +
          std::to_string(total) + ": Minkowski sums escape truncated carriers");
    // closed-form ground truth, cross-checked by the exhaustive machinery
    std::set<Element> reps;
    auto pts = all_gf_points(field_.p, d_);
    const Tuple& origin = pts.front();
    for (const Tuple& v : pts) {
      if (Element::tuple(v) == Element::tuple(origin)) continue;
      Element least = Element::tuple(v);
      for (long r = 2; r < field_.p; ++r) {
        Element cand = Element::tuple(scale_point(Scalar::gf(field_.p, r), v));
        if (cand < least) least = cand;
      }
      reps.insert(Element::point_set(
          PointSet::canonical({origin, least.as_tuple()})));
    }
    oracle_.basis = std::vector<Element>(reps.begin(), reps.end());
    long lines = (total - 1) / (field_.p - 1);
    oracle_.dimension = DimensionDescriptor::of(lines, d_);
    oracle_.l_rule =
        "searching the declared scalars against the singleton primitives is "
        "already complete on the finite carrier";
    oracle_.q_rule =
        "Q = two-point sets: dilation and translation preserve cardinality, "
        "so larger sets sit above two-point subsets outside their L";
    oracle_.basis_note =
        "one pair {0,v} per direction class of v: a*{x,y}+t determines the "
        "direction of y-x up to scale, so classes are the lines through 0";
  } else {
    oracle_.l_rule =
        "z in L(x) iff some injective affine image a*x+t with a != 0 lands "
        "inside z; complete search over ordered point pairs of z, since a "
        "valid (a,t) must map the first two points of x onto such a pair";
    oracle_.q_rule =
        "Q = two-point sets, by the cardinality argument: |a*x+t| = |x|";
    if (d_ == 1) {
      oracle_.basis = std::vector<Element>{Element::point_set(PointSet::canonical(
          {Tuple{Scalar::rational(Rational(0))}, Tuple{Scalar::rational(Rational(1))}}))};
      oracle_.dimension = DimensionDescriptor::of(1, 1);
      oracle_.basis_note =
          "{0,1} alone: every two-point set {a,b} is (b-a)*{0,1}+a, so there "
          "is a single feasibility class; primitives are the singletons, a "
          "one-dimensional line of translates";
    } else {
      oracle_.basis = std::nullopt;
      oracle_.dimension = DimensionDescriptor::of(
          ExtendedCardinal::continuum(), ExtendedCardinal::finite(d_));
      oracle_.basis_note =
          "two-point classes are parameterized by the direction of their "
          "difference, a continuum in the real-coefficient setting this "
          "desk model mirrors; no finite representative list exists";
    }
  }
}

std::string Hyperspace::describe() const {
  std::ostringstream os;
  os << "hyperspace(" << field_.to_string() << ",d=" << d_;
  if (field_.kind == Field::Kind::rational) os << ",bound=" << bound_;
  os << ")";
  return os.str();
}

Element Hyperspace::zero() const {
  return Element::point_set(PointSet::canonical({zero_vector(field_, d_)}));
}

bool Hyperspace::contains(const Element& x) const {
  return valid_point_set(x, field_, d_);
}

Element Hyperspace::add(const Element& x, const Element& y) const {
  return Element::point_set(mink_add(x.as_points(), y.as_points()));
}

Element Hyperspace::scale(const Scalar& a, const Element& x) const {
  require_scalar(*this, a);
  return Element::point_set(mink_scale(a, x.as_points()));
}

bool Hyperspace::leq(const Element& x, const Element& y) const {
  return subset_of(x.as_points(), y.as_points());
}

std::vector<Scalar> Hyperspace::scalar_set() const {
  return field_scalars(field_, grid_);
}

bool Hyperspace::is_minimal(const Element& x) const {
  return x.as_points().points.size() == 1;
}

std::vector<Element> Hyperspace::primitives_below(const Element& x) const {
  std::vector<Element> out;
  for (const Tuple& p : x.as_points().points)
    out.push_back(Element::point_set(PointSet::canonical({p})));
  return out;
}

std::vector<Element> Hyperspace::enumerate_carrier() const {
  if (!finite()) throw DomainError(describe() + ": carrier is not finite");
  auto pts = all_gf_points(field_.p, d_);
  std::vector<Element> out;
  const std::size_t n = pts.size();
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    std::vector<Tuple> sel;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (std::size_t{1} << i)) sel.push_back(pts[i]);
    out.push_back(Element::point_set(PointSet::canonical(std::move(sel))));
  }
  return out;
}

std::vector<Element> Hyperspace::enumerate_minimal() const {
  std::vector<Element> out;
  for (const Tuple& p : all_gf_points(field_.p, d_))
    out.push_back(Element::point_set(PointSet::canonical({p})));
  return out;
}

Element Hyperspace::sample_one(Rng& rng) const {
  if (finite()) return Evs::sample_one(rng);
  std::size_t size = 1 + rng.index(static_cast<std::size_t>(bound_));
  std::vector<Tuple> pts;
  auto universe = grid_.all();
  for (std::size_t i = 0; i < size; ++i) {
    Tuple p;
    for (int j = 0; j < d_; ++j)
      p.push_back(Scalar::rational(universe[rng.index(universe.size())]));
    pts.push_back(std::move(p));
  }
  return Element::point_set(PointSet::canonical(std::move(pts)));
}

Element Hyperspace::sample_minimal(Rng& rng) const {
  if (finite()) return Evs::sample_minimal(rng);
  Tuple p;
  auto universe = grid_.all();
  for (int j = 0; j < d_; ++j)
    p.push_back(Scalar::rational(universe[rng.index(universe.size())]));
  return Element::point_set(PointSet::canonical({p}));
}

Element Hyperspace::sample_upper(Rng& rng, const Element& x) const {
  if (finite()) return Evs::sample_upper(rng, x);
  auto pts = x.as_points().points;
  auto extra = sample_one(rng);
  for (const Tuple& p : extra.as_points().points) pts.push_back(p);
  return Element::point_set(PointSet::canonical(std::move(pts)));
}

bool Hyperspace::L_member(const Element& x, const Element& z) const {
  return L_witness(x, z).has_value();
}

std::optional<LWitness> Hyperspace::L_witness(const Element& x, const Element& z) const {
  if (finite()) return Evs::L_witness(x, z);
  const auto& xs = x.as_points().points;
  const auto& zs = z.as_points().points;
  if (xs.size() < 2)
    throw DomainError("testing sets are undefined on primitive elements");
  // Any witness a*x+t inside z maps the first two points of x to a distinct
  // ordered pair of z; trying every pair recovers every witness.
  auto a = point_rats(xs[0]), b = point_rats(xs[1]);
  std::vector<Rational> diff(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) diff[i] = a[i] - b[i];
  for (const Tuple& ut : zs) {
    for (const Tuple& vt : zs) {
      if (ut == vt) continue;
      auto u = point_rats(ut), v = point_rats(vt);
      std::vector<Rational> uv(u.size());
      for (std::size_t i = 0; i < u.size(); ++i) uv[i] = u[i] - v[i];
      auto alpha = proportion(diff, uv);
      if (!alpha || alpha->is_zero()) continue;
      Tuple t;
      for (std::size_t i = 0; i < u.size(); ++i)
        t.push_back(Scalar::rational(u[i] - *alpha * a[i]));
      PointSet image = mink_add(mink_scale(Scalar::rational(*alpha), x.as_points()),
                                PointSet::canonical({t}));
      if (subset_of(image, z.as_points()))
        return LWitness{Scalar::rational(*alpha),
                        Element::point_set(PointSet::canonical({t}))};
    }
  }
  return std::nullopt;
}

bool Hyperspace::Q_member(const Element& x) const {
  if (finite()) return Evs::Q_member(x);
  return x.as_points().points.size() == 2;
}

// The primitives below a set are the singletons of its points, so any
// two-point set breaks single-primitivity, and equal primitive sets mean
// equal sets outright.
std::optional<bool> Hyperspace::single_primitive_rule() const { return false; }

// A+A has 2a as its lexicographically largest point, a being the largest of
// A, so A+A = A forces 2a = a; the same at the other end pins A = {0}. No
// nonzero idempotents over the rationals.
std::optional<std::vector<Element>> Hyperspace::idempotents_rule() const {
  if (finite()) return std::nullopt;  // exhaustion answers, and p wraps anyway
  return std::vector<Element>{};
}

// ===========================================================================
// HyperspaceTheta
// ===========================================================================

HyperspaceTheta::HyperspaceTheta(Field f, int d, int bound, Grid grid)
    : field_(f), d_(d), bound_(bound), grid_(grid) {
  if (d < 1) throw InputError("hyperspace requires ambient dimension >= 1");
  if (bound < 1) throw InputError("hyperspace cardinality bound must be >= 1");
  oracle_.l_rule =
      "with {0} the only primitive, z in L(x) iff a*x is inside z for some "
      "a != 0; a is pinned by where any fixed nonzero point of x can land";
  oracle_.q_rule = "Q = two-point sets {0,v}: the cardinality argument again";
  if (field_.kind == Field::Kind::gf) {
    long total = power_long(field_.p, d_);
    if (total > 8)
      throw InputError("hyperspace enumeration is capped at 8 ambient vectors");
    if (bound_ < total)
      throw InputError(
          "hyperspace over a finite field needs cardinality bound >= " +
          std::to_string(total) + ": Minkowski sums escape truncated carriers");
    std::set<Element> reps;
    auto pts = all_gf_points(field_.p, d_);
    const Tuple& origin = pts.front();
    for (const Tuple& v : pts) {
      if (Element::tuple(v) == Element::tuple(origin)) continue;
      Element least = Element::tuple(v);
      for (long r = 2; r < field_.p; ++r) {
        Element cand = Element::tuple(scale_point(Scalar::gf(field_.p, r), v));
        if (cand < least) least = cand;
      }
      reps.insert(Element::point_set(PointSet::canonical({origin, least.as_tuple()})));
    }
    oracle_.basis = std::vector<Element>(reps.begin(), reps.end());
    long lines = (total - 1) / (field_.p - 1);
    oracle_.dimension = DimensionDescriptor::of(lines, 0);
    oracle_.basis_note =
        "one pair {0,v} per direction class; scaling cannot move sets across "
        "direction classes and translation is gone, so the classes are exact";
  } else if (d_ == 1) {
    oracle_.basis = std::vector<Element>{Element::point_set(PointSet::canonical(
        {Tuple{Scalar::rational(Rational(0))}, Tuple{Scalar::rational(Rational(1))}}))};
    oracle_.dimension = DimensionDescriptor::of(1, 0);
    oracle_.basis_note =
        "{0,1} alone: {0,a} = a*{0,1}, so the two-point sets through the "
        "origin form one class; the only primitive is {0} itself";
  } else {
    oracle_.basis = std::nullopt;
    oracle_.dimension =
        DimensionDescriptor::of(ExtendedCardinal::continuum(), ExtendedCardinal::finite(0));
    oracle_.basis_note =
        "two-point classes through the origin carry a direction each, a "
        "continuum in the real-coefficient setting this desk model mirrors";
  }
}

std::string HyperspaceTheta::describe() const {
  std::ostringstream os;
  os << "hyperspace_with_theta(" << field_.to_string() << ",d=" << d_;
  if (field_.kind == Field::Kind::rational) os << ",bound=" << bound_;
  os << ")";
  return os.str();
}

Element HyperspaceTheta::zero() const {
  return Element::point_set(PointSet::canonical({zero_vector(field_, d_)}));
}

bool HyperspaceTheta::contains(const Element& x) const {
  if (!valid_point_set(x, field_, d_)) return false;
  const Tuple origin = zero_vector(field_, d_);
  for (const Tuple& p : x.as_points().points)
    if (p == origin) return true;
  return false;
}

Element HyperspaceTheta::add(const Element& x, const Element& y) const {
  return Element::point_set(mink_add(x.as_points(), y.as_points()));
}

Element HyperspaceTheta::scale(const Scalar& a, const Element& x) const {
  require_scalar(*this, a);
  return Element::point_set(mink_scale(a, x.as_points()));
}

bool HyperspaceTheta::leq(const Element& x, const Element& y) const {
  return subset_of(x.as_points(), y.as_points());
}

std::vector<Scalar> HyperspaceTheta::scalar_set() const {
  return field_scalars(field_, grid_);
}

bool HyperspaceTheta::is_minimal(const Element& x) const { return x == zero(); }

std::vector<Element> HyperspaceTheta::primitives_below(const Element&) const {
  return {zero()};
}

std::vector<Element> HyperspaceTheta::enumerate_carrier() const {
  if (!finite()) throw DomainError(describe() + ": carrier is not finite");
  auto pts = all_gf_points(field_.p, d_);  // origin sorts first
  std::vector<Element> out;
  const std::size_t n = pts.size();
  for (std::size_t mask = 0; mask < (std::size_t{1} << (n - 1)); ++mask) {
    std::vector<Tuple> sel{pts[0]};
    for (std::size_t i = 1; i < n; ++i)
      if (mask & (std::size_t{1} << (i - 1))) sel.push_back(pts[i]);
    out.push_back(Element::point_set(PointSet::canonical(std::move(sel))));
  }
  return out;
}

std::vector<Element> HyperspaceTheta::enumerate_minimal() const { return {zero()}; }

Element HyperspaceTheta::sample_one(Rng& rng) const {
  if (finite()) return Evs::sample_one(rng);
  std::size_t extra = rng.index(static_cast<std::size_t>(bound_));
  std::vector<Tuple> pts{zero_vector(field_, d_)};
  auto universe = grid_.all();
  for (std::size_t i = 0; i < extra; ++i) {
    Tuple p;
    for (int j = 0; j < d_; ++j)
      p.push_back(Scalar::rational(universe[rng.index(universe.size())]));
    pts.push_back(std::move(p));
  }
  return Element::point_set(PointSet::canonical(std::move(pts)));
}

Element HyperspaceTheta::sample_minimal(Rng&) const { return zero(); }

Element HyperspaceTheta::sample_upper(Rng& rng, const Element& x) const {
  if (finite()) return Evs::sample_upper(rng, x);
  auto pts = x.as_points().points;
  Element extra = sample_one(rng);
  for (const Tuple& p : extra.as_points().points) pts.push_back(p);
  return Element::point_set(PointSet::canonical(std::move(pts)));
}

bool HyperspaceTheta::L_member(const Element& x, const Element& z) const {
  return L_witness(x, z).has_value();
}

std::optional<LWitness> HyperspaceTheta::L_witness(const Element& x,
                                                   const Element& z) const {
  if (finite()) return Evs::L_witness(x, z);
  const auto& xs = x.as_points().points;
  const Tuple origin = zero_vector(field_, d_);
  const Tuple* anchor = nullptr;
  for (const Tuple& p : xs)
    if (!(p == origin)) {
      anchor = &p;
      break;
    }
  if (!anchor) throw DomainError("testing sets are undefined on primitive elements");
  auto a = point_rats(*anchor);
  for (const Tuple& ut : z.as_points().points) {
    if (ut == origin) continue;
    auto alpha = proportion(a, point_rats(ut));
    if (!alpha || alpha->is_zero()) continue;
    PointSet image = mink_scale(Scalar::rational(*alpha), x.as_points());
    if (subset_of(image, z.as_points()))
      return LWitness{Scalar::rational(*alpha), zero()};
  }
  return std::nullopt;
}

bool HyperspaceTheta::Q_member(const Element& x) const {
  if (finite()) return Evs::Q_member(x);
  return x.as_points().points.size() == 2;
}

// All primitive sets equal {{0}}, so comparability would need a total order;
// {0,v} and {0,2v} are already incomparable over the rationals. Finite
// carriers settle it by exhaustion instead (GF(2)^1 happens to be a chain).
std::optional<bool> HyperspaceTheta::comparable_rule() const {
  if (finite()) return std::nullopt;
  return false;
}

std::optional<std::vector<Element>> HyperspaceTheta::idempotents_rule() const {
  if (finite()) return std::nullopt;
  return std::vector<Element>{};  // the two-sided dilation argument again
}

// ===========================================================================
// SubspaceLattice
// ===========================================================================

SubspaceLattice::SubspaceLattice(int p, int n) : p_(p), n_(n) {
  Field f = Field::gf(p);  // validates primality
  (void)f;
  if (n < 1) throw InputError("subspace lattice requires n >= 1");
  if (power_long(p, n) > 64)
    throw InputError("subspace lattice enumeration is capped at 64 ambient vectors");
  std::set<Element> lines;
  for (const Tuple& v : all_gf_points(p_, n_)) {
    std::vector<int> vi;
    bool zero_vec = true;
    for (const Scalar& s : v) {
      vi.push_back(static_cast<int>(s.residue()));
      if (!s.is_zero()) zero_vec = false;
    }
    if (zero_vec) continue;
    lines.insert(Element::subspace(Subspace::canonical(p_, n_, {vi})));
  }
  oracle_.basis = std::vector<Element>(lines.begin(), lines.end());
  long count = 0;
  for (int i = 0; i < n_; ++i) count += power_long(p_, i);
  oracle_.dimension = DimensionDescriptor::of(count, 0);
  oracle_.l_rule =
      "nonzero scalars fix every subspace and the zero subspace is the only "
      "primitive, so L(U) is the up-set of U under inclusion";
  oracle_.q_rule =
      "Q = one-dimensional subspaces: anything larger has a proper nonzero "
      "subspace below it, never inside its own up-set";
  oracle_.basis_note =
      "all lines, and nothing smaller works: a line is reachable only from "
      "itself, so every basis contains every line";
}

std::string SubspaceLattice::describe() const {
  return "subspace_lattice(" + std::to_string(p_) + "," + std::to_string(n_) + ")";
}

Element SubspaceLattice::zero() const {
  return Element::subspace(Subspace::canonical(p_, n_, {}));
}

bool SubspaceLattice::contains(const Element& x) const {
  if (!std::holds_alternative<Subspace>(x.payload)) return false;
  const Subspace& s = x.as_subspace();
  if (s.p != p_ || s.ambient != n_) return false;
  Subspace canon = Subspace::canonical(p_, n_, s.rows);
  return canon.rows == s.rows;
}

Element SubspaceLattice::add(const Element& x, const Element& y) const {
  std::vector<std::vector<int>> gens = x.as_subspace().rows;
  for (const auto& r : y.as_subspace().rows) gens.push_back(r);
  return Element::subspace(Subspace::canonical(p_, n_, std::move(gens)));
}

Element SubspaceLattice::scale(const Scalar& a, const Element& x) const {
  require_scalar(*this, a);
  return a.is_zero() ? zero() : x;
}

bool SubspaceLattice::leq(const Element& x, const Element& y) const {
  const Subspace& small = x.as_subspace();
  const Subspace& big = y.as_subspace();
  for (const auto& r : small.rows)
    if (!big.contains_vector(r)) return false;
  return true;
}

std::vector<Element> SubspaceLattice::enumerate_carrier() const {
  std::vector<std::vector<int>> vecs;
  for (const Tuple& v : all_gf_points(p_, n_)) {
    std::vector<int> vi;
    bool zero_vec = true;
    for (const Scalar& s : v) {
      vi.push_back(static_cast<int>(s.residue()));
      if (!s.is_zero()) zero_vec = false;
    }
    if (!zero_vec) vecs.push_back(std::move(vi));
  }
  std::set<Element> seen;
  std::vector<Subspace> frontier{Subspace::canonical(p_, n_, {})};
  seen.insert(Element::subspace(frontier[0]));
  while (!frontier.empty()) {
    Subspace s = frontier.back();
    frontier.pop_back();
    for (const auto& v : vecs) {
      if (s.contains_vector(v)) continue;
      auto gens = s.rows;
      gens.push_back(v);
      Subspace bigger = Subspace::canonical(p_, n_, std::move(gens));
      if (seen.insert(Element::subspace(bigger)).second) frontier.push_back(bigger);
    }
  }
  return {seen.begin(), seen.end()};
}

// ===========================================================================
// DictionaryPower
// ===========================================================================

DictionaryPower::DictionaryPower(int n, Grid grid) : n_(n), grid_(grid) {
  if (n < 1) throw InputError("dictionary power requires n >= 1");
  std::vector<Rational> last(static_cast<std::size_t>(n), Rational(0));
  last[static_cast<std::size_t>(n - 1)] = 1;
  oracle_.basis = std::vector<Element>{rtuple(last)};
  oracle_.dimension = DimensionDescriptor::of(1, 0);
  oracle_.l_rule =
      "z in L(x) iff the first nonzero position of z is no later than that "
      "of x: scaling by small a > 0 wins the tie at equal positions, and an "
      "earlier nonzero in z dominates outright";
  oracle_.q_rule =
      "Q = points supported on the last coordinate only: anything earlier "
      "has the next coordinate's unit below it but outside its L";
  oracle_.basis_note =
      "the last unit tuple: its first nonzero position is the latest "
      "possible, so every nonzero element lies in its testing set";
}

std::string DictionaryPower::describe() const {
  return "dictionary_power(ray," + std::to_string(n_) + ")";
}

Element DictionaryPower::zero() const {
  return rtuple(std::vector<Rational>(static_cast<std::size_t>(n_), Rational(0)));
}

bool DictionaryPower::contains(const Element& x) const {
  return rational_tuple_of(x, static_cast<std::size_t>(n_)) && all_nonneg(rats(x));
}

Element DictionaryPower::add(const Element& x, const Element& y) const {
  auto a = rats(x), b = rats(y);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return rtuple(a);
}

Element DictionaryPower::scale(const Scalar& a, const Element& x) const {
  require_scalar(*this, a);
  Rational m = rat_abs(a.rat());
  auto v = rats(x);
  for (Rational& q : v) q *= m;
  return rtuple(v);
}

bool DictionaryPower::leq(const Element& x, const Element& y) const {
  auto a = rats(x), b = rats(y);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (a[i] > b[i]) return false;
  }
  return true;  // equal
}

std::vector<Scalar> DictionaryPower::scalar_set() const {
  return field_scalars(field(), grid_);
}

bool DictionaryPower::is_minimal(const Element& x) const { return x == zero(); }

std::vector<Element> DictionaryPower::primitives_below(const Element&) const {
  return {zero()};
}

Element DictionaryPower::sample_one(Rng& rng) const {
  return rtuple(sample_coords(rng, grid_.nonneg(), static_cast<std::size_t>(n_)));
}

Element DictionaryPower::sample_minimal(Rng&) const { return zero(); }

Element DictionaryPower::sample_upper(Rng& rng, const Element& x) const {
  auto v = rats(x);
  v[0] += grid_.nonneg()[rng.index(grid_.nonneg().size())];
  return rtuple(v);
}

bool DictionaryPower::L_member(const Element& x, const Element& z) const {
  return L_witness(x, z).has_value();
}

std::optional<LWitness> DictionaryPower::L_witness(const Element& x,
                                                   const Element& z) const {
  auto xs = rats(x), zs = rats(z);
  std::size_t px = first_nonzero(xs), pz = first_nonzero(zs);
  if (px == xs.size())
    throw DomainError("testing sets are undefined on primitive elements");
  if (pz > px) return std::nullopt;
  if (pz < px) return LWitness{Scalar::one(field()), zero()};
  return LWitness{Scalar::rational(zs[pz] / (Rational(2) * xs[px])), zero()};
}

bool DictionaryPower::Q_member(const Element& x) const {
  auto xs = rats(x);
  return first_nonzero(xs) == xs.size() - 1;
}

// ===========================================================================
// DictionaryOmega
// ===========================================================================

namespace {
std::vector<Rational> trim_trailing_zeros(std::vector<Rational> v) {
  while (!v.empty() && v.back().is_zero()) v.pop_back();
  return v;
}
}  // namespace

DictionaryOmega::DictionaryOmega(Grid grid) : grid_(grid) {
  oracle_.basis = std::nullopt;
  oracle_.dimension = DimensionDescriptor::none();
  oracle_.l_rule =
      "z in L(x) iff the first nonzero position of z is no later than that "
      "of x, as in the fixed-length dictionary order";
  oracle_.q_rule =
      "Q is empty: for nonzero x with first nonzero position p, the unit at "
      "position p+1 is strictly below x but outside L(x), and with no last "
      "position the construction never runs out of room";
  oracle_.basis_note =
      "no basis exists: a basis would make the empty set a generator";
}

std::string DictionaryOmega::describe() const { return "dictionary_omega(ray)"; }

Element DictionaryOmega::zero() const { return Element::tuple(Tuple{}); }

bool DictionaryOmega::contains(const Element& x) const {
  if (!std::holds_alternative<Tuple>(x.payload)) return false;
  const Tuple& t = x.as_tuple();
  for (const Scalar& s : t)
    if (!s.is_rational() || s.rat() < 0) return false;
  return t.empty() || !t.back().is_zero();  // canonical: trailing zeros trimmed
}

Element DictionaryOmega::add(const Element& x, const Element& y) const {
  auto a = rats(x), b = rats(y);
  if (a.size() < b.size()) a.resize(b.size(), Rational(0));
  for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
  return rtuple(trim_trailing_zeros(std::move(a)));
}

Element DictionaryOmega::scale(const Scalar& a, const Element& x) const {
  require_scalar(*this, a);
  Rational m = rat_abs(a.rat());
  auto v = rats(x);
  for (Rational& q : v) q *= m;
  return rtuple(trim_trailing_zeros(std::move(v)));
}

bool DictionaryOmega::leq(const Element& x, const Element& y) const {
  auto a = rats(x), b = rats(y);
  std::size_t n = std::max(a.size(), b.size());
  a.resize(n, Rational(0));
  b.resize(n, Rational(0));
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] < b[i]) return true;
    if (a[i] > b[i]) return false;
  }
  return true;
}

std::vector<Scalar> DictionaryOmega::scalar_set() const {
  return field_scalars(field(), grid_);
}

bool DictionaryOmega::is_minimal(const Element& x) const { return x == zero(); }

std::vector<Element> DictionaryOmega::primitives_below(const Element&) const {
  return {zero()};
}

Element DictionaryOmega::sample_one(Rng& rng) const {
  std::size_t len = rng.index(5);
  return rtuple(trim_trailing_zeros(sample_coords(rng, grid_.nonneg(), len)));
}

Element DictionaryOmega::sample_minimal(Rng&) const { return zero(); }

Element DictionaryOmega::sample_upper(Rng& rng, const Element& x) const {
  Rational t = grid_.nonneg()[rng.index(grid_.nonneg().size())];
  auto v = rats(x);
  if (v.empty()) v.push_back(Rational(0));
  v[0] += t;
  return rtuple(trim_trailing_zeros(std::move(v)));
}

bool DictionaryOmega::L_member(const Element& x, const Element& z) const {
  return L_witness(x, z).has_value();
}

std::optional<LWitness> DictionaryOmega::L_witness(const Element& x,
                                                   const Element& z) const {
  auto xs = rats(x), zs = rats(z);
  std::size_t px = first_nonzero(xs), pz = first_nonzero(zs);
  if (px == xs.size())
    throw DomainError("testing sets are undefined on primitive elements");
  if (pz == zs.size() || pz > px) return std::nullopt;
  if (pz < px) return LWitness{Scalar::one(field()), zero()};
  return LWitness{Scalar::rational(zs[pz] / (Rational(2) * xs[px])), zero()};
}

bool DictionaryOmega::Q_member(const Element&) const { return false; }

Element DictionaryOmega::no_basis_witness(const Element& x) const {
  auto xs = rats(x);
  std::size_t p = first_nonzero(xs);
  if (p == xs.size())
    throw DomainError("the witness construction needs a nonzero element");
  std::vector<Rational> y(p + 2, Rational(0));
  y[p + 1] = 1;
  return rtuple(y);
}

// ===========================================================================
// ProductSpace
// ===========================================================================

ProductSpace::ProductSpace(std::vector<EvsPtr> parts, Field field_if_empty)
    : parts_(std::move(parts)), field_(field_if_empty) {
  if (!parts_.empty()) {
    field_ = parts_[0]->field();
    for (const auto& p : parts_)
      if (!(p->field() == field_))
        throw InputError("product components must share one field");
  }
  bool composable = true;
  long evs_dim = 0, prim_dim = 0;
  std::vector<Element> basis;
  for (std::size_t j = 0; j < parts_.size(); ++j) {
    const FamilyOracle* po = parts_[j]->oracle();
    if (!po || po->dimension.no_basis || !po->basis ||
        po->dimension.evs_part.kind != ExtendedCardinal::Kind::finite ||
        po->dimension.primitive_part.kind != ExtendedCardinal::Kind::finite) {
      composable = false;
      break;
    }
    evs_dim += po->dimension.evs_part.value;
    prim_dim += po->dimension.primitive_part.value;
    for (const Element& b : *po->basis) {
      std::vector<Element> slot;
      for (std::size_t k = 0; k < parts_.size(); ++k)
        slot.push_back(k == j ? b : parts_[k]->zero());
      basis.push_back(Element::composite(std::move(slot)));
    }
  }
  if (composable) {
    FamilyOracle o;
    o.basis = std::move(basis);
    o.dimension = DimensionDescriptor::of(evs_dim, prim_dim);
    o.l_rule = "componentwise, with one shared scalar across the slots";
    o.q_rule = "componentwise feasibility in every slot";
    o.basis_note =
        "each component basis embedded with the identity elsewhere; "
        "dimensions add across components";
    oracle_ = std::move(o);
  }
}

std::string ProductSpace::describe() const {
  std::string s = "product(";
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (i) s += ",";
    s += parts_[i]->describe();
  }
  return s + ")";
}

Element ProductSpace::zero() const {
  std::vector<Element> zs;
  for (const auto& p : parts_) zs.push_back(p->zero());
  return Element::composite(std::move(zs));
}

bool ProductSpace::contains(const Element& x) const {
  if (!std::holds_alternative<Composite>(x.payload)) return false;
  const auto& ps = x.as_composite().parts;
  if (ps.size() != parts_.size()) return false;
  for (std::size_t i = 0; i < ps.size(); ++i)
    if (!parts_[i]->contains(ps[i])) return false;
  return true;
}

Element ProductSpace::add(const Element& x, const Element& y) const {
  std::vector<Element> out;
  const auto& a = x.as_composite().parts;
  const auto& b = y.as_composite().parts;
  for (std::size_t i = 0; i < parts_.size(); ++i)
    out.push_back(parts_[i]->add(a[i], b[i]));
  return Element::composite(std::move(out));
}

Element ProductSpace::scale(const Scalar& s, const Element& x) const {
  require_scalar(*this, s);
  std::vector<Element> out;
  const auto& a = x.as_composite().parts;
  for (std::size_t i = 0; i < parts_.size(); ++i)
    out.push_back(parts_[i]->scale(s, a[i]));
  return Element::composite(std::move(out));
}

bool ProductSpace::leq(const Element& x, const Element& y) const {
  const auto& a = x.as_composite().parts;
  const auto& b = y.as_composite().parts;
  for (std::size_t i = 0; i < parts_.size(); ++i)
    if (!parts_[i]->leq(a[i], b[i])) return false;
  return true;
}

bool ProductSpace::finite() const {
  for (const auto& p : parts_)
    if (!p->finite()) return false;
  return true;
}

std::vector<Scalar> ProductSpace::scalar_set() const {
  return parts_.empty() ? field_scalars(field_) : parts_[0]->scalar_set();
}

bool ProductSpace::is_minimal(const Element& x) const {
  const auto& a = x.as_composite().parts;
  for (std::size_t i = 0; i < parts_.size(); ++i)
    if (!parts_[i]->is_minimal(a[i])) return false;
  return true;
}

std::vector<Element> ProductSpace::primitives_below(const Element& x) const {
  const auto& a = x.as_composite().parts;
  std::vector<std::vector<Element>> per;
  for (std::size_t i = 0; i < parts_.size(); ++i)
    per.push_back(parts_[i]->primitives_below(a[i]));
  std::vector<Element> out;
  std::vector<std::size_t> idx(per.size(), 0);
  while (true) {
    std::vector<Element> combo;
    for (std::size_t i = 0; i < per.size(); ++i) combo.push_back(per[i][idx[i]]);
    out.push_back(Element::composite(std::move(combo)));
    std::size_t k = 0;
    while (k < idx.size()) {
      if (++idx[k] < per[k].size()) break;
      idx[k] = 0;
      ++k;
    }
    if (k == idx.size()) break;
  }
  return out;
}

Element ProductSpace::sample_one(Rng& rng) const {
  std::vector<Element> out;
  for (const auto& p : parts_) out.push_back(p->sample_one(rng));
  return Element::composite(std::move(out));
}

Element ProductSpace::sample_minimal(Rng& rng) const {
  std::vector<Element> out;
  for (const auto& p : parts_) out.push_back(p->sample_minimal(rng));
  return Element::composite(std::move(out));
}

Element ProductSpace::sample_upper(Rng& rng, const Element& x) const {
  const auto& a = x.as_composite().parts;
  std::vector<Element> out;
  for (std::size_t i = 0; i < parts_.size(); ++i)
    out.push_back(parts_[i]->sample_upper(rng, a[i]));
  return Element::composite(std::move(out));
}

const FamilyOracle* ProductSpace::oracle() const {
  return oracle_ ? &*oracle_ : nullptr;
}

std::vector<Element> ProductSpace::enumerate_carrier() const {
  std::vector<Element> out;
  std::vector<std::size_t> idx(parts_.size(), 0);
  std::vector<const std::vector<Element>*> car;
  for (const auto& p : parts_) {
    car.push_back(&p->carrier());
    if (car.back()->empty()) return out;
  }
  while (true) {
    std::vector<Element> combo;
    for (std::size_t i = 0; i < parts_.size(); ++i) combo.push_back((*car[i])[idx[i]]);
    out.push_back(Element::composite(std::move(combo)));
    std::size_t k = 0;
    while (k < idx.size()) {
      if (++idx[k] < car[k]->size()) break;
      idx[k] = 0;
      ++k;
    }
    if (k == idx.size()) break;
  }
  return out;
}

std::vector<Element> ProductSpace::enumerate_minimal() const {
  std::vector<Element> out;
  std::vector<const std::vector<Element>*> mins;
  for (const auto& p : parts_) mins.push_back(&p->minimal_elements());
  std::vector<std::size_t> idx(parts_.size(), 0);
  while (true) {
    std::vector<Element> combo;
    for (std::size_t i = 0; i < parts_.size(); ++i) combo.push_back((*mins[i])[idx[i]]);
    out.push_back(Element::composite(std::move(combo)));
    std::size_t k = 0;
    while (k < idx.size()) {
      if (++idx[k] < mins[k]->size()) break;
      idx[k] = 0;
      ++k;
    }
    if (k == idx.size()) break;
  }
  return out;
}

bool ProductSpace::minimal_enumerable_hint() const {
  for (const auto& p : parts_)
    if (!p->minimal_enumerable()) return false;
  return true;
}

std::optional<bool> ProductSpace::single_primitive_rule() const {
  bool all = true;
  for (const auto& p : parts_) {
    auto s = single_primitive_of(*p);
    if (!s) return std::nullopt;
    all = all && *s;
  }
  return all;
}

// An element is idempotent exactly when every slot is idempotent or zero in
// its factor; at least one slot must be a genuine idempotent.
std::optional<std::vector<Element>> ProductSpace::idempotents_rule() const {
  std::vector<std::vector<Element>> choices;
  for (const auto& p : parts_) {
    auto idem = idempotents_of(*p);
    if (!idem) return std::nullopt;
    idem->push_back(p->zero());
    p->canon_sort(*idem);
    choices.push_back(std::move(*idem));
  }
  std::vector<Element> out;
  std::vector<std::size_t> idx(parts_.size(), 0);
  if (parts_.empty()) return out;
  while (true) {
    std::vector<Element> combo;
    for (std::size_t i = 0; i < parts_.size(); ++i) combo.push_back(choices[i][idx[i]]);
    Element x = Element::composite(std::move(combo));
    if (!(x == zero())) out.push_back(std::move(x));
    std::size_t k = 0;
    while (k < idx.size()) {
      if (++idx[k] < choices[k].size()) break;
      idx[k] = 0;
      ++k;
    }
    if (k == idx.size()) break;
  }
  canon_sort(out);
  return out;
}

// ===========================================================================
// PuncturedCone
// ===========================================================================

PuncturedCone::PuncturedCone(int m, Grid grid) : m_(m), grid_(grid) {
  if (m < 1) throw InputError("punctured cone requires a vector part of dimension >= 1");
}

std::string PuncturedCone::describe() const {
  return "punctured_cone(" + std::to_string(m_) + ")";
}

Element PuncturedCone::zero() const {
  return rtuple(std::vector<Rational>(static_cast<std::size_t>(1 + m_), Rational(0)));
}

bool PuncturedCone::contains(const Element& x) const {
  if (!rational_tuple_of(x, static_cast<std::size_t>(1 + m_))) return false;
  auto v = rats(x);
  if (v[0] > 0) return true;
  if (v[0] < 0) return false;
  return first_nonzero(v) == v.size();  // ray coordinate zero: only the identity stays
}

Element PuncturedCone::add(const Element& x, const Element& y) const {
  auto a = rats(x), b = rats(y);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return rtuple(a);
}

Element PuncturedCone::scale(const Scalar& a, const Element& x) const {
  require_scalar(*this, a);
  auto v = rats(x);
  v[0] *= rat_abs(a.rat());
  for (std::size_t i = 1; i < v.size(); ++i) v[i] *= a.rat();
  if (v[0].is_zero()) return zero();  // a = 0 or x = theta; nothing else reaches r = 0
  return rtuple(v);
}

bool PuncturedCone::leq(const Element& x, const Element& y) const {
  auto a = rats(x), b = rats(y);
  if (a[0] > b[0]) return false;
  for (std::size_t i = 1; i < a.size(); ++i)
    if (!(a[i] == b[i])) return false;
  return true;
}

std::vector<Scalar> PuncturedCone::scalar_set() const {
  return field_scalars(field(), grid_);
}

bool PuncturedCone::is_minimal(const Element& x) const { return x == zero(); }

std::vector<Element> PuncturedCone::primitives_below(const Element& x) const {
  auto v = rats(x);
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!v[i].is_zero()) return {};  // the primitive that belonged here is gone
  return {zero()};
}

Element PuncturedCone::sample_one(Rng& rng) const {
  auto v = sample_coords(rng, grid_.all(), static_cast<std::size_t>(1 + m_));
  v[0] = rat_abs(v[0]);
  if (v[0].is_zero()) return zero();
  return rtuple(v);
}

Element PuncturedCone::sample_minimal(Rng&) const { return zero(); }

Element PuncturedCone::sample_upper(Rng& rng, const Element& x) const {
  auto v = rats(x);
  v[0] += grid_.positive()[rng.index(grid_.positive().size())];
  return rtuple(v);
}

// ===========================================================================
// RaySection
// ===========================================================================

namespace {
void flatten_into(const Element& e, std::vector<Rational>& out) {
  if (std::holds_alternative<Tuple>(e.payload)) {
    for (const Scalar& s : e.as_tuple()) out.push_back(s.rat());
    return;
  }
  if (std::holds_alternative<Composite>(e.payload)) {
    for (const Element& part : e.as_composite().parts) flatten_into(part, out);
    return;
  }
  throw DomainError("ray sections need tuple-like ambient elements");
}

std::vector<Rational> flatten(const Element& e) {
  std::vector<Rational> out;
  flatten_into(e, out);
  return out;
}
}  // namespace

RaySection::RaySection(EvsPtr ambient, Element x)
    : ambient_(std::move(ambient)), x_(std::move(x)) {
  if (!(ambient_->field() == Field::rational()))
    throw InputError("ray sections are rational-coefficient objects");
  if (!ambient_->contains(x_))
    throw DomainError("section generator is outside the ambient carrier");
  if (x_ == ambient_->zero())
    throw DomainError("section generator must differ from the identity");
  if (!ambient_->leq(ambient_->zero(), x_))
    throw DomainError("section generator must sit above the identity");
  oracle_.basis = std::vector<Element>{x_};
  oracle_.dimension = DimensionDescriptor::of(1, 0);
  oracle_.l_rule = "L(t*x) = {s*x : s > 0}: scale by s/t, with p = 0";
  oracle_.q_rule = "Q = the section minus the identity: a totally ordered ray";
  oracle_.basis_note = "the generator itself represents the single class";
}

std::string RaySection::describe() const {
  return "ray_section(" + ambient_->describe() + ",x=" + x_.to_string() + ")";
}

std::optional<Rational> RaySection::section_coefficient(const Element& z) const {
  if (!ambient_->contains(z)) return std::nullopt;
  auto xs = flatten(x_), zs = flatten(z);
  auto t = proportion(xs, zs);
  if (!t || *t < 0) return std::nullopt;
  if (!(ambient_->scale(Scalar::rational(*t), x_) == z)) return std::nullopt;
  return t;
}

bool RaySection::contains(const Element& z) const {
  return section_coefficient(z).has_value();
}

bool RaySection::is_minimal(const Element& z) const { return z == zero(); }

std::vector<Element> RaySection::primitives_below(const Element&) const {
  return {zero()};
}

Element RaySection::sample_one(Rng& rng) const {
  auto universe = ambient_->scalar_set();
  // reuse the ambient grid magnitudes as section coefficients
  Scalar pickv = universe[rng.index(universe.size())];
  return ambient_->scale(Scalar::rational(rat_abs(pickv.rat())), x_);
}

Element RaySection::sample_upper(Rng& rng, const Element& z) const {
  return ambient_->add(z, sample_one(rng));
}

bool RaySection::L_member(const Element& x, const Element& z) const {
  return L_witness(x, z).has_value();
}

std::optional<LWitness> RaySection::L_witness(const Element& x, const Element& z) const {
  auto tx = section_coefficient(x), tz = section_coefficient(z);
  if (!tx || tx->is_zero())
    throw DomainError("testing sets are undefined on primitive elements");
  if (!tz || tz->is_zero()) return std::nullopt;
  return LWitness{Scalar::rational(*tz / *tx), zero()};
}

bool RaySection::Q_member(const Element& x) const { return !(x == zero()); }

// ===========================================================================
// GradedView
// ===========================================================================

GradedView::GradedView(EvsPtr ambient, std::vector<int> ray_coords,
                       std::vector<int> vec_dims)
    : ambient_(std::move(ambient)), coords_(std::move(ray_coords)), vdims_(std::move(vec_dims)) {
  if (auto* rp = dynamic_cast<const RayProduct*>(ambient_.get())) {
    ray_n_ = rp->dim();
    vec_m_ = 0;
  } else if (auto* cv = dynamic_cast<const ConeTimesVector*>(ambient_.get())) {
    ray_n_ = 1;
    vec_m_ = cv->vector_dim();
  } else if (auto* xv = dynamic_cast<const EvsTimesVector*>(ambient_.get())) {
    auto* base = dynamic_cast<const RayProduct*>(&xv->base());
    if (!base)
      throw InputError("graded views need a ray-tuple base in the composed ambient");
    ray_n_ = base->dim();
    vec_m_ = xv->vector_dim();
  } else {
    throw InputError("graded views support ray-tuple ambients only");
  }
  std::sort(coords_.begin(), coords_.end());
  coords_.erase(std::unique(coords_.begin(), coords_.end()), coords_.end());
  std::sort(vdims_.begin(), vdims_.end());
  vdims_.erase(std::unique(vdims_.begin(), vdims_.end()), vdims_.end());
  for (int c : coords_)
    if (c < 0 || c >= ray_n_) throw InputError("graded view ray coordinate out of range");
  for (int v : vdims_)
    if (v < 0 || v >= vec_m_) throw InputError("graded view vector direction out of range");

  std::vector<Element> basis;
  for (int c : coords_) {
    std::vector<Rational> e(static_cast<std::size_t>(ray_n_), Rational(0));
    e[static_cast<std::size_t>(c)] = 1;
    basis.push_back(join(e, std::vector<Rational>(static_cast<std::size_t>(vec_m_), Rational(0))));
  }
  oracle_.basis = std::move(basis);
  oracle_.dimension = DimensionDescriptor::of(static_cast<long>(coords_.size()),
                                              static_cast<long>(vdims_.size()));
  oracle_.l_rule =
      "the ray-tuple rule restricted to the kept coordinates; the vector "
      "part is absorbed by the view's primitives";
  oracle_.q_rule = "exactly one positive kept ray coordinate";
  oracle_.basis_note =
      "unit tuples on the kept axes with zero vector part; independence and "
      "coverage restrict from the ambient family";
}

std::pair<std::vector<Rational>, std::vector<Rational>> GradedView::split(
    const Element& z) const {
  if (auto* xv = dynamic_cast<const EvsTimesVector*>(ambient_.get())) {
    return {rats(xv->base_part(z)), rats(xv->vec_part(z))};
  }
  auto v = rats(z);
  if (vec_m_ == 0) return {v, {}};
  // cone: leading ray coordinate, rest vector
  std::vector<Rational> ray(v.begin(), v.begin() + ray_n_);
  std::vector<Rational> vec(v.begin() + ray_n_, v.end());
  return {ray, vec};
}

Element GradedView::join(const std::vector<Rational>& ray,
                         const std::vector<Rational>& vec) const {
  if (auto* xv = dynamic_cast<const EvsTimesVector*>(ambient_.get()))
    return xv->pair(rtuple(ray), rtuple(vec));
  std::vector<Rational> v = ray;
  v.insert(v.end(), vec.begin(), vec.end());
  return rtuple(v);
}

std::string GradedView::describe() const {
  return "graded_view(" + ambient_->describe() + ",gamma=" +
         std::to_string(coords_.size()) + ",delta=" + std::to_string(vdims_.size()) + ")";
}

bool GradedView::contains(const Element& z) const {
  if (!ambient_->contains(z)) return false;
  auto [ray, vec] = split(z);
  for (int i = 0; i < ray_n_; ++i)
    if (!ray[static_cast<std::size_t>(i)].is_zero() &&
        !std::binary_search(coords_.begin(), coords_.end(), i))
      return false;
  for (int j = 0; j < vec_m_; ++j)
    if (!vec[static_cast<std::size_t>(j)].is_zero() &&
        !std::binary_search(vdims_.begin(), vdims_.end(), j))
      return false;
  return true;
}

bool GradedView::is_minimal(const Element& z) const {
  auto [ray, vec] = split(z);
  return first_nonzero(ray) == ray.size();
}

std::vector<Element> GradedView::primitives_below(const Element& z) const {
  auto [ray, vec] = split(z);
  return {join(std::vector<Rational>(ray.size(), Rational(0)), vec)};
}

bool GradedView::minimal_enumerable_hint() const { return vdims_.empty(); }

std::vector<Element> GradedView::enumerate_minimal() const { return {zero()}; }

Element GradedView::sample_one(Rng& rng) const {
  auto nn = ambient_->scalar_set();
  std::vector<Rational> ray(static_cast<std::size_t>(ray_n_), Rational(0));
  std::vector<Rational> vec(static_cast<std::size_t>(vec_m_), Rational(0));
  for (int c : coords_)
    ray[static_cast<std::size_t>(c)] = rat_abs(nn[rng.index(nn.size())].rat());
  for (int j : vdims_) vec[static_cast<std::size_t>(j)] = nn[rng.index(nn.size())].rat();
  return join(ray, vec);
}

Element GradedView::sample_minimal(Rng& rng) const {
  auto nn = ambient_->scalar_set();
  std::vector<Rational> vec(static_cast<std::size_t>(vec_m_), Rational(0));
  for (int j : vdims_) vec[static_cast<std::size_t>(j)] = nn[rng.index(nn.size())].rat();
  return join(std::vector<Rational>(static_cast<std::size_t>(ray_n_), Rational(0)), vec);
}

Element GradedView::sample_upper(Rng& rng, const Element& z) const {
  auto nn = ambient_->scalar_set();
  auto [ray, vec] = split(z);
  for (int c : coords_)
    ray[static_cast<std::size_t>(c)] += rat_abs(nn[rng.index(nn.size())].rat());
  return join(ray, vec);
}

bool GradedView::L_member(const Element& x, const Element& z) const {
  return L_witness(x, z).has_value();
}

std::optional<LWitness> GradedView::L_witness(const Element& x, const Element& z) const {
  auto [rx, vx] = split(x);
  auto [rz, vz] = split(z);
  if (first_nonzero(rx) == rx.size())
    throw DomainError("testing sets are undefined on primitive elements");
  std::optional<Rational> alpha;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    if (rx[i].is_zero()) continue;
    if (rz[i].is_zero()) return std::nullopt;
    Rational ratio = rz[i] / rx[i];
    if (!alpha || ratio < *alpha) alpha = ratio;
  }
  std::vector<Rational> c(vx.size());
  for (std::size_t i = 0; i < vx.size(); ++i) c[i] = vz[i] - *alpha * vx[i];
  return LWitness{Scalar::rational(*alpha),
                  join(std::vector<Rational>(rx.size(), Rational(0)), c)};
}

bool GradedView::Q_member(const Element& x) const {
  auto [ray, vec] = split(x);
  int positive = 0;
  for (const Rational& q : ray)
    if (q > 0) ++positive;
  return positive == 1;
}

// ===========================================================================
// Construction entry points
// ===========================================================================

namespace {

int int_param(const nlohmann::json& spec, const char* key, int min_value) {
  if (!spec.contains(key) || !spec.at(key).is_number_integer())
    throw InputError(std::string("family document needs integer parameter '") + key + "'");
  int v = spec.at(key).get<int>();
  if (v < min_value)
    throw InputError(std::string("family parameter '") + key + "' must be >= " +
                     std::to_string(min_value));
  return v;
}

Grid grid_param(const nlohmann::json& spec) {
  Grid g;
  if (!spec.contains("grid")) return g;
  const auto& gj = spec.at("grid");
  if (!gj.is_object()) throw InputError("family grid must be an object");
  g.max_abs = gj.value("max_abs", g.max_abs);
  g.max_den = gj.value("max_den", g.max_den);
  if (g.max_abs < 1 || g.max_den < 1) throw InputError("grid bounds must be >= 1");
  return g;
}

Field field_param(const nlohmann::json& spec) {
  if (!spec.contains("field") || !spec.at("field").is_object())
    throw InputError("family document needs a field object");
  const auto& fj = spec.at("field");
  std::string kind = fj.value("kind", "");
  if (kind == "rational") return Field::rational();
  if (kind == "gf") {
    if (!fj.contains("p") || !fj.at("p").is_number_integer())
      throw InputError("gf field needs integer p");
    return Field::gf(fj.at("p").get<int>());
  }
  throw InputError("field kind must be 'rational' or 'gf'");
}

std::string base_tag(const nlohmann::json& spec) {
  if (!spec.contains("base")) return "ray";
  const auto& b = spec.at("base");
  if (b.is_string()) return b.get<std::string>();
  throw InputError("dictionary base must be the string 'ray'");
}

}  // namespace

EvsPtr make_family(const nlohmann::json& spec) {
  if (!spec.is_object() || !spec.contains("tag") || !spec.at("tag").is_string())
    throw InputError("family document requires a string tag");
  std::string tag = spec.at("tag").get<std::string>();

  if (tag == "ray") return std::make_shared<RayProduct>(1, grid_param(spec));
  if (tag == "ray_product")
    return std::make_shared<RayProduct>(int_param(spec, "n", 1), grid_param(spec));
  if (tag == "cone_times_vector")
    return std::make_shared<ConeTimesVector>(int_param(spec, "m", 1), grid_param(spec));
  if (tag == "evs_times_vector") {
    if (!spec.contains("base")) throw InputError("evs_times_vector needs a base family");
    return std::make_shared<EvsTimesVector>(make_family(spec.at("base")),
                                            int_param(spec, "m", 1), grid_param(spec));
  }
  if (tag == "hyperspace" || tag == "hyperspace_with_theta") {
    Field f = field_param(spec);
    int d = int_param(spec, "dim", 1);
    int bound;
    if (spec.contains("bound"))
      bound = int_param(spec, "bound", 1);
    else
      bound = f.kind == Field::Kind::gf ? static_cast<int>(power_long(f.p, d)) : 3;
    if (tag == "hyperspace")
      return std::make_shared<Hyperspace>(f, d, bound, grid_param(spec));
    return std::make_shared<HyperspaceTheta>(f, d, bound, grid_param(spec));
  }
  if (tag == "subspace_lattice")
    return std::make_shared<SubspaceLattice>(int_param(spec, "p", 2), int_param(spec, "n", 1));
  if (tag == "dictionary_power") {
    if (base_tag(spec) != "ray")
      throw InputError("dictionary families are built over the ray only");
    return std::make_shared<DictionaryPower>(int_param(spec, "n", 1), grid_param(spec));
  }
  if (tag == "dictionary_omega") {
    if (base_tag(spec) != "ray")
      throw InputError("dictionary families are built over the ray only");
    return std::make_shared<DictionaryOmega>(grid_param(spec));
  }
  if (tag == "finite_table") {
    if (!spec.contains("document"))
      throw InputError("finite_table needs an embedded table document");
    return TableEvs::from_json(spec.at("document"));
  }
  if (tag == "product") {
    std::vector<EvsPtr> parts;
    if (spec.contains("components")) {
      if (!spec.at("components").is_array())
        throw InputError("product components must be an array");
      for (const auto& c : spec.at("components")) parts.push_back(make_family(c));
    }
    Field f = spec.contains("field") ? field_param(spec) : Field::rational();
    return product_evs(std::move(parts), f);
  }
  throw InputError("unknown family tag: " + tag);
}

const FamilyOracle& family_oracle(const Evs& X) {
  const FamilyOracle* o = X.oracle();
  if (!o) throw InputError(X.describe() + ": no recorded oracle");
  return *o;
}

EvsPtr product_evs(std::vector<EvsPtr> components, Field field_if_empty) {
  return std::make_shared<ProductSpace>(std::move(components), field_if_empty);
}

// ===========================================================================
// counterexample_H
// ===========================================================================

namespace {
Element int_point_set(const std::vector<long>& pts) {
  std::vector<Tuple> tuples;
  for (long v : pts) tuples.push_back(Tuple{Scalar::rational(Rational(v))});
  return Element::point_set(PointSet::canonical(std::move(tuples)));
}

// A = alpha * B for some nonzero rational alpha? Both contain 0 and have two
// other points; alpha is pinned to a ratio of members.
bool scalar_equivalent(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  // a, b: the two nonzero members of each set; alpha must map {b0,b1} onto {a0,a1}
  for (std::size_t perm = 0; perm < 2; ++perm) {
    Rational alpha = a[0] / b[perm];
    if (!alpha.is_zero() && alpha * b[1 - perm] == a[1]) return true;
  }
  return false;
}
}  // namespace

HCounterexample counterexample_H(int bound) {
  if (bound < 1)
    throw InputError("the grid must contain a 3-point set: bound >= 1 required");
  HCounterexample out;
  out.bound = bound;
  out.ambient = std::make_shared<HyperspaceTheta>(Field::rational(), 1, 3,
                                                  Grid{bound, 1});
  const Evs& H = *out.ambient;

  // all 3-point subsets {0, a, b} of the integer grid
  std::vector<long> nz;
  for (long v = -bound; v <= bound; ++v)
    if (v != 0) nz.push_back(v);
  std::vector<Element> triples;
  std::vector<std::vector<Rational>> members;  // the two nonzero members, sorted
  for (std::size_t i = 0; i < nz.size(); ++i)
    for (std::size_t j = i + 1; j < nz.size(); ++j) {
      triples.push_back(int_point_set({0, nz[i], nz[j]}));
      members.push_back({Rational(nz[i]), Rational(nz[j])});
    }
  out.three_point_sets = triples.size();

  // canonical-least representative per scalar-equivalence class
  std::vector<std::size_t> rep_index;
  std::vector<std::size_t> class_of(triples.size());
  for (std::size_t i = 0; i < triples.size(); ++i) {
    bool placed = false;
    for (std::size_t r = 0; r < rep_index.size() && !placed; ++r) {
      if (scalar_equivalent(members[i], members[rep_index[r]])) {
        class_of[i] = r;
        placed = true;
      }
    }
    if (!placed) {
      class_of[i] = rep_index.size();
      rep_index.push_back(i);
    }
  }
  // least element of each class wins
  for (std::size_t i = 0; i < triples.size(); ++i) {
    std::size_t r = class_of[i];
    if (triples[i] < triples[rep_index[r]]) rep_index[r] = i;
  }
  for (std::size_t r : rep_index) out.representatives.push_back(triples[r]);
  std::sort(out.representatives.begin(), out.representatives.end());

  out.pairwise_independent = true;
  for (std::size_t i = 0; i < out.representatives.size(); ++i)
    for (std::size_t j = i + 1; j < out.representatives.size(); ++j)
      if (H.L_member(out.representatives[i], out.representatives[j]) ||
          H.L_member(out.representatives[j], out.representatives[i]))
        out.pairwise_independent = false;

  // maximality at grid scale: every grid triple is dependent with some rep
  out.covers_every_grid_triple = true;
  for (const Element& t : triples) {
    bool dependent = false;
    for (const Element& r : out.representatives)
      if (H.L_member(r, t) || H.L_member(t, r)) {
        dependent = true;
        break;
      }
    if (!dependent) out.covers_every_grid_triple = false;
  }

  out.uncovered = int_point_set({0, 1});
  bool covered2 = false;
  for (const Element& r : out.representatives)
    if (H.L_member(r, out.uncovered)) covered2 = true;
  out.is_generator = covered2;  // stays false: 3-point images have 3 points

  out.covered_example = int_point_set({0, 1, 2, 3});
  return out;
}

nlohmann::json HCounterexample::to_json() const {
  nlohmann::json reps = nlohmann::json::array();
  for (const Element& r : representatives) reps.push_back(r.to_json());
  bool covered4 = false;
  for (const Element& r : representatives)
    if (ambient->L_member(r, covered_example)) covered4 = true;
  return nlohmann::json{
      {"ambient", ambient->describe()},
      {"grid_bound", bound},
      {"three_point_sets", three_point_sets},
      {"class_count", representatives.size()},
      {"representatives", reps},
      {"pairwise_independent", pairwise_independent},
      {"maximal_at_grid_scale", covers_every_grid_triple},
      {"generates", is_generator},
      {"uncovered_witness", uncovered.to_json()},
      {"uncovered_reason",
       "every member of a 3-point testing set has at least 3 points"},
      {"covered_larger_example", covered_example.to_json()},
      {"covered_larger_example_holds", covered4},
  };
}

}  // namespace evs
