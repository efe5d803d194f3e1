#include "evs/basis.hpp"

#include <algorithm>
#include <map>
#include <nlohmann/json.hpp>
#include <set>

#include "evs/families.hpp"

namespace evs {
namespace {

nlohmann::json element_array(const std::vector<Element>& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (const Element& e : v) arr.push_back(e.to_json());
  return arr;
}

void require_member(const Evs& X, const Element& x) {
  if (!X.contains(x))
    throw InputError("element outside " + X.describe() + ": " + x.to_string());
}

std::vector<Element> non_primitive_part(const Evs& X) {
  std::vector<Element> out;
  for (const Element& z : X.carrier())
    if (!X.is_minimal(z)) out.push_back(z);
  return out;
}

// Finite primitive dimension, or refuse honestly. Declared-scalar rational
// tables with more than one minimal element land in the refusal branch.
long finite_primitive_dimension(const Evs& X, const ValidateOptions& opt) {
  PrimitiveSpace ps = primitive_space(X, opt);
  if (!ps.dimension)
    throw Undecided("the primitive dimension of " + X.describe() + " is " +
                    ps.dimension_token);
  return *ps.dimension;
}

Element sample_nonminimal(const Evs& X, Rng& rng) {
  for (int i = 0; i < 256; ++i) {
    Element e = X.sample_one(rng);
    if (!X.is_minimal(e)) return e;
  }
  throw Undecided("could not sample a non-primitive element of " + X.describe());
}

struct CertifyResult {
  std::optional<BasisCertificate> cert;
  std::optional<Element> uncovered;
};

// Full verification on a finite carrier: pairwise independence plus a
// covering witness for every non-primitive element.
CertifyResult certify_finite(const Evs& X, std::vector<Element> B,
                             const ValidateOptions& opt) {
  X.canon_sort(B);
  CertifyResult out;
  BasisCertificate cert;
  cert.mode = "exhaustive";
  cert.independence = is_orderly_independent_set(X, B);
  if (!cert.independence.independent) return out;
  for (const Element& z : non_primitive_part(X)) {
    bool hit = false;
    for (const Element& b : B)
      if (X.L_member(b, z)) {
        cert.coverage.emplace_back(z, b);
        hit = true;
        break;
      }
    if (!hit) {
      out.uncovered = z;
      return out;
    }
  }
  cert.basis = std::move(B);
  cert.dimension = DimensionDescriptor::of(
      static_cast<long>(cert.basis.size()), finite_primitive_dimension(X, opt));
  out.cert = std::move(cert);
  return out;
}

// Family verification: independence stays exhaustive over the pairs (the
// closed-form rules decide it), coverage is a seeded sampling pass.
CertifyResult certify_family(const Evs& X, std::vector<Element> B,
                             const ValidateOptions& opt) {
  X.canon_sort(B);
  CertifyResult out;
  BasisCertificate cert;
  cert.mode = "sampled";
  cert.independence = is_orderly_independent_set(X, B);
  if (!cert.independence.independent) return out;
  Rng rng(opt.seed);
  if (B.empty()) {
    // An empty basis claims the whole carrier is primitive.
    for (std::size_t t = 0; t < opt.trials; ++t) {
      Element z = X.sample_one(rng);
      if (!X.is_minimal(z)) {
        out.uncovered = z;
        return out;
      }
    }
  } else {
    for (std::size_t t = 0; t < opt.trials; ++t) {
      Element z = sample_nonminimal(X, rng);
      bool hit = false;
      for (const Element& b : B)
        if (X.L_member(b, z)) {
          hit = true;
          break;
        }
      if (!hit) {
        out.uncovered = z;
        return out;
      }
    }
  }
  cert.sampled_coverage = opt.trials;
  const FamilyOracle* o = X.oracle();
  ExtendedCardinal prim = o ? o->dimension.primitive_part
                            : ExtendedCardinal::finite(0);
  cert.basis = std::move(B);
  cert.dimension = DimensionDescriptor::of(
      ExtendedCardinal::finite(static_cast<long>(cert.basis.size())), prim);
  out.cert = std::move(cert);
  return out;
}

CertifyResult certify(const Evs& X, std::vector<Element> B,
                      const ValidateOptions& opt) {
  return X.finite() ? certify_finite(X, std::move(B), opt)
                    : certify_family(X, std::move(B), opt);
}

BasisCertificate recertify_or_die(const Evs& X, std::vector<Element> B,
                                  const ValidateOptions& opt,
                                  const char* theorem) {
  CertifyResult res = certify(X, std::move(B), opt);
  if (!res.cert)
    throw std::logic_error(std::string("verification of a transformed basis "
                                       "failed; this contradicts ") +
                           theorem);
  return std::move(*res.cert);
}

}  // namespace

bool FeasibleSet::member(const Evs& X, const Element& x) const {
  if (elements)
    return std::find(elements->begin(), elements->end(), x) != elements->end();
  return feasible_membership(X, x);
}

nlohmann::json FeasibleSet::to_json() const {
  nlohmann::json out{{"owner", owner}};
  if (elements)
    out["elements"] = element_array(*elements);
  else
    out["representation"] = "predicate";
  return out;
}

nlohmann::json BasisCertificate::to_json() const {
  nlohmann::json out{{"basis", element_array(basis)},
                     {"independence", independence.to_json()},
                     {"dimension", dimension.to_json()},
                     {"mode", mode}};
  if (mode == "sampled") {
    out["sampled_coverage"] = sampled_coverage;
  } else {
    nlohmann::json cov = nlohmann::json::array();
    for (const auto& [z, b] : coverage)
      cov.push_back({{"element", z.to_json()}, {"covered_by", b.to_json()}});
    out["coverage"] = cov;
  }
  return out;
}

nlohmann::json FindBasisOutcome::to_json() const {
  nlohmann::json out;
  switch (kind) {
    case Kind::found: out["kind"] = "found"; break;
    case Kind::no_basis: out["kind"] = "no-basis"; break;
    case Kind::undecided: out["kind"] = "undecided"; break;
  }
  if (certificate) out["certificate"] = certificate->to_json();
  if (uncovered) out["uncovered"] = uncovered->to_json();
  if (!note.empty()) out["note"] = note;
  return out;
}

std::string to_string(HasBasis v) {
  switch (v) {
    case HasBasis::yes: return "yes";
    case HasBasis::no: return "no";
    default: return "undecided";
  }
}

nlohmann::json SubEvsView::to_json() const {
  return {{"view", view->describe()},
          {"certified", certified.to_json()},
          {"dimension", dimension.to_json()}};
}

bool feasible_membership(const Evs& X, const Element& x) {
  require_member(X, x);
  if (X.is_minimal(x))
    throw DomainError("feasibility is undefined on primitive elements: " +
                      x.to_string());
  return X.Q_member(x);
}

FeasibleSet feasible_set(const Evs& X) {
  FeasibleSet out;
  out.owner = X.describe();
  if (X.finite()) {
    std::vector<Element> q;
    for (const Element& x : X.carrier())
      if (!X.is_minimal(x) && X.Q_member(x)) q.push_back(x);
    X.canon_sort(q);
    out.elements = std::move(q);
  }
  return out;
}

HasBasis has_basis(const Evs& X) {
  if (X.finite()) {
    FeasibleSet q = feasible_set(X);
    return is_generator(X, *q.elements).ok() ? HasBasis::yes : HasBasis::no;
  }
  const FamilyOracle* o = X.oracle();
  if (!o) return HasBasis::undecided;
  return o->dimension.no_basis ? HasBasis::no : HasBasis::yes;
}

FindBasisOutcome find_basis(const Evs& X, const ValidateOptions& opt) {
  FindBasisOutcome out;
  if (X.finite()) {
    const FeasibleSet fs = feasible_set(X);
    const std::vector<Element>& q = *fs.elements;
    // One canonical representative per testing-set class of Q(X).
    std::vector<std::set<Element>> L(q.size());
    for (std::size_t i = 0; i < q.size(); ++i)
      for (const Element& z : X.carrier())
        if (X.L_member(q[i], z)) L[i].insert(z);
    std::vector<Element> reps;
    for (std::size_t i = 0; i < q.size(); ++i) {
      bool seen = false;
      for (std::size_t j = 0; j < i && !seen; ++j) seen = (L[j] == L[i]);
      if (!seen) reps.push_back(q[i]);
    }
    CertifyResult res = certify_finite(X, std::move(reps), opt);
    if (res.cert) {
      out.kind = FindBasisOutcome::Kind::found;
      out.certificate = std::move(res.cert);
    } else {
      out.kind = FindBasisOutcome::Kind::no_basis;
      out.uncovered = res.uncovered;
      out.note = "the feasible set does not generate the non-primitive part";
    }
    return out;
  }

  const FamilyOracle* o = X.oracle();
  if (!o) {
    out.note = "no recorded ground truth for " + X.describe();
    return out;
  }
  if (o->dimension.no_basis) {
    out.kind = FindBasisOutcome::Kind::no_basis;
    Rng rng(opt.seed);
    out.uncovered = sample_nonminimal(X, rng);
    out.note = "the feasible set is empty: " + o->q_rule;
    return out;
  }
  if (!o->basis) {
    out.note = "a basis exists (recorded dimension " +
               o->dimension.to_string() +
               ") but no finite representative is recorded";
    return out;
  }
  CertifyResult res = certify_family(X, *o->basis, opt);
  if (!res.cert)
    throw std::logic_error("the recorded basis of " + X.describe() +
                           " failed verification");
  out.kind = FindBasisOutcome::Kind::found;
  out.certificate = std::move(res.cert);
  return out;
}

std::optional<BasisCertificate> try_certify_basis(const Evs& X,
                                                  std::vector<Element> B,
                                                  const ValidateOptions& opt) {
  return certify(X, std::move(B), opt).cert;
}

std::vector<BasisCertificate> enumerate_bases(const Evs& X, std::size_t limit) {
  if (!X.finite())
    throw InputError("basis enumeration requires a finite carrier");
  const std::vector<Element> q = *feasible_set(X).elements;
  const std::vector<Element> np = non_primitive_part(X);
  std::vector<BasisCertificate> out;
  std::vector<Element> current;

  auto generates = [&](const std::vector<Element>& S) {
    for (const Element& z : np) {
      bool hit = false;
      for (const Element& s : S)
        if (X.L_member(s, z)) {
          hit = true;
          break;
        }
      if (!hit) return false;
    }
    return true;
  };

  auto dfs = [&](auto&& self, std::size_t start) -> void {
    if (out.size() >= limit) return;
    if (generates(current)) {
      // Independent generators are bases; a proper superset could not stay
      // independent, so stop extending here.
      CertifyResult res = certify_finite(X, current, {});
      if (!res.cert)
        throw std::logic_error("an independent generating set failed "
                               "certification during enumeration");
      out.push_back(std::move(*res.cert));
      return;
    }
    for (std::size_t i = start; i < q.size(); ++i) {
      bool ok = true;
      for (const Element& c : current)
        if (orderly_dependent(X, c, q[i])) {
          ok = false;
          break;
        }
      if (!ok) continue;
      current.push_back(q[i]);
      self(self, i + 1);
      current.pop_back();
      if (out.size() >= limit) return;
    }
  };
  dfs(dfs, 0);
  return out;
}

DimensionDescriptor dimension(const Evs& X, const ValidateOptions& opt) {
  if (X.finite()) {
    FindBasisOutcome fb = find_basis(X, opt);
    if (fb.kind == FindBasisOutcome::Kind::found)
      return fb.certificate->dimension;
    return DimensionDescriptor::none();
  }
  const FamilyOracle* o = X.oracle();
  if (!o)
    throw Undecided(X.describe() +
                    ": no recorded dimension and the carrier is not finite");
  return o->dimension;
}

BasisCertificate replace_basis_element(const Evs& X, const BasisCertificate& B,
                                       const Element& x, const Element& y,
                                       const ValidateOptions& opt) {
  if (std::find(B.basis.begin(), B.basis.end(), x) == B.basis.end())
    throw InputError("the element to replace is not in the basis: " +
                     x.to_string());
  require_member(X, y);
  if (X.is_minimal(y) || !X.leq(y, x))
    throw DomainError("the replacement must lie in the lower set of " +
                      x.to_string() + " off the primitives");
  std::vector<Element> swapped;
  for (const Element& b : B.basis)
    swapped.push_back(b == x ? y : b);
  return recertify_or_die(X, std::move(swapped), opt,
                          "the replacement theorem");
}

BasisCertificate transform_basis(const Evs& X, const BasisCertificate& B,
                                 const Scalar& alpha, const Element& p,
                                 const ValidateOptions& opt) {
  if (alpha.is_zero()) throw InputError("the dilation scalar must be nonzero");
  if (!X.scale_defined(alpha))
    throw InputError("scalar not available on this instance: " +
                     alpha.to_string());
  require_member(X, p);
  if (!X.is_minimal(p))
    throw DomainError("the translation must be primitive: " + p.to_string());
  std::vector<Element> moved;
  for (const Element& b : B.basis) moved.push_back(X.add(X.scale(alpha, b), p));
  return recertify_or_die(X, std::move(moved), opt,
                          "the dilation/translation theorem");
}

std::vector<Element> maximal_oi_in_Q(const Evs& X) {
  if (!X.finite())
    throw InputError("greedy independent search requires a finite carrier");
  std::vector<Element> chosen;
  const FeasibleSet fs = feasible_set(X);
  for (const Element& x : *fs.elements) {
    bool ok = true;
    for (const Element& c : chosen)
      if (orderly_dependent(X, c, x)) {
        ok = false;
        break;
      }
    if (ok) chosen.push_back(x);
  }
  return chosen;
}

namespace {

// Fixpoint closure of a seed under addition and the declared scalar action.
std::vector<Element> closure_under_ops(const Evs& X,
                                       const std::vector<Element>& seed) {
  std::set<Element> S(seed.begin(), seed.end());
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<Element> snapshot(S.begin(), S.end());
    for (const Element& a : snapshot) {
      for (const Element& b : snapshot)
        if (S.insert(X.add(a, b)).second) grew = true;
      for (const Scalar& s : X.scalar_set())
        if (X.scale_defined(s) && S.insert(X.scale(s, a)).second) grew = true;
    }
  }
  return {S.begin(), S.end()};
}

SubEvsView certify_view(EvsPtr ambient, EvsPtr view, const ValidateOptions& opt,
                        const DimensionDescriptor& expected,
                        const char* theorem) {
  SubEvsView out;
  out.view = view;
  ValidateOptions vopt = opt;
  vopt.mode = view->finite() ? ValidateOptions::Mode::exhaustive
                             : ValidateOptions::Mode::sampled;
  out.certified = validate_subevs(*ambient, *view, vopt);
  if (!out.certified.ok())
    throw std::logic_error(std::string("a constructed sub-instance failed "
                                       "verification; this contradicts ") +
                           theorem);
  out.dimension = dimension(*view, vopt);
  if (!(out.dimension == expected))
    throw std::logic_error(std::string("a constructed sub-instance has "
                                       "dimension ") +
                           out.dimension.to_string() + " instead of " +
                           expected.to_string() + "; this contradicts " +
                           theorem);
  // Back the recorded dimension with coverage evidence from the actual
  // basis search (sampled on symbolic views, exhaustive otherwise).
  FindBasisOutcome fb = find_basis(*view, vopt);
  if (fb.kind == FindBasisOutcome::Kind::no_basis ||
      (fb.certificate && !(fb.certificate->dimension == expected)))
    throw std::logic_error(std::string("the basis search disagrees with the "
                                       "constructed dimension; this "
                                       "contradicts ") +
                           theorem);
  return out;
}

}  // namespace

SubEvsView construct_Bx_subevs(EvsPtr X, const Element& x,
                               const ValidateOptions& opt) {
  require_member(*X, x);
  if (x == X->zero() || !X->leq(X->zero(), x))
    throw DomainError(
        "the section generator must sit strictly above the identity: " +
        x.to_string());
  if (X->finite()) {
    auto closed = closure_under_ops(*X, {x});
    auto view = std::make_shared<RestrictedEvs>(
        X, std::move(closed), "span(" + x.to_string() + ") in " + X->describe());
    return certify_view(X, view, opt, DimensionDescriptor::of(1, 0),
                        "the one-ray sub-instance theorem");
  }
  if (!std::holds_alternative<Tuple>(x.payload) &&
      !std::holds_alternative<Composite>(x.payload))
    throw Undecided(X->describe() +
                    ": sums of scalar multiples have no finite closed form "
                    "for set-valued elements");
  auto section = std::make_shared<RaySection>(X, x);
  return certify_view(X, section, opt, DimensionDescriptor::of(1, 0),
                      "the one-ray sub-instance theorem");
}

namespace {

// Positive coordinate indices of the ray part of a tuple-family element.
std::vector<int> positive_ray_coords(const Evs& X, const Element& e) {
  const Tuple* ray = nullptr;
  Tuple held;
  if (auto* xv = dynamic_cast<const EvsTimesVector*>(&X)) {
    held = xv->base_part(e).as_tuple();
    ray = &held;
  } else if (dynamic_cast<const ConeTimesVector*>(&X)) {
    held = Tuple{e.as_tuple().front()};
    ray = &held;
  } else {
    held = e.as_tuple();
    ray = &held;
  }
  std::vector<int> out;
  for (std::size_t i = 0; i < ray->size(); ++i)
    if (!(*ray)[i].is_zero()) out.push_back(static_cast<int>(i));
  return out;
}

// Nonzero vector-part directions of a primitive element.
std::vector<int> vector_support(const Evs& X, const Element& p) {
  Tuple vec;
  if (auto* xv = dynamic_cast<const EvsTimesVector*>(&X)) {
    vec = xv->vec_part(p).as_tuple();
  } else if (dynamic_cast<const ConeTimesVector*>(&X)) {
    const Tuple& t = p.as_tuple();
    vec.assign(t.begin() + 1, t.end());
  }
  std::vector<int> out;
  for (std::size_t i = 0; i < vec.size(); ++i)
    if (!vec[i].is_zero()) out.push_back(static_cast<int>(i));
  return out;
}

long gf_log(long p, std::size_t n) {
  long k = 0;
  std::size_t acc = 1;
  while (acc < n) {
    acc *= static_cast<std::size_t>(p);
    ++k;
  }
  if (acc != n)
    throw std::logic_error("primitive subspace size is not a prime power");
  return k;
}

}  // namespace

SubEvsView construct_graded_subevs(EvsPtr X, const BasisCertificate& B,
                                   std::size_t gamma, std::size_t delta,
                                   const ValidateOptions& opt) {
  if (gamma > B.basis.size())
    throw InputError("gamma exceeds the basis cardinality");
  long prim_dim;
  if (X->finite()) {
    prim_dim = finite_primitive_dimension(*X, opt);
  } else {
    const FamilyOracle* o = X->oracle();
    if (!o || o->dimension.primitive_part.kind != ExtendedCardinal::Kind::finite)
      throw Undecided(X->describe() +
                      ": the primitive dimension is not a recorded finite value");
    prim_dim = o->dimension.primitive_part.value;
  }
  if (static_cast<long>(delta) > prim_dim)
    throw InputError("delta exceeds the primitive dimension");

  std::vector<Element> C(B.basis.begin(),
                         B.basis.begin() + static_cast<std::ptrdiff_t>(gamma));
  Scalar minus = Scalar::minus_one(X->field());

  // Canonically least primitive below each kept basis element.
  auto least_primitive = [&](const Element& c) {
    std::vector<Element> ps = X->primitives_below(c);
    X->canon_sort(ps);
    return ps.front();
  };

  std::vector<Element> D;
  std::vector<Element> qs;  // the chosen primitives that must land in W
  if (delta < gamma) {
    for (std::size_t i = 0; i < delta; ++i) {
      D.push_back(C[i]);
      qs.push_back(least_primitive(C[i]));
    }
    for (std::size_t i = delta; i < gamma; ++i)
      D.push_back(X->add(C[i], X->scale(minus, least_primitive(C[i]))));
  } else {
    D = C;
    for (const Element& d : D) qs.push_back(least_primitive(d));
  }

  if (X->finite()) {
    std::vector<Element> W = closure_under_ops(*X, [&] {
      std::vector<Element> seed = qs;
      seed.push_back(X->zero());
      return seed;
    }());
    if (X->field().kind == Field::Kind::gf) {
      long p = X->field().p;
      while (gf_log(p, W.size()) < static_cast<long>(delta)) {
        bool extended = false;
        for (const Element& m : X->minimal_elements()) {
          if (std::find(W.begin(), W.end(), m) != W.end()) continue;
          auto seed = W;
          seed.push_back(m);
          W = closure_under_ops(*X, seed);
          extended = true;
          break;
        }
        if (!extended)
          throw std::logic_error("ran out of primitives while extending the "
                                 "graded subspace");
      }
      if (gf_log(p, W.size()) != static_cast<long>(delta))
        throw Undecided("no primitive subspace of the requested dimension "
                        "contains the chosen translates");
    }
    std::vector<Element> seed = D;
    seed.insert(seed.end(), W.begin(), W.end());
    auto view = std::make_shared<RestrictedEvs>(
        X, closure_under_ops(*X, seed),
        "graded(" + X->describe() + ",gamma=" + std::to_string(gamma) +
            ",delta=" + std::to_string(delta) + ")");
    return certify_view(X, view, opt,
                        DimensionDescriptor::of(static_cast<long>(gamma),
                                                static_cast<long>(delta)),
                        "the grading theorem");
  }

  if (!dynamic_cast<const RayProduct*>(X.get()) &&
      !dynamic_cast<const ConeTimesVector*>(X.get()) &&
      !dynamic_cast<const EvsTimesVector*>(X.get()))
    throw Undecided(X->describe() +
                    ": no symbolic closure is recorded for graded "
                    "sub-instances of this family");
  if (auto* xv = dynamic_cast<const EvsTimesVector*>(X.get()))
    if (!dynamic_cast<const RayProduct*>(&xv->base()))
      throw Undecided(X->describe() +
                      ": the symbolic closure needs a ray-tuple base");

  std::vector<int> coords;
  for (const Element& d : D) {
    auto pos = positive_ray_coords(*X, d);
    if (pos.size() != 1)
      throw Undecided("a kept basis element is supported on " +
                      std::to_string(pos.size()) +
                      " ray coordinates; the symbolic closure needs exactly "
                      "one");
    coords.push_back(pos.front());
  }
  std::set<int> axes;
  for (const Element& q : qs)
    for (int i : vector_support(*X, q)) axes.insert(i);
  if (axes.size() > delta)
    throw Undecided("the chosen primitive translates span more axis "
                    "directions than delta; no axis-aligned subspace fits");
  for (int i = 0; axes.size() < delta; ++i)
    axes.insert(i);  // extend with the least unused directions
  auto view = std::make_shared<GradedView>(
      X, std::move(coords), std::vector<int>(axes.begin(), axes.end()));
  return certify_view(X, view, opt,
                      DimensionDescriptor::of(static_cast<long>(gamma),
                                              static_cast<long>(delta)),
                      "the grading theorem");
}

bool minimal_generator_check(const Evs& X, const std::vector<Element>& S) {
  if (!X.finite())
    throw InputError("minimal-generator checks require a finite carrier");
  if (!is_generator(X, S).ok()) return false;
  for (std::size_t i = 0; i < S.size(); ++i) {
    std::vector<Element> sub;
    for (std::size_t j = 0; j < S.size(); ++j)
      if (j != i) sub.push_back(S[j]);
    if (is_generator(X, sub).ok()) return false;
  }
  return true;
}

}  // namespace evs
