#include "evs/instance.hpp"

#include <algorithm>

namespace evs {

std::vector<Scalar> Evs::scalar_set() const { return field_scalars(field()); }

bool Evs::scale_defined(const Scalar& a) const { return a.field() == field(); }

const std::vector<Element>& Evs::carrier() const {
  if (!carrier_cache_) {
    if (!finite()) throw DomainError(describe() + ": carrier is not finite");
    auto all = enumerate_carrier();
    canon_sort(all);
    carrier_cache_ = std::move(all);
  }
  return *carrier_cache_;
}

std::vector<Element> Evs::enumerate_carrier() const {
  throw DomainError(describe() + ": carrier enumeration not available");
}

bool Evs::is_minimal(const Element& x) const {
  for (const Element& y : carrier())
    if (!(y == x) && leq(y, x)) return false;
  return true;
}

bool Evs::minimal_enumerable() const { return minimal_enumerable_hint(); }

const std::vector<Element>& Evs::minimal_elements() const {
  if (!minimal_cache_) {
    if (!minimal_enumerable())
      throw DomainError(describe() + ": minimal elements are not enumerable");
    auto mins = enumerate_minimal();
    canon_sort(mins);
    minimal_cache_ = std::move(mins);
  }
  return *minimal_cache_;
}

std::vector<Element> Evs::enumerate_minimal() const {
  std::vector<Element> out;
  for (const Element& x : carrier())
    if (is_minimal(x)) out.push_back(x);
  return out;
}

std::vector<Element> Evs::primitives_below(const Element& x) const {
  std::vector<Element> out;
  for (const Element& p : minimal_elements())
    if (leq(p, x)) out.push_back(p);
  return out;
}

Element Evs::sample_one(Rng& rng) const { return rng.pick(carrier()); }

std::vector<Element> Evs::sample(Rng& rng, std::size_t count) const {
  std::vector<Element> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(sample_one(rng));
  return out;
}

Element Evs::sample_minimal(Rng& rng) const { return rng.pick(minimal_elements()); }

Element Evs::sample_upper(Rng& rng, const Element& x) const {
  std::vector<Element> uppers;
  for (const Element& w : carrier())
    if (leq(x, w)) uppers.push_back(w);
  return rng.pick(uppers);  // non-empty: x <= x
}

bool Evs::L_member(const Element& x, const Element& z) const {
  return L_witness(x, z).has_value();
}

std::optional<LWitness> Evs::L_witness(const Element& x, const Element& z) const {
  // Exhaustion is only complete on finite carriers; families must supply a
  // closed-form rule instead of inheriting this search.
  if (!finite())
    throw Undecided(describe() + ": no closed-form testing-set rule");
  // Deterministic search over the declared scalars and the primitive set,
  // both in canonical order.
  for (const Scalar& a : scalar_set()) {
    if (a.is_zero()) continue;
    Element ax = scale(a, x);
    for (const Element& p : minimal_elements())
      if (leq(add(ax, p), z)) return LWitness{a, p};
  }
  return std::nullopt;
}

bool Evs::Q_member(const Element& x) const {
  if (!finite())
    throw Undecided(describe() + ": no closed-form feasibility rule");
  if (is_minimal(x)) return false;
  for (const Element& y : carrier()) {
    if (y == x || !leq(y, x) || is_minimal(y)) continue;
    if (!L_member(x, y)) return false;
  }
  return L_member(x, x);
}

void Evs::canon_sort(std::vector<Element>& v) const {
  std::sort(v.begin(), v.end(),
            [this](const Element& a, const Element& b) { return canon_less(a, b); });
}

RestrictedEvs::RestrictedEvs(EvsPtr ambient, std::vector<Element> subset, std::string name)
    : ambient_(std::move(ambient)), subset_(std::move(subset)), name_(std::move(name)) {
  if (subset_.empty()) throw DomainError("restricted carrier must be non-empty");
  ambient_->canon_sort(subset_);
  subset_.erase(std::unique(subset_.begin(), subset_.end()), subset_.end());
  for (const Element& x : subset_)
    if (!ambient_->contains(x))
      throw DomainError(name_ + ": element " + x.to_string() + " is outside the ambient carrier");
  if (std::find(subset_.begin(), subset_.end(), ambient_->zero()) == subset_.end())
    throw DomainError(name_ + ": restricted carrier must contain the identity");
}

bool RestrictedEvs::contains(const Element& x) const {
  return std::binary_search(subset_.begin(), subset_.end(), x,
                            [this](const Element& a, const Element& b) {
                              return ambient_->canon_less(a, b);
                            });
}

}  // namespace evs
