#include "evs/scalar.hpp"

#include <nlohmann/json.hpp>

namespace evs {

std::string Field::to_string() const {
  return kind == Kind::rational ? "rational" : "gf(" + std::to_string(p) + ")";
}

Field Field::gf(int p) {
  if (p < 2) throw InputError("gf modulus must be a prime >= 2");
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) throw InputError("gf modulus must be prime, got " + std::to_string(p));
  return {Kind::gf, p};
}

Scalar Scalar::of(const Field& f, long v) {
  if (f.kind == Field::Kind::rational) return rational(Rational(v));
  return gf(f.p, v);
}

Scalar Scalar::gf(int p, long r) {
  Field f = Field::gf(p);
  long m = r % p;
  if (m < 0) m += p;
  return Scalar(f, Rational(0), static_cast<int>(m));
}

bool Scalar::is_zero() const {
  return is_rational() ? q_ == 0 : r_ == 0;
}

void Scalar::require_same(const Scalar& o) const {
  if (!(field_ == o.field_)) throw DomainError("scalar field mismatch");
}

Scalar Scalar::operator+(const Scalar& o) const {
  require_same(o);
  if (is_rational()) return rational(q_ + o.q_);
  return gf(field_.p, r_ + o.r_);
}

Scalar Scalar::operator-(const Scalar& o) const {
  require_same(o);
  if (is_rational()) return rational(q_ - o.q_);
  return gf(field_.p, r_ - o.r_ + field_.p);
}

Scalar Scalar::operator*(const Scalar& o) const {
  require_same(o);
  if (is_rational()) return rational(q_ * o.q_);
  return gf(field_.p, static_cast<long>(r_) * o.r_);
}

Scalar Scalar::neg() const {
  if (is_rational()) return rational(-q_);
  return gf(field_.p, field_.p - r_);
}

Scalar Scalar::inv() const {
  if (is_zero()) throw DomainError("inverse of zero scalar");
  if (is_rational()) return rational(1 / q_);
  // Fermat: r^(p-2) mod p.
  long base = r_, acc = 1, e = field_.p - 2, p = field_.p;
  while (e > 0) {
    if (e & 1) acc = acc * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return gf(field_.p, acc);
}

Scalar Scalar::abs() const {
  if (!is_rational()) throw DomainError("|alpha| is only defined over the rationals");
  return rational(rat_abs(q_));
}

bool Scalar::operator==(const Scalar& o) const {
  if (!(field_ == o.field_)) return false;
  return is_rational() ? q_ == o.q_ : r_ == o.r_;
}

bool Scalar::operator<(const Scalar& o) const {
  if (field_.kind != o.field_.kind) return field_.kind < o.field_.kind;
  if (is_rational()) return q_ < o.q_;
  if (field_.p != o.field_.p) return field_.p < o.field_.p;
  return r_ < o.r_;
}

std::string Scalar::to_string() const {
  return is_rational() ? rat_to_string(q_) : std::to_string(r_);
}

nlohmann::json Scalar::to_json() const {
  if (!is_rational()) return r_;
  if (denominator(q_) == 1 && rat_abs(q_) <= 1000000) {
    return static_cast<long>(numerator(q_));
  }
  return to_string();
}

Scalar Scalar::from_json(const Field& f, const nlohmann::json& j) {
  if (j.is_number_integer()) return of(f, j.get<long>());
  if (j.is_string()) return parse(f, j.get<std::string>());
  throw InputError("scalar must be an integer or a rational string, got " + j.dump());
}

Scalar Scalar::parse(const Field& f, const std::string& text) {
  Rational q = rat_parse(text);
  if (f.kind == Field::Kind::rational) return rational(q);
  if (denominator(q) != 1) throw InputError("non-integer scalar over " + f.to_string() + ": " + text);
  return gf(f.p, static_cast<long>(numerator(q) % f.p));
}

std::vector<Scalar> field_scalars(const Field& f, const Grid& grid) {
  std::vector<Scalar> out;
  if (f.kind == Field::Kind::gf) {
    for (int r = 0; r < f.p; ++r) out.push_back(Scalar::gf(f.p, r));
  } else {
    for (const auto& q : grid.all()) out.push_back(Scalar::rational(q));
  }
  return out;
}

}  // namespace evs
