#pragma once

#include <compare>
#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <string>
#include <vector>

#include "evs/rational.hpp"

namespace evs {

struct Field {
  enum class Kind { rational, gf };
  Kind kind = Kind::rational;
  int p = 0;  // prime modulus when kind == gf

  bool operator==(const Field&) const = default;
  std::string to_string() const;
  static Field rational() { return {Kind::rational, 0}; }
  static Field gf(int p);
};

// A field scalar: exact rational or a residue mod a small prime.
class Scalar {
 public:
  Scalar() : field_(Field::rational()), q_(0) {}
  static Scalar of(const Field& f, long v);
  static Scalar rational(Rational q) { return Scalar(Field::rational(), std::move(q), 0); }
  static Scalar gf(int p, long r);
  static Scalar zero(const Field& f) { return of(f, 0); }
  static Scalar one(const Field& f) { return of(f, 1); }
  static Scalar minus_one(const Field& f) { return of(f, -1); }

  const Field& field() const { return field_; }
  bool is_zero() const;
  bool is_rational() const { return field_.kind == Field::Kind::rational; }
  const Rational& rat() const { return q_; }
  int residue() const { return r_; }

  Scalar operator+(const Scalar&) const;
  Scalar operator-(const Scalar&) const;
  Scalar operator*(const Scalar&) const;
  Scalar neg() const;
  Scalar inv() const;  // DomainError on zero
  // |alpha|: only meaningful over the rationals (used by the cone-like actions).
  Scalar abs() const;

  bool operator==(const Scalar&) const;
  bool operator!=(const Scalar& o) const { return !(*this == o); }
  // Total order used for canonical, deterministic output; within gf by
  // residue, within rationals by value.
  bool operator<(const Scalar&) const;

  std::string to_string() const;
  nlohmann::json to_json() const;
  static Scalar from_json(const Field& f, const nlohmann::json& j);
  static Scalar parse(const Field& f, const std::string& text);

 private:
  Scalar(Field f, Rational q, int r) : field_(f), q_(std::move(q)), r_(r) {}
  void require_same(const Scalar& o) const;
  Field field_;
  Rational q_;
  int r_ = 0;
};

// Complete scalar list for gf(p); for the rationals, the given grid.
std::vector<Scalar> field_scalars(const Field& f, const Grid& grid = {});

}  // namespace evs
