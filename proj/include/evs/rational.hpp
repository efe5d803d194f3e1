#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>
#include <vector>

namespace evs {

// Raised when an input document or argument is malformed.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Raised when an operation's precondition on mathematical objects fails.
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Raised when a question cannot be decided with the available rules/budget.
struct Undecided : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exact arbitrary-precision rational. All arithmetic in this project is exact;
// floating point is never used for carrier or scalar values.
using Rational = boost::multiprecision::cpp_rational;

inline Rational rat(long n, long d = 1) {
  if (d == 0) throw InputError("rational with zero denominator");
  return Rational(n, d);
}

std::string rat_to_string(const Rational& q);
Rational rat_parse(const std::string& text);

inline Rational rat_abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

// Finite rational grid: all a/b with 1 <= b <= max_den and |a/b| <= max_abs.
// This is the documented sample universe for rational-field instances; bounds
// are parameters everywhere they matter.
struct Grid {
  int max_abs = 4;
  int max_den = 4;
  std::vector<Rational> all() const;     // includes 0, symmetric
  std::vector<Rational> nonzero() const;
  std::vector<Rational> nonneg() const;  // includes 0
  std::vector<Rational> positive() const;
};

}  // namespace evs
