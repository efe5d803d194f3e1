#include "evs/rational.hpp"

#include <algorithm>
#include <set>

namespace evs {

std::string rat_to_string(const Rational& q) { return q.str(); }

Rational rat_parse(const std::string& text) {
  if (text.empty()) throw InputError("empty rational literal");
  // cpp_rational's string constructor accepts "a/b" and plain integers but is
  // lax about garbage; pre-validate.
  std::size_t slash = text.find('/');
  auto check_int = [](const std::string& s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
  };
  if (slash == std::string::npos) {
    if (!check_int(text)) throw InputError("bad rational literal: " + text);
    return Rational(text);
  }
  std::string num = text.substr(0, slash), den = text.substr(slash + 1);
  if (!check_int(num) || !check_int(den))
    throw InputError("bad rational literal: " + text);
  if (Rational(den) == 0) throw InputError("rational with zero denominator: " + text);
  return Rational(text);
}

std::vector<Rational> Grid::all() const {
  std::set<Rational> out;
  for (int d = 1; d <= max_den; ++d)
    for (int n = -max_abs * d; n <= max_abs * d; ++n) out.insert(Rational(n, d));
  return {out.begin(), out.end()};
}

std::vector<Rational> Grid::nonzero() const {
  auto v = all();
  v.erase(std::remove(v.begin(), v.end(), Rational(0)), v.end());
  return v;
}

std::vector<Rational> Grid::nonneg() const {
  auto v = all();
  v.erase(std::remove_if(v.begin(), v.end(), [](const Rational& q) { return q < 0; }), v.end());
  return v;
}

std::vector<Rational> Grid::positive() const {
  auto v = all();
  v.erase(std::remove_if(v.begin(), v.end(), [](const Rational& q) { return q <= 0; }), v.end());
  return v;
}

}  // namespace evs
