#include "evs/element.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>
#include <sstream>

namespace evs {

static int compare_scalars(const Scalar& a, const Scalar& b) {
  if (a < b) return -1;
  if (b < a) return 1;
  return 0;
}

static int compare_tuples(const Tuple& a, const Tuple& b) {
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i)
    if (int c = compare_scalars(a[i], b[i])) return c;
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  return 0;
}

PointSet PointSet::canonical(std::vector<Tuple> pts) {
  if (pts.empty()) throw DomainError("point set payload must be non-empty");
  std::sort(pts.begin(), pts.end(),
            [](const Tuple& a, const Tuple& b) { return compare_tuples(a, b) < 0; });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Tuple& a, const Tuple& b) { return compare_tuples(a, b) == 0; }),
            pts.end());
  return PointSet{std::move(pts)};
}

Subspace Subspace::canonical(int p, int ambient, std::vector<std::vector<int>> gens) {
  for (auto& row : gens) {
    if (static_cast<int>(row.size()) != ambient)
      throw InputError("subspace generator has wrong length");
    for (auto& v : row) {
      v %= p;
      if (v < 0) v += p;
    }
  }
  // Gauss-Jordan over GF(p).
  auto inv_mod = [p](int a) {
    long base = a, acc = 1, e = p - 2;
    while (e > 0) {
      if (e & 1) acc = acc * base % p;
      base = base * base % p;
      e >>= 1;
    }
    return static_cast<int>(acc);
  };
  int rank = 0;
  for (int col = 0; col < ambient && rank < static_cast<int>(gens.size()); ++col) {
    int pivot = -1;
    for (int r = rank; r < static_cast<int>(gens.size()); ++r)
      if (gens[r][col] != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    std::swap(gens[rank], gens[pivot]);
    int scale = inv_mod(gens[rank][col]);
    for (auto& v : gens[rank]) v = static_cast<int>(static_cast<long>(v) * scale % p);
    for (int r = 0; r < static_cast<int>(gens.size()); ++r) {
      if (r == rank || gens[r][col] == 0) continue;
      int f = gens[r][col];
      for (int c = 0; c < ambient; ++c) {
        int v = gens[r][c] - static_cast<int>(static_cast<long>(f) * gens[rank][c] % p);
        gens[r][c] = ((v % p) + p) % p;
      }
    }
    ++rank;
  }
  gens.resize(rank);
  return Subspace{p, ambient, std::move(gens)};
}

bool Subspace::contains_vector(const std::vector<int>& v) const {
  std::vector<int> w = v;
  for (auto& x : w) {
    x %= p;
    if (x < 0) x += p;
  }
  for (const auto& row : rows) {
    int lead = 0;
    while (lead < ambient && row[lead] == 0) ++lead;
    if (lead == ambient) continue;
    int f = w[lead];  // row has pivot 1 at lead
    if (f == 0) continue;
    for (int c = 0; c < ambient; ++c)
      w[c] = ((w[c] - static_cast<int>(static_cast<long>(f) * row[c] % p)) % p + p) % p;
  }
  return std::all_of(w.begin(), w.end(), [](int x) { return x == 0; });
}

std::vector<std::vector<int>> Subspace::enumerate_vectors() const {
  std::vector<std::vector<int>> out;
  std::vector<int> coef(rows.size(), 0);
  while (true) {
    std::vector<int> v(ambient, 0);
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (int c = 0; c < ambient; ++c)
        v[c] = (v[c] + coef[r] * rows[r][c]) % p;
    out.push_back(v);
    std::size_t i = 0;
    for (; i < coef.size(); ++i) {
      if (++coef[i] < p) break;
      coef[i] = 0;
    }
    if (i == coef.size()) break;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

int compare_elements(const Element& a, const Element& b) {
  if (a.payload.index() != b.payload.index())
    return a.payload.index() < b.payload.index() ? -1 : 1;
  switch (a.payload.index()) {
    case 0: {
      auto x = a.idx(), y = b.idx();
      return x == y ? 0 : (x < y ? -1 : 1);
    }
    case 1:
      return compare_tuples(a.as_tuple(), b.as_tuple());
    case 2: {
      const auto& x = a.as_points().points;
      const auto& y = b.as_points().points;
      if (x.size() != y.size()) return x.size() < y.size() ? -1 : 1;
      for (std::size_t i = 0; i < x.size(); ++i)
        if (int c = compare_tuples(x[i], y[i])) return c;
      return 0;
    }
    case 3: {
      const auto& x = a.as_subspace();
      const auto& y = b.as_subspace();
      if (x.ambient != y.ambient) return x.ambient < y.ambient ? -1 : 1;
      if (x.rows.size() != y.rows.size()) return x.rows.size() < y.rows.size() ? -1 : 1;
      if (x.rows != y.rows) return x.rows < y.rows ? -1 : 1;
      return 0;
    }
    default: {
      const auto& x = a.as_composite().parts;
      const auto& y = b.as_composite().parts;
      if (x.size() != y.size()) return x.size() < y.size() ? -1 : 1;
      for (std::size_t i = 0; i < x.size(); ++i)
        if (int c = compare_elements(x[i], y[i])) return c;
      return 0;
    }
  }
}

bool Element::operator==(const Element& o) const { return compare_elements(*this, o) == 0; }
bool Element::operator<(const Element& o) const { return compare_elements(*this, o) < 0; }

static std::string tuple_to_string(const Tuple& t) {
  if (t.size() == 1) return t[0].to_string();
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) s += ",";
    s += t[i].to_string();
  }
  return s + ")";
}

std::string Element::to_string() const {
  switch (payload.index()) {
    case 0:
      return "#" + std::to_string(idx());
    case 1:
      return tuple_to_string(as_tuple());
    case 2: {
      std::string s = "{";
      const auto& pts = as_points().points;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i) s += ",";
        s += tuple_to_string(pts[i]);
      }
      return s + "}";
    }
    case 3: {
      const auto& sp = as_subspace();
      std::string s = "span{";
      for (std::size_t i = 0; i < sp.rows.size(); ++i) {
        if (i) s += ",";
        s += "(";
        for (int c = 0; c < sp.ambient; ++c) {
          if (c) s += ",";
          s += std::to_string(sp.rows[i][c]);
        }
        s += ")";
      }
      return s + "}";
    }
    default: {
      std::string s = "[";
      const auto& parts = as_composite().parts;
      for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) s += "; ";
        s += parts[i].to_string();
      }
      return s + "]";
    }
  }
}

nlohmann::json Element::to_json() const {
  switch (payload.index()) {
    case 0:
      return idx();
    case 1: {
      nlohmann::json arr = nlohmann::json::array();
      for (const auto& s : as_tuple()) arr.push_back(s.to_json());
      return arr;
    }
    case 2: {
      nlohmann::json arr = nlohmann::json::array();
      for (const auto& pt : as_points().points) {
        nlohmann::json p = nlohmann::json::array();
        for (const auto& s : pt) p.push_back(s.to_json());
        arr.push_back(p);
      }
      return arr;
    }
    case 3: {
      const auto& sp = as_subspace();
      return nlohmann::json{{"subspace", {{"p", sp.p}, {"ambient", sp.ambient}, {"rows", sp.rows}}}};
    }
    default: {
      nlohmann::json arr = nlohmann::json::array();
      for (const auto& part : as_composite().parts) arr.push_back(part.to_json());
      return nlohmann::json{{"parts", arr}};
    }
  }
}

Element element_from_json(const Field& f, const nlohmann::json& j) {
  if (j.is_number_integer() || j.is_string()) {
    return Element::tuple({Scalar::from_json(f, j)});
  }
  if (j.is_object() && j.contains("subspace")) {
    const auto& sp = j.at("subspace");
    return Element::subspace(Subspace::canonical(
        sp.at("p").get<int>(), sp.at("ambient").get<int>(),
        sp.at("rows").get<std::vector<std::vector<int>>>()));
  }
  if (j.is_object() && j.contains("parts")) {
    std::vector<Element> parts;
    for (const auto& item : j.at("parts")) parts.push_back(element_from_json(f, item));
    return Element::composite(std::move(parts));
  }
  if (j.is_array()) {
    if (j.empty()) throw InputError("empty element payload");
    if (j[0].is_array()) {  // set of points
      std::vector<Tuple> pts;
      for (const auto& item : j) {
        Tuple pt;
        for (const auto& c : item) pt.push_back(Scalar::from_json(f, c));
        pts.push_back(std::move(pt));
      }
      return Element::point_set(PointSet::canonical(std::move(pts)));
    }
    Tuple t;
    for (const auto& c : j) t.push_back(Scalar::from_json(f, c));
    return Element::tuple(std::move(t));
  }
  throw InputError("unrecognized element payload: " + j.dump());
}

namespace {

struct LiteralParser {
  const Field& f;
  const std::string& s;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) throw InputError(std::string("expected '") + c + "' in element literal: " + s);
  }

  Scalar number() {
    skip_ws();
    std::size_t start = pos;
    if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) ++pos;
    while (pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '/'))
      ++pos;
    if (start == pos) throw InputError("expected number in element literal: " + s);
    return Scalar::parse(f, s.substr(start, pos - start));
  }

  Tuple tuple_body() {  // after '('
    Tuple t;
    t.push_back(number());
    while (eat(',')) t.push_back(number());
    expect(')');
    return t;
  }

  Tuple point() {
    skip_ws();
    if (eat('(')) return tuple_body();
    return Tuple{number()};
  }

  Element parse() {
    skip_ws();
    if (s.compare(pos, 5, "span{") == 0) {
      pos += 5;
      std::vector<std::vector<int>> gens;
      int ambient = -1;
      skip_ws();
      if (!eat('}')) {
        do {
          Tuple pt = point();
          std::vector<int> row;
          for (const auto& sc : pt) {
            if (sc.field().kind != Field::Kind::gf)
              throw InputError("span literal requires a gf field");
            row.push_back(sc.residue());
          }
          ambient = static_cast<int>(row.size());
          gens.push_back(std::move(row));
        } while (eat(','));
        expect('}');
      }
      if (f.kind != Field::Kind::gf) throw InputError("span literal requires a gf field");
      if (ambient < 0) throw InputError("span literal needs at least one generator: " + s);
      return Element::subspace(Subspace::canonical(f.p, ambient, std::move(gens)));
    }
    if (eat('[')) {
      std::vector<Element> parts;
      parts.push_back(parse());
      while (eat(';')) parts.push_back(parse());
      expect(']');
      return Element::composite(std::move(parts));
    }
    if (eat('{')) {
      std::vector<Tuple> pts;
      pts.push_back(point());
      while (eat(',')) pts.push_back(point());
      expect('}');
      return Element::point_set(PointSet::canonical(std::move(pts)));
    }
    if (eat('(')) return Element::tuple(tuple_body());
    return Element::tuple({number()});
  }
};

}  // namespace

Element parse_element_literal(const Field& f, const std::string& text) {
  LiteralParser p{f, text};
  Element e = p.parse();
  p.skip_ws();
  if (p.pos != text.size())
    throw InputError("trailing characters in element literal: " + text);
  return e;
}

}  // namespace evs
