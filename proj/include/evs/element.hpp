#pragma once

#include <cstdint>
#include <nlohmann/json_fwd.hpp>
#include <variant>
#include <vector>

#include "evs/scalar.hpp"

namespace evs {

struct Element;

// Flat coordinate tuple: ray/cone/dictionary payloads and individual points.
using Tuple = std::vector<Scalar>;

// Finite point set (hyperspace carriers). Canonical form: sorted, deduplicated,
// non-empty.
struct PointSet {
  std::vector<Tuple> points;
  static PointSet canonical(std::vector<Tuple> pts);
};

// Subspace of GF(p)^ambient in reduced row echelon form (unique per subspace).
struct Subspace {
  int p = 2;
  int ambient = 1;
  std::vector<std::vector<int>> rows;  // RREF, no zero rows
  static Subspace canonical(int p, int ambient, std::vector<std::vector<int>> gens);
  int dim() const { return static_cast<int>(rows.size()); }
  bool contains_vector(const std::vector<int>& v) const;
  std::vector<std::vector<int>> enumerate_vectors() const;
};

// Pairing of component elements (product spaces, evs-times-vector).
struct Composite {
  std::vector<Element> parts;
};

using Payload = std::variant<std::uint32_t, Tuple, PointSet, Subspace, Composite>;

struct Element {
  Payload payload;

  Element() : payload(std::uint32_t{0}) {}
  explicit Element(Payload p) : payload(std::move(p)) {}
  static Element index(std::uint32_t i) { return Element(Payload(i)); }
  static Element tuple(Tuple t) { return Element(Payload(std::move(t))); }
  static Element point_set(PointSet s) { return Element(Payload(std::move(s))); }
  static Element subspace(Subspace s) { return Element(Payload(std::move(s))); }
  static Element composite(std::vector<Element> parts) {
    return Element(Payload(Composite{std::move(parts)}));
  }

  bool is_index() const { return std::holds_alternative<std::uint32_t>(payload); }
  std::uint32_t idx() const { return std::get<std::uint32_t>(payload); }
  const Tuple& as_tuple() const { return std::get<Tuple>(payload); }
  const PointSet& as_points() const { return std::get<PointSet>(payload); }
  const Subspace& as_subspace() const { return std::get<Subspace>(payload); }
  const Composite& as_composite() const { return std::get<Composite>(payload); }

  bool operator==(const Element&) const;
  bool operator!=(const Element& o) const { return !(*this == o); }
  bool operator<(const Element&) const;  // canonical global payload order

  std::string to_string() const;
  nlohmann::json to_json() const;
};

int compare_elements(const Element& a, const Element& b);

// Text literals used by the command line: "3", "-1/2", "(1,0)", "{0,1}",
// "{(0,0),(1,2)}", "span{(1,0)}", "[a; b]" for composites.
Element parse_element_literal(const Field& f, const std::string& text);
Element element_from_json(const Field& f, const nlohmann::json& j);

}  // namespace evs
