#pragma once

#include <map>
#include <nlohmann/json.hpp>

#include "evs/instance.hpp"

namespace evs {

// Explicit finite instance: carrier elements with an addition table, a scalar
// action table and a full order relation, all loaded from a JSON document.
//
// Document shape:
//   {
//     "name": "optional label",
//     "field": {"kind":"gf","p":3} | {"kind":"rational"},
//     "elements": 4 | [payload, ...],     // integer n => abstract elements #0..#n-1
//     "zero": 0,
//     "add": [[..n ints..], ...],         // n rows
//     "scalar": [[alpha, src, dst], ...], // complete per declared alpha;
//                                         // gf: all residues declared,
//                                         // rational: at least 0, 1, -1
//     "leq": [[i, j], ...]                // every true pair, reflexive pairs included
//   }
// The loader verifies canonical payloads, table shapes, and that leq is a
// partial order (reflexive, antisymmetric, transitive).
class TableEvs : public Evs {
 public:
  static std::shared_ptr<TableEvs> from_json(const nlohmann::json& doc);

  Field field() const override { return field_; }
  std::string describe() const override { return name_; }
  Element zero() const override { return labels_[zero_]; }
  bool contains(const Element& x) const override { return index_.count(x) != 0; }
  Element add(const Element& x, const Element& y) const override;
  Element scale(const Scalar& a, const Element& x) const override;
  bool leq(const Element& x, const Element& y) const override;
  bool finite() const override { return true; }
  std::vector<Scalar> scalar_set() const override;
  bool scale_defined(const Scalar& a) const override { return action_.count(a) != 0; }

  nlohmann::json to_json() const;

 protected:
  std::vector<Element> enumerate_carrier() const override { return labels_; }

 private:
  TableEvs() : field_(Field::rational()) {}
  int at(const Element& x, const char* role) const;

  Field field_;
  std::string name_ = "table";
  std::vector<Element> labels_;
  int zero_ = 0;
  std::vector<std::vector<int>> add_;
  std::map<Scalar, std::vector<int>> action_;
  std::vector<std::vector<bool>> leq_;
  std::map<Element, int> index_;
};

// Re-expresses any finite instance as an explicit table document (used for
// interchange and round-trip tests).
nlohmann::json export_table(const Evs& X);

}  // namespace evs
