#include "evs/table.hpp"

#include <algorithm>

namespace evs {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw InputError(where + ": " + what);
}

int index_at(const nlohmann::json& j, const std::string& where, std::size_t n) {
  if (!j.is_number_integer()) fail(where, "expected an element index, got " + j.dump());
  long v = j.get<long>();
  if (v < 0 || v >= static_cast<long>(n))
    fail(where, "index " + std::to_string(v) + " out of range [0," + std::to_string(n) + ")");
  return static_cast<int>(v);
}

}  // namespace

std::shared_ptr<TableEvs> TableEvs::from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw InputError("instance document must be a JSON object");
  auto self = std::shared_ptr<TableEvs>(new TableEvs());

  if (!doc.contains("field")) fail("field", "missing");
  const auto& fj = doc.at("field");
  std::string kind = fj.value("kind", "");
  if (kind == "gf") {
    if (!fj.contains("p")) fail("field", "gf field needs p");
    self->field_ = Field::gf(fj.at("p").get<int>());
  } else if (kind == "rational") {
    self->field_ = Field::rational();
  } else {
    fail("field.kind", "must be \"gf\" or \"rational\", got \"" + kind + "\"");
  }
  if (doc.contains("name")) self->name_ = doc.at("name").get<std::string>();

  if (!doc.contains("elements")) fail("elements", "missing");
  const auto& ej = doc.at("elements");
  if (ej.is_number_integer()) {
    long n = ej.get<long>();
    if (n < 1) fail("elements", "carrier size must be at least 1");
    for (long i = 0; i < n; ++i)
      self->labels_.push_back(Element::index(static_cast<std::uint32_t>(i)));
  } else if (ej.is_array()) {
    if (ej.empty()) fail("elements", "carrier must be non-empty");
    for (std::size_t i = 0; i < ej.size(); ++i) {
      Element e = element_from_json(self->field_, ej[i]);
      if (e.to_json() != ej[i])
        fail("elements[" + std::to_string(i) + "]",
             "payload is not canonical; expected " + e.to_json().dump());
      self->labels_.push_back(std::move(e));
    }
  } else {
    fail("elements", "expected an integer size or a payload array");
  }
  std::size_t n = self->labels_.size();
  for (std::size_t i = 0; i < n; ++i) {
    auto [it, fresh] = self->index_.emplace(self->labels_[i], static_cast<int>(i));
    if (!fresh)
      fail("elements[" + std::to_string(i) + "]",
           "duplicate of elements[" + std::to_string(it->second) + "]");
  }

  if (!doc.contains("zero")) fail("zero", "missing");
  self->zero_ = index_at(doc.at("zero"), "zero", n);

  if (!doc.contains("add")) fail("add", "missing");
  const auto& aj = doc.at("add");
  if (!aj.is_array() || aj.size() != n)
    fail("add", "expected " + std::to_string(n) + " rows");
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = aj[i];
    if (!row.is_array() || row.size() != n)
      fail("add[" + std::to_string(i) + "]", "expected " + std::to_string(n) + " entries");
    std::vector<int> r;
    for (std::size_t j = 0; j < n; ++j)
      r.push_back(index_at(row[j], "add[" + std::to_string(i) + "][" + std::to_string(j) + "]", n));
    self->add_.push_back(std::move(r));
  }

  if (!doc.contains("scalar")) fail("scalar", "missing");
  const auto& sj = doc.at("scalar");
  if (!sj.is_array()) fail("scalar", "expected an array of [alpha, src, dst] triples");
  std::map<Scalar, std::vector<int>> action;
  for (std::size_t k = 0; k < sj.size(); ++k) {
    const auto& triple = sj[k];
    std::string where = "scalar[" + std::to_string(k) + "]";
    if (!triple.is_array() || triple.size() != 3) fail(where, "expected [alpha, src, dst]");
    Scalar a = Scalar::from_json(self->field_, triple[0]);
    int src = index_at(triple[1], where + "[1]", n);
    int dst = index_at(triple[2], where + "[2]", n);
    auto& col = action.try_emplace(a, std::vector<int>(n, -1)).first->second;
    if (col[src] != -1 && col[src] != dst)
      fail(where, "conflicting action of " + a.to_string() + " on element " +
                      std::to_string(src));
    col[src] = dst;
  }
  for (const auto& [a, col] : action)
    for (std::size_t i = 0; i < n; ++i)
      if (col[i] == -1)
        fail("scalar", "action of " + a.to_string() + " missing for element " +
                           std::to_string(i));
  if (self->field_.kind == Field::Kind::gf) {
    for (int r = 0; r < self->field_.p; ++r)
      if (!action.count(Scalar::gf(self->field_.p, r)))
        fail("scalar", "gf(" + std::to_string(self->field_.p) + ") action must declare scalar " +
                           std::to_string(r));
  } else {
    for (long v : {0L, 1L, -1L})
      if (!action.count(Scalar::rational(rat(v))))
        fail("scalar", "rational action must declare scalar " + std::to_string(v));
  }
  self->action_ = std::move(action);

  if (!doc.contains("leq")) fail("leq", "missing");
  const auto& lj = doc.at("leq");
  if (!lj.is_array()) fail("leq", "expected an array of [i, j] pairs");
  self->leq_.assign(n, std::vector<bool>(n, false));
  for (std::size_t k = 0; k < lj.size(); ++k) {
    const auto& pj = lj[k];
    std::string where = "leq[" + std::to_string(k) + "]";
    if (!pj.is_array() || pj.size() != 2) fail(where, "expected a pair [i, j]");
    int i = index_at(pj[0], where + "[0]", n);
    int j = index_at(pj[1], where + "[1]", n);
    self->leq_[i][j] = true;
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!self->leq_[i][i])
      fail("leq", "missing reflexive pair (" + std::to_string(i) + "," + std::to_string(i) + ")");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && self->leq_[i][j] && self->leq_[j][i])
        fail("leq", "antisymmetry violated by (" + std::to_string(i) + "," + std::to_string(j) +
                        ") and (" + std::to_string(j) + "," + std::to_string(i) + ")");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (!self->leq_[i][j]) continue;
      for (std::size_t k = 0; k < n; ++k)
        if (self->leq_[j][k] && !self->leq_[i][k])
          fail("leq", "transitivity violated: (" + std::to_string(i) + "," + std::to_string(j) +
                          ") and (" + std::to_string(j) + "," + std::to_string(k) + ") but not (" +
                          std::to_string(i) + "," + std::to_string(k) + ")");
    }

  return self;
}

int TableEvs::at(const Element& x, const char* role) const {
  auto it = index_.find(x);
  if (it == index_.end())
    throw InputError(name_ + ": " + role + " " + x.to_string() + " is not a carrier element");
  return it->second;
}

Element TableEvs::add(const Element& x, const Element& y) const {
  return labels_[add_[at(x, "left addend")][at(y, "right addend")]];
}

Element TableEvs::scale(const Scalar& a, const Element& x) const {
  auto it = action_.find(a);
  if (it == action_.end())
    throw InputError(name_ + ": scalar " + a.to_string() + " is not in the declared action set");
  return labels_[it->second[at(x, "scaled element")]];
}

bool TableEvs::leq(const Element& x, const Element& y) const {
  return leq_[at(x, "order left")][at(y, "order right")];
}

std::vector<Scalar> TableEvs::scalar_set() const {
  std::vector<Scalar> out;
  for (const auto& [a, col] : action_) out.push_back(a);
  return out;
}

nlohmann::json TableEvs::to_json() const { return export_table(*this); }

nlohmann::json export_table(const Evs& X) {
  const auto& xs = X.carrier();
  std::size_t n = xs.size();
  auto pos = [&](const Element& e) {
    for (std::size_t i = 0; i < n; ++i)
      if (xs[i] == e) return static_cast<int>(i);
    throw DomainError(X.describe() + ": operation result " + e.to_string() +
                      " escapes the carrier");
  };

  nlohmann::json doc;
  doc["name"] = X.describe();
  doc["field"] = X.field().kind == Field::Kind::gf
                     ? nlohmann::json{{"kind", "gf"}, {"p", X.field().p}}
                     : nlohmann::json{{"kind", "rational"}};
  bool abstract = std::all_of(xs.begin(), xs.end(),
                              [](const Element& e) { return e.is_index(); });
  if (abstract) {
    doc["elements"] = n;
  } else {
    nlohmann::json arr = nlohmann::json::array();
    for (const Element& e : xs) arr.push_back(e.to_json());
    doc["elements"] = arr;
  }
  doc["zero"] = pos(X.zero());

  nlohmann::json add = nlohmann::json::array();
  for (const Element& x : xs) {
    nlohmann::json row = nlohmann::json::array();
    for (const Element& y : xs) row.push_back(pos(X.add(x, y)));
    add.push_back(row);
  }
  doc["add"] = add;

  nlohmann::json scalar = nlohmann::json::array();
  for (const Scalar& a : X.scalar_set())
    for (std::size_t i = 0; i < n; ++i)
      scalar.push_back({a.to_json(), i, pos(X.scale(a, xs[i]))});
  doc["scalar"] = scalar;

  nlohmann::json leq = nlohmann::json::array();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (X.leq(xs[i], xs[j])) leq.push_back({i, j});
  doc["leq"] = leq;
  return doc;
}

}  // namespace evs
