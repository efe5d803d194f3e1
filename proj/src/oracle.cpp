#include "evs/oracle.hpp"

#include <nlohmann/json.hpp>

namespace evs {

nlohmann::json DimensionDescriptor::to_json() const {
  if (no_basis) return nlohmann::json{{"no_basis", true}};
  nlohmann::json j{{"no_basis", false}};
  auto put = [&](const char* key, const ExtendedCardinal& c) {
    if (c.kind == ExtendedCardinal::Kind::continuum)
      j[key] = "c";
    else
      j[key] = c.value;
  };
  put("evs_part", evs_part);
  put("primitive_part", primitive_part);
  return j;
}

}  // namespace evs
