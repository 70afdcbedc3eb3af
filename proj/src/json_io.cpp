#include "permfix/json_io.hpp"

#include <limits>
#include <stdexcept>

namespace permfix {

nlohmann::json integer_to_json(const Integer& v) {
  static const Integer lo = std::numeric_limits<std::int64_t>::min();
  static const Integer hi = std::numeric_limits<std::int64_t>::max();
  if (v >= lo && v <= hi) return v.convert_to<std::int64_t>();
  return v.str();
}

Integer integer_from_json(const nlohmann::json& j) {
  if (j.is_number_integer()) return Integer(j.get<std::int64_t>());
  if (j.is_string()) return Integer(j.get<std::string>());
  throw std::invalid_argument("expected integer or decimal string, got " + j.dump());
}

}  // namespace permfix
