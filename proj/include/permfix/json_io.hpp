#pragma once

#include "permfix/numeric.hpp"

#include <json.hpp>

namespace permfix {

/// Integers that fit in int64 are written as JSON numbers, larger ones as
/// decimal strings. Readers accept both forms.
nlohmann::json integer_to_json(const Integer& v);
Integer integer_from_json(const nlohmann::json& j);

}  // namespace permfix
