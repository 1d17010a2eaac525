#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>

namespace ted {

/// Matrix entry: a finite integer or the absorbing sentinel kNegInf.
using Value = std::int32_t;

inline constexpr Value kNegInf = std::numeric_limits<Value>::min();

constexpr bool is_finite(Value v) noexcept { return v != kNegInf; }

/// Addition where -inf absorbs everything.
constexpr Value sat_add(Value a, Value b) noexcept {
  return (a == kNegInf || b == kNegInf) ? kNegInf : a + b;
}

constexpr Value sat_add(Value a, Value b, Value c) noexcept {
  return sat_add(sat_add(a, b), c);
}

}  // namespace ted
