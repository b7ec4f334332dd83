#pragma once

#include <gtest/gtest.h>

#include "tmotive/context.hpp"

namespace tmotive::test {

inline const Context& ctx3() {
  static const Context c = Context::make(3, 1);
  return c;
}

inline FFElem el(const Context& c, std::int64_t n) { return FFElem::from_int(c.field, n); }

template <class F>
ErrorKind error_kind(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind{};
}

}  // namespace tmotive::test
