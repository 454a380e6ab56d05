#pragma once

#include <doctest.h>

#include "error.hpp"
#include "numerics.hpp"

// Asserts that `expr` throws qrealize::Error with the given code.
#define CHECK_ERROR_CODE(expr, expected)                                   \
  do {                                                                     \
    bool thrown_ = false;                                                  \
    try {                                                                  \
      (void)(expr);                                                        \
    } catch (const qrealize::Error& e_) {                                  \
      thrown_ = true;                                                      \
      CHECK_MESSAGE(e_.code() == (expected), qrealize::to_string(e_.code())); \
    }                                                                      \
    CHECK_MESSAGE(thrown_, "expected an exception from " #expr);          \
  } while (0)

inline double rel_err(const qrealize::RealMatrix& got, const qrealize::RealMatrix& want) {
  return (got - want).norm() / std::max(1.0, want.norm());
}
