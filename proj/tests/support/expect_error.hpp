#pragma once

#include <gtest/gtest.h>

#include "schmidt_forge/error.hpp"

// Asserts that `stmt` throws schmidt_forge::Error of the given kind.
#define EXPECT_SF_ERROR(stmt, expected_kind)                                         \
  do {                                                                               \
    try {                                                                            \
      (void)(stmt);                                                                  \
      ADD_FAILURE() << #stmt " did not throw";                                       \
    } catch (const ::schmidt_forge::Error& e_) {                                     \
      EXPECT_EQ(e_.name(), ::schmidt_forge::error_name(expected_kind)) << e_.what(); \
    }                                                                                \
  } while (0)
