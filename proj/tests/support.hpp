#pragma once

#include <gtest/gtest.h>

#include "teich/error.hpp"

#define EXPECT_CODE(stmt, expected)                                                   \
  do {                                                                               \
    try {                                                                            \
      stmt;                                                                          \
      ADD_FAILURE() << "no exception from " #stmt;                                   \
    } catch (const teich::Error& e) {                                                \
      EXPECT_EQ(e.code(), expected) << e.what();                                     \
    }                                                                                \
  } while (0)
