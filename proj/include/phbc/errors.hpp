// Copyright (c) 2026 The phbc authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace phbc
{

// All library errors derive from Error so callers can catch one type.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

#define PHBC_DEFINE_ERROR(Name)                                                          \
  class Name : public Error                                                              \
  {                                                                                      \
  public:                                                                                \
    explicit Name(const std::string &what) : Error(#Name ": " + what) {}                 \
  }

PHBC_DEFINE_ERROR(DimensionMismatch);
PHBC_DEFINE_ERROR(NotSkew);
PHBC_DEFINE_ERROR(NotSymmetric);
PHBC_DEFINE_ERROR(InvalidGrid);
PHBC_DEFINE_ERROR(SplitMismatch);
PHBC_DEFINE_ERROR(Singular);
PHBC_DEFINE_ERROR(InfiniteNorm);
PHBC_DEFINE_ERROR(NotSPD);
PHBC_DEFINE_ERROR(NotDissipative);
PHBC_DEFINE_ERROR(ClampViolated);
PHBC_DEFINE_ERROR(SolveFailure);
PHBC_DEFINE_ERROR(SaddleSingular);
PHBC_DEFINE_ERROR(ConfigError);

#undef PHBC_DEFINE_ERROR

}  // namespace phbc
