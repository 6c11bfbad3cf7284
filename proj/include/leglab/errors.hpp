#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace leglab {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : Error {
  std::size_t offset;
  ParseError(const std::string& msg, std::size_t off)
      : Error(msg + " at offset " + std::to_string(off)), offset(off) {}
};

struct UnknownVariable : Error {
  using Error::Error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

// A sampler or search ran out of its retry budget.
struct BudgetExhausted : Error {
  using Error::Error;
};

// Input violates an operation's precondition (base point, singular point,
// point outside a chart, parameter out of range, ...).
struct PreconditionError : Error {
  using Error::Error;
};

}  // namespace leglab
