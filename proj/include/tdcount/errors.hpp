#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tdc {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OverflowError : Error {
  using Error::Error;
};

// Duplication choice outside the current word.
struct IndexOutOfRange : Error {
  using Error::Error;
};

struct ParseError : Error {
  ParseError(const std::string& what, std::size_t pos);
  std::size_t position;
};

struct ValidationError : Error {
  using Error::Error;
};

// An enumeration or memory guard tripped.
struct BudgetExceeded : Error {
  using Error::Error;
};

struct CycleDetected : Error {
  using Error::Error;
};

struct StructureViolation : Error {
  using Error::Error;
};

struct MalformedGraph : Error {
  using Error::Error;
};

struct InvalidChoice : Error {
  using Error::Error;
};

struct NotAnInducedPair : Error {
  using Error::Error;
};

struct InvalidNodeset : Error {
  using Error::Error;
};

struct InvalidSubtree : Error {
  using Error::Error;
};

}  // namespace tdc
