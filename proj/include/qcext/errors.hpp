#pragma once

#include <stdexcept>
#include <string>

namespace qcext {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class MixedContextError : public Error {
 public:
  using Error::Error;
};

class CapExceeded : public Error {
 public:
  using Error::Error;
};

// A search ran out of budget. Distinct from a proven infinite distance.
class BudgetExhausted : public Error {
 public:
  using Error::Error;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

// An internal check that the mathematics promises to hold has failed.
class CheckFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace qcext
