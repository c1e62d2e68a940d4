#pragma once

#include <stdexcept>
#include <string>

namespace sps {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Violated precondition (bad exponent, empty window, zero mass, ...).
class InvalidArgument : public Error {
public:
  using Error::Error;
};

// A rescaled field would lose more than the allowed relative mass past the
// domain edge.
class SupportOverflow : public Error {
public:
  using Error::Error;
};

// Non-finite intermediate values; carries context about where they appeared.
class NumericalFailure : public Error {
public:
  using Error::Error;
};

} // namespace sps
