#pragma once

#include <stdexcept>
#include <string>

namespace specop {

// Malformed input files: unreadable CSV cells, ragged rows, bad headers.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Structurally valid inputs that the implementation does not cover,
// e.g. samples of unequal length or curves observed on different grids.
class ScopeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A call violated a documented precondition (b <= 0, even basis count, ...).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The studentizer collapsed: the pooled spectrum is numerically zero, so no
// finite test statistic exists.
class DegenerateStatisticError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace specop
