#pragma once

#include <stdexcept>
#include <string>

namespace bianchi {

enum class ErrorKind {
  ZeroIdeal,
  NotSquareFree,
  FactorizationFailed,
  BudgetExceeded,
  DegenerateBisector,
  IncompleteSample,
  NotFiniteVolume,
  BadEdgeCycle,
  InconsistentGluing,
  NotBarycentric,
  NotOrientable,
  UnsupportedD,
  IncompleteTable,
  MalformedShorthand,
  Test1Failed,
  Test2Failed,
  Test3Failed,
  OrderMismatch,
  UsageError,
  ParseError,
};

const char* error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail);
  ErrorKind kind() const { return kind_; }
  const std::string& detail() const { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

}  // namespace bianchi
