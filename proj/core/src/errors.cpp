#include "bianchi/errors.hpp"

namespace bianchi {

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ZeroIdeal: return "ZeroIdeal";
    case ErrorKind::NotSquareFree: return "NotSquareFree";
    case ErrorKind::FactorizationFailed: return "FactorizationFailed";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::DegenerateBisector: return "DegenerateBisector";
    case ErrorKind::IncompleteSample: return "IncompleteSample";
    case ErrorKind::NotFiniteVolume: return "NotFiniteVolume";
    case ErrorKind::BadEdgeCycle: return "BadEdgeCycle";
    case ErrorKind::InconsistentGluing: return "InconsistentGluing";
    case ErrorKind::NotBarycentric: return "NotBarycentric";
    case ErrorKind::NotOrientable: return "NotOrientable";
    case ErrorKind::UnsupportedD: return "UnsupportedD";
    case ErrorKind::IncompleteTable: return "IncompleteTable";
    case ErrorKind::MalformedShorthand: return "MalformedShorthand";
    case ErrorKind::Test1Failed: return "Test1Failed";
    case ErrorKind::Test2Failed: return "Test2Failed";
    case ErrorKind::Test3Failed: return "Test3Failed";
    case ErrorKind::OrderMismatch: return "OrderMismatch";
    case ErrorKind::UsageError: return "UsageError";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& detail)
    : std::runtime_error(std::string(error_kind_name(kind)) + ": " + detail),
      kind_(kind),
      detail_(detail) {}

}  // namespace bianchi
