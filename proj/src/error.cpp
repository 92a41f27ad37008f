#include "structemb/error.hpp"

namespace structemb {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::UnbalancedParens: return "UnbalancedParens";
    case ErrorCode::UnexpectedToken: return "UnexpectedToken";
    case ErrorCode::DuplicateVariable: return "DuplicateVariable";
    case ErrorCode::UndeclaredVariable: return "UndeclaredVariable";
    case ErrorCode::Unreadable: return "Unreadable";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::EmptyTable: return "EmptyTable";
    case ErrorCode::ZeroNorm: return "ZeroNorm";
    case ErrorCode::PartitionOverflow: return "PartitionOverflow";
    case ErrorCode::UnsupportedAspect: return "UnsupportedAspect";
    case ErrorCode::InsufficientPairs: return "InsufficientPairs";
    case ErrorCode::InsufficientPositives: return "InsufficientPositives";
    case ErrorCode::MalformedRecord: return "MalformedRecord";
    case ErrorCode::BadFormat: return "BadFormat";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::Degenerate: return "Degenerate";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::SingleClass: return "SingleClass";
    case ErrorCode::NonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::EmptyData: return "EmptyData";
    case ErrorCode::BadConfig: return "BadConfig";
  }
  return "Unknown";
}

}  // namespace structemb
