#include "bratteli/error.hpp"

namespace bratteli {

std::string_view error_name(ErrorCode code) {
  switch (code) {
  case ErrorCode::ShapeMismatch: return "ShapeMismatch";
  case ErrorCode::ZeroRowOrColumn: return "ZeroRowOrColumn";
  case ErrorCode::EmptyRootLevel: return "EmptyRootLevel";
  case ErrorCode::DepthExceeded: return "DepthExceeded";
  case ErrorCode::InvalidCuts: return "InvalidCuts";
  case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
  case ErrorCode::NoPairableEdges: return "NoPairableEdges";
  case ErrorCode::BundlesTooSmall: return "BundlesTooSmall";
  case ErrorCode::ConsistencyViolation: return "ConsistencyViolation";
  case ErrorCode::NotNormalized: return "NotNormalized";
  case ErrorCode::NotPrimitive: return "NotPrimitive";
  case ErrorCode::NotSymmetric: return "NotSymmetric";
  case ErrorCode::ToleranceAmbiguous: return "ToleranceAmbiguous";
  case ErrorCode::UnreachableTarget: return "UnreachableTarget";
  case ErrorCode::ArgumentOutOfRange: return "ArgumentOutOfRange";
  case ErrorCode::WrongDiagram: return "WrongDiagram";
  case ErrorCode::PathSpaceTooLarge: return "PathSpaceTooLarge";
  case ErrorCode::Overflow: return "Overflow";
  case ErrorCode::ParseError: return "ParseError";
  case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

} // namespace bratteli
