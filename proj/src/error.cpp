#include "cgeom/error.hpp"

namespace cgeom {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::Unbounded: return "Unbounded";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::Empty: return "Empty";
    case ErrorCode::OriginNotInterior: return "OriginNotInterior";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NotIsotropic: return "NotIsotropic";
    case ErrorCode::NotCentered: return "NotCentered";
    case ErrorCode::NotEven: return "NotEven";
    case ErrorCode::DecompositionFailed: return "DecompositionFailed";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace cgeom
