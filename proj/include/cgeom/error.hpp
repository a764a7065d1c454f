#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cgeom {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  RankDeficient,
  Unbounded,
  Infeasible,
  Empty,
  OriginNotInterior,
  NonFinite,
  NoConvergence,
  NotIsotropic,
  NotCentered,
  NotEven,
  DecompositionFailed,
  ParseError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so the
/// command-line front end can map it to an exit status and a machine-readable
/// error object.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cgeom
