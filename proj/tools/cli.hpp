#pragma once

#include <ostream>

namespace cgeom {

/// Entry point of the cgeom tool.  Reports go to out, diagnostics to err.
/// Returns 0 when every check holds, 1 on a detected violation or a failed
/// construction, 2 on usage or input errors.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cgeom
