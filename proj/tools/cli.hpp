#pragma once

#include <ostream>

namespace fiducial::cli {

/// Exit codes: 0 success / FD exists, 2 no FD, 1 error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fiducial::cli
