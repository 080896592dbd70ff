#pragma once

#include <iosfwd>

namespace fairwork::cli {

/// Exit codes: 0 success, 1 domain error (JSON object on err), 2 usage error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fairwork::cli
