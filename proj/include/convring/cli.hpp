#pragma once

#include <iosfwd>

namespace convring {

/// Exit codes: 0 success, 1 decode Invalid or a failed search/generation,
/// 2 usage or parse error.
int cli_main(int argc, char** argv);
int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace convring
