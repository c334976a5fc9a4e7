#pragma once

namespace rubricbench::cli {

// Exit status: 0 success, 1 validation or usage error, 2 transport or
// system error.
int run(int argc, const char* const* argv);

}  // namespace rubricbench::cli
