#ifndef PQGRAPH_CLI_HPP
#define PQGRAPH_CLI_HPP

namespace pqgraph::cli {

/// Full command-line front end. Returns the process exit status:
///   0 success, 1 validation failure, 2 solver stall, 3 I/O, parse or usage
/// error. Exposed as a function so tests can drive it in-process.
int run(int argc, const char* const* argv);

}  // namespace pqgraph::cli

#endif
