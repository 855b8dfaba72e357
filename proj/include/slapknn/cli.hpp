#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace slapknn {

/// Entry point of the `slapknn` tool. Subcommands: construct, classify, raster,
/// verify, sweep-k, circles. Returns the process exit status.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Convenience overload; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace slapknn
