#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace spanmine {

/// Entry point of the `spanmine` command: index, search, eval, train-toy, synth, bm25.
/// Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Same, with argv[0] supplied.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace spanmine
