#pragma once

#include <iosfwd>

namespace decompound::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;  // runtime or data errors
inline constexpr int kUsage = 2;    // bad flags, missing input files

// Entry point shared by the `decompound` executable and the tests.
// Subcommands: partition, train, split, eval, curve, gen-synth, build-lexicon.
int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace decompound::cli
