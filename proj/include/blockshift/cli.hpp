#pragma once

#include <ostream>
#include <string>

#include "blockshift/core_words.hpp"
#include "blockshift/realization.hpp"
#include "blockshift/sparse_sets.hpp"

namespace blockshift {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitVerifyFailed = 1, kExitUsage = 2, kExitDensity = 3 };

/// "mu-indicator", "mu-sign" (sieved far enough to cover S ∩ window) or "file:PATH"
/// (one symbol per character, whitespace ignored, '#' starts a comment line).
TargetSequence make_target(const std::string& spec, const Alphabet& alphabet, const SparseSetSpec& s,
                           Interval window);

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace blockshift
