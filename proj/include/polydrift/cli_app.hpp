#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace polydrift {

/// Exit codes, stable for pipeline gating:
///   0 success (score: no strong-relation drift)
///   1 I/O or parse error
///   2 discover: empty strong set under --require-strong
///   3 score: strong-relation drift detected
///   4 score: schema mismatch (no applicable relation)
///   5 invalid flags or simulation spec
namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int io_error = 1;
inline constexpr int no_strong_relations = 2;
inline constexpr int drift_detected = 3;
inline constexpr int schema_mismatch = 4;
inline constexpr int invalid_spec = 5;
}  // namespace exit_code

/// Runs the CLI (subcommands: discover, score, simulate, experiment) on the
/// given arguments, program name excluded. Human-readable summaries go to
/// `out`; machine artifacts only to files.
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace polydrift
