#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kdep::cli {

/// Version of the JSON output layout; schemas/kdepcol-output.schema.json
/// describes it.
inline constexpr const char* kOutputVersion = "1.0.0";

enum ExitCode { kPass = 0, kFail = 1, kUsage = 2 };

/// Runs one command. args excludes the program name. Output goes to `out`
/// unless --out is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kdep::cli
