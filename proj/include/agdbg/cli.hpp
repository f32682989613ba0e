// Command-line front end (`agdbg`).
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace agdbg {

enum ExitCode { ExitOk = 0, ExitUserError = 1, ExitDiagnosis = 2 };

/// Runs one command. `args` excludes the program name. The interactive
/// oracle reads answers from `in` and prompts on `out`.
int cli_main(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
             std::ostream& err);

}  // namespace agdbg
