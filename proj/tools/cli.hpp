#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace novtel::cli {

/// Runs one batch job. Returns the process exit code: 0 success, 1 validation
/// failure, 2 unsupported input, 3 resource cap. Reports go to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace novtel::cli
