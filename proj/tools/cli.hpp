#pragma once

#include <string>
#include <vector>

namespace gromovlab::cli {

/// Exit codes: 0 success, 1 usage or data error, 2 a verification check
/// failed (reports are still written).
int run(const std::vector<std::string>& args);

}  // namespace gromovlab::cli
