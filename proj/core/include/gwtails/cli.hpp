#pragma once

#include <string>
#include <vector>

namespace gwt::cli {

/// Entry point behind the gwtails binary. args excludes argv[0].
/// Exit codes: 0 success, 2 validation failure, 3 numeric failure,
/// 4 hypothesis violation.
int run(const std::vector<std::string>& args);

}  // namespace gwt::cli
