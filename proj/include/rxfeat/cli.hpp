#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rxfeat {

inline constexpr const char* kToolVersion = "rxfeat 0.1.0";

/// Exit codes: 0 success, 1 usage error, 2 data error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Runs one command line (without the program name). Logs go to err;
/// data goes only to files.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rxfeat
