#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace orthotile::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 64;

// args excludes the program name. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace orthotile::cli
