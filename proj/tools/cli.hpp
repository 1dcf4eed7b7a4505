#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace gw::cli {

inline constexpr const char* kVersion = "1.0.0";

enum ExitCode : int { kOk = 0, kUsage = 1, kIo = 2, kData = 3 };

/// Runs one command. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// FNV-1a over the arguments joined by NUL bytes.
std::uint64_t config_hash(const std::vector<std::string>& args);

}  // namespace gw::cli
