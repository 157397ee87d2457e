#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace slicer::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRejected = 1;  // denied, invalid, rejected, infeasible
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInternal = 3;

inline constexpr const char* kCatalogEnv = "SLICER_CATALOG";

struct CommandResult {
  int exit_code = kExitOk;
  std::string out;  // human summary, or the detail document under --json
  std::string err;
  nlohmann::json detail;
};

// argv without the program name.
CommandResult run(const std::vector<std::string>& args);

}  // namespace slicer::cli
