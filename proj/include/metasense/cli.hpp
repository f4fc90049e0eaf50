#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace metasense::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Seed used by stochastic subcommands when --seed is absent.
inline constexpr const char* kSeedEnvVar = "METASENSE_SEED";

// Entry point shared by the executable and the tests. args[0] is the
// program name. Returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace metasense::cli
