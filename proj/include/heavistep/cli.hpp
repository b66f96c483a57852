// Experiment harness behind the heavistep executable.
//
// Exit codes: 0 success, 1 verification failure, 2 usage error,
// 3 divergence abort.

#ifndef HEAVISTEP_CLI_HPP
#define HEAVISTEP_CLI_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace heavistep {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDiverged = 3;

/// Everything needed to re-run a subcommand: the argument vector replays it,
/// the remaining fields document it.
struct RunManifest {
  std::string subcommand;
  std::vector<std::string> argv;  // starting with the subcommand name
  std::map<std::string, std::string> flags;  // every option, defaults included
  std::map<std::string, std::uint64_t> seeds;
  std::vector<std::string> artifacts;
  double wall_clock_seconds = 0.0;
  std::string started_utc;
  std::string version;
  std::size_t workers = 1;
  int exit_code = 0;
  std::string status;  // "ok", "verification failed", "diverged: <reason>"
};

std::string manifest_to_json(const RunManifest& m);
RunManifest manifest_from_json(const std::string& text);
void save_manifest(const std::filesystem::path& path, const RunManifest& m);
RunManifest load_manifest(const std::filesystem::path& path);

/// Runs one subcommand. args excludes the program name.
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace heavistep

#endif  // HEAVISTEP_CLI_HPP
