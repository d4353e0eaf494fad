#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace hlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitBudget = 2;
inline constexpr int kExitUsage = 64;

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class KeyKind { natural, text, flag };

struct KeySpec {
  KeyKind kind;
  std::string fallback;
  std::string help;
};

struct RunConfig {
  std::string command;
  /// Every key the command accepts, defaults filled in.
  std::map<std::string, std::string> params;
  std::string out_dir;

  std::uint64_t nat(const std::string& key) const;
  const std::string& text(const std::string& key) const;
  bool flag(const std::string& key) const;
};

/// Known subcommands with their keys (common keys included).
const std::map<std::string, std::map<std::string, KeySpec>>& commands();

/// argv[1] names the subcommand; `--key value`, `--key=value` and bare
/// `--flag` follow. `--config FILE` reads key=value lines ('#' comments)
/// first; flags override file values. Throws UsageError on an unknown
/// command or key, or a malformed value. The output directory comes from
/// --out, then HLAB_OUT_DIR, then "hlab_out".
RunConfig parse_config(const std::vector<std::string>& args);

/// Runs the command, writes <out>/<command>.json and <out>/<command>.csv and
/// prints a summary to `out`. Returns the exit status.
int dispatch(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// parse_config + dispatch with usage errors mapped to exit status 64.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

std::string usage();

}  // namespace hlab::cli
