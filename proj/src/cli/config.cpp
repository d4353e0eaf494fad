#include <cstdlib>
#include <fstream>
#include <sstream>

#include "hlab/cli.hpp"

namespace hlab::cli {

namespace {

using Keys = std::map<std::string, KeySpec>;

KeySpec nat(std::string fallback, std::string help) { return {KeyKind::natural, std::move(fallback), std::move(help)}; }
KeySpec txt(std::string fallback, std::string help) { return {KeyKind::text, std::move(fallback), std::move(help)}; }
KeySpec flg(std::string help) { return {KeyKind::flag, "false", std::move(help)}; }

Keys with_common(Keys keys) {
  keys.emplace("seed", nat("0", "seed for every random choice"));
  keys.emplace("threads", nat("1", "worker cap; results do not depend on it"));
  keys.emplace("out", txt("", "output directory"));
  keys.emplace("verify", flg("re-check emitted artifacts"));
  return keys;
}

std::map<std::string, Keys> build() {
  std::map<std::string, Keys> c;
  c["ramsey"] = with_common({{"n", nat("1", "dimension n")},
                             {"k", nat("1", "number of colors")},
                             {"budget", nat("20000000", "search node budget")}});
  c["difference-check"] = with_common({{"n", nat("1", "dimension n")},
                                       {"M", nat("8", "arena size")},
                                       {"mode", txt("identity", "identity or seeded")}});
  c["product-bound"] = with_common({{"n", nat("1", "dimension n")},
                                    {"k", nat("1", "color bound")},
                                    {"M", nat("10", "arena size")},
                                    {"mode", txt("identity", "identity or seeded")},
                                    {"size", nat("6", "size of each A_i")},
                                    {"universe", nat("10", "A_i are drawn from {0..universe-1}")},
                                    {"trials", nat("0", "seeded tuples of sets; 0 means exhaustive")}});
  c["ph-refute"] = with_common({{"n", nat("1", "dimension n")},
                                {"M", nat("64", "arena size")},
                                {"mode", txt("identity", "identity or seeded")},
                                {"fn", txt("random-strict", "max-plus-length or random-strict")},
                                {"domain", nat("48", "entries of sigma tuples lie below this")},
                                {"gmax", nat("4", "largest random increment")}});
  c["delta-verify"] = with_common({{"input", txt("", "family JSON; empty uses --family")},
                                   {"family", txt("identity", "identity or min-singleton")},
                                   {"n", nat("2", "dimension n")},
                                   {"H", nat("6", "index set {0..H-1}")}});
  c["delta-extract"] = with_common({{"input", txt("", "family JSON with optional g; empty plants one")},
                                    {"total", nat("200", "planted instance: indices")},
                                    {"planted", nat("12", "planted instance: planted indices")},
                                    {"noise", nat("200", "planted instance: noise range, at least total")},
                                    {"h", nat("6", "target size of H'")},
                                    {"budget", nat("50000000", "search node budget")}});
  c["force-pipeline"] = with_common({{"d", nat("1", "dimension d")},
                                     {"k", nat("2", "branching")},
                                     {"depth-oracle", nat("2", "oracle depth")},
                                     {"density", nat("3", "density depth")},
                                     {"branches", nat("8", "branches per coordinate")},
                                     {"buffer", nat("4", "gap size factor")},
                                     {"theta0", nat("64", "initial index bound")},
                                     {"theta-cap", nat("16384", "largest index bound")},
                                     {"tree-depth", nat("10", "tree depth")},
                                     {"colors", nat("2", "oracle colors")},
                                     {"oracle", txt("seeded", "seeded, constant or first-letter")},
                                     {"oracle-file", txt("", "oracle JSON overriding --oracle")},
                                     {"budget", nat("50000000", "extraction node budget")},
                                     {"check", txt("", "validate this grid witness JSON instead of running")}});
  Keys coloring{{"coloring", txt("constant", "constant, level-parity, seeded, planted or adversarial")},
                {"coloring-file", txt("", "level coloring JSON overriding --coloring")},
                {"d", nat("1", "dimension d")},
                {"k", nat("2", "branching")},
                {"N", nat("8", "tree depth")},
                {"r", nat("2", "colors")},
                {"color", nat("0", "constant or planted color")},
                {"offset", nat("0", "level-parity offset")},
                {"root", txt("", "planted root word for every coordinate")},
                {"density", nat("1", "density depth")}};
  Keys hl = coloring;
  hl.emplace("h", nat("2", "witness height"));
  hl.emplace("grid-file", txt("", "grid witness JSON; empty searches for one"));
  hl.emplace("budget", nat("10000000", "grid search node budget"));
  hl.emplace("check", txt("", "verify this strong subtree witness JSON instead of running"));
  c["hl-derive"] = with_common(hl);
  Keys grid = coloring;
  grid.emplace("min-size", nat("0", "least size of each Y_i"));
  grid.emplace("cap", nat("64", "largest size of each Y_i"));
  grid.emplace("budget", nat("10000000", "search node budget"));
  grid.emplace("check", txt("", "validate this grid witness JSON instead of searching"));
  c["grid-search"] = with_common(grid);
  c["sideways-build"] = with_common({{"k", nat("2", "branching")},
                                     {"N", nat("4", "tree depth")},
                                     {"density", nat("3", "density depth")},
                                     {"J", nat("2", "jmap colors")}});
  c["ddf-check"] = with_common({{"d", nat("2", "dimension d")},
                                {"k", nat("2", "branching")},
                                {"N", nat("2", "tree depth")},
                                {"density", nat("2", "density depth")},
                                {"mcap", nat("2", "fiber intersection cap")},
                                {"fam-cap", nat("2", "cones per coordinate")},
                                {"samples", nat("0", "seeded DDF relations; 0 means every relation")}});
  return c;
}

bool is_natural(const std::string& v) {
  if (v.empty() || v.size() > 19) return false;
  for (char ch : v) {
    if (ch < '0' || ch > '9') return false;
  }
  return true;
}

void set_value(const Keys& keys, const std::string& cmd, std::map<std::string, std::string>& params,
               const std::string& key, const std::string& value) {
  auto it = keys.find(key);
  if (it == keys.end()) throw UsageError("unknown key '" + key + "' for " + cmd);
  switch (it->second.kind) {
    case KeyKind::natural:
      if (!is_natural(value)) throw UsageError("key '" + key + "' needs a natural number, got '" + value + "'");
      break;
    case KeyKind::flag:
      if (value != "true" && value != "false") throw UsageError("key '" + key + "' needs true or false");
      break;
    case KeyKind::text:
      break;
  }
  params[key] = value;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

const std::map<std::string, std::map<std::string, KeySpec>>& commands() {
  static const auto table = build();
  return table;
}

std::uint64_t RunConfig::nat(const std::string& key) const { return std::stoull(params.at(key)); }
const std::string& RunConfig::text(const std::string& key) const { return params.at(key); }
bool RunConfig::flag(const std::string& key) const { return params.at(key) == "true"; }

RunConfig parse_config(const std::vector<std::string>& args) {
  if (args.empty()) throw UsageError("missing subcommand");
  RunConfig cfg;
  cfg.command = args[0];
  auto found = commands().find(cfg.command);
  if (found == commands().end()) throw UsageError("unknown subcommand '" + cfg.command + "'");
  const Keys& keys = found->second;

  std::vector<std::pair<std::string, std::string>> flags;
  std::string config_file;
  for (std::size_t x = 1; x < args.size(); ++x) {
    const std::string& a = args[x];
    if (a.rfind("--", 0) != 0 || a.size() == 2) throw UsageError("unexpected argument '" + a + "'");
    std::string key = a.substr(2), value;
    const auto eq = key.find('=');
    if (eq != std::string::npos) {
      value = key.substr(eq + 1);
      key = key.substr(0, eq);
    } else {
      auto spec = keys.find(key);
      const bool is_flag = spec != keys.end() && spec->second.kind == KeyKind::flag;
      if (is_flag && (x + 1 == args.size() || args[x + 1].rfind("--", 0) == 0)) {
        value = "true";
      } else {
        if (x + 1 == args.size()) throw UsageError("key '" + key + "' needs a value");
        value = args[++x];
      }
    }
    if (key == "config") {
      config_file = value;
    } else {
      flags.emplace_back(key, value);
    }
  }

  for (const auto& [key, spec] : keys) cfg.params[key] = spec.fallback;
  if (!config_file.empty()) {
    std::ifstream in(config_file);
    if (!in) throw UsageError("cannot read config file " + config_file);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) {
        throw UsageError(config_file + ":" + std::to_string(lineno) + ": expected key=value");
      }
      set_value(keys, cfg.command, cfg.params, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
  }
  for (const auto& [key, value] : flags) set_value(keys, cfg.command, cfg.params, key, value);

  cfg.out_dir = cfg.params.at("out");
  if (cfg.out_dir.empty()) {
    const char* env = std::getenv("HLAB_OUT_DIR");
    cfg.out_dir = env && *env ? env : "hlab_out";
  }
  return cfg;
}

std::string usage() {
  std::ostringstream os;
  os << "usage: hlab <subcommand> [--key value ...] [--config FILE]\n\nsubcommands:\n";
  for (const auto& [name, keys] : commands()) {
    os << "  " << name << "\n";
    for (const auto& [key, spec] : keys) {
      os << "    --" << key;
      if (spec.kind != KeyKind::flag) os << " (default '" << spec.fallback << "')";
      os << "  " << spec.help << "\n";
    }
  }
  os << "\nexit status: 0 success, 1 declared failure, 2 budget exhausted, 64 usage error\n";
  return os.str();
}

}  // namespace hlab::cli
