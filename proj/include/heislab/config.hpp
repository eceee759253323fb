#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace heislab {

enum CommandMask : unsigned {
  kAnalyze = 1u,
  kBlowup = 2u,
  kMeasure = 4u,
  kCertify = 8u,
  kAllCommands = 15u,
};

struct ConfigKey {
  std::string key;
  std::string fallback;  // empty: command-dependent default chosen at run time
  std::string help;
  unsigned commands = 0;
};

const std::vector<ConfigKey>& config_keys();
std::vector<std::string> command_names();
unsigned command_mask(std::string_view command);

/// Flat key/value experiment description. Every key is validated against
/// the table for its command, so a typo is an error rather than a default.
class ExperimentConfig {
 public:
  explicit ExperimentConfig(std::string command);

  const std::string& command() const { return command_; }
  const std::map<std::string, std::string>& values() const { return values_; }

  void set(const std::string& key, const std::string& value);
  /// `key = value` lines; `#` starts a comment.
  void apply_text(std::string_view text);

  bool has(const std::string& key) const;  // non-empty value
  std::string str(const std::string& key) const;
  double real(const std::string& key) const;
  double positive(const std::string& key) const;
  long integer(const std::string& key) const;
  bool flag(const std::string& key) const;
  std::uint64_t seed() const;
  std::vector<double> reals(const std::string& key) const;
  std::vector<long> integers(const std::string& key) const;

 private:
  std::string command_;
  std::map<std::string, std::string> values_;
};

}  // namespace heislab
