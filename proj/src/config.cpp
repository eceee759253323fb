#include "heislab/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "heislab/errors.hpp"

namespace heislab {

namespace {

constexpr unsigned kGrid = kAnalyze | kBlowup | kMeasure;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  while (true) {
    const auto p = s.find(',');
    const auto item = trim(s.substr(0, p));
    if (!item.empty()) out.push_back(item);
    if (p == std::string_view::npos) break;
    s.remove_prefix(p + 1);
  }
  return out;
}

template <class T>
T parse_number(std::string_view key, std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  T v{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw InvalidArgument("config key '" + std::string(key) + "': cannot parse '" + std::string(text) + "' as a number");
  }
  return v;
}

}  // namespace

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = {
      {"seed", "1", "random seed; fixed seed gives bit-identical outputs", kAllCommands},
      {"output_dir", ".", "directory for all outputs", kAllCommands},
      {"prefix", "", "output file prefix (default: command name)", kAllCommands},
      {"svg", "false", "also write SVG plots", kAnalyze | kBlowup | kMeasure},
      {"map", "", "gallery map id", kGrid},
      {"input", "", "sampled map file (.csv or .json); measure: point cloud CSV", kGrid},
      {"grid_lo", "", "lower corner of the cube domain (default -1; measure 0)", kGrid},
      {"grid_hi", "", "upper corner of the cube domain (default 1)", kGrid},
      {"grid_count", "", "nodes per axis", kGrid},
      {"grid_counts", "", "nodes per axis as a list; overrides grid_count", kGrid},
      {"rank_tol", "1e-8", "relative singular-value tolerance for numerical rank", kAnalyze | kMeasure},
      {"slice_axes", "1,2", "source axes (1-based) of the blow-up plane when m > 2", kBlowup},
      {"slice_base", "", "0-based base node for slicing (default: middle node)", kBlowup},
      {"center", "0,0", "blow-up centre z", kBlowup},
      {"rho0", "0.1", "largest blow-up scale", kBlowup},
      {"levels", "9", "number of dyadic scales rho0 * 2^-k", kBlowup},
      {"radii", "0.3,0.5,0.7", "circle radii in (0,1)", kBlowup},
      {"nodes", "16384", "circle quadrature nodes", kBlowup},
      {"quad_radial", "128", "polar quadrature radial nodes", kBlowup},
      {"quad_angular", "256", "polar quadrature angular nodes", kBlowup},
      {"cloud", "",
       "point cloud: horizontal-segment, vertical-segment, vertical-plane, single-point, map, file "
       "(default: file with --input, else vertical-plane)",
       kMeasure},
      {"point", "0,0,0", "coordinates for cloud = single-point", kMeasure},
      {"scales", "", "explicit scale list; overrides delta_max/delta_min", kMeasure},
      {"delta_max", "0.125", "coarsest dyadic scale", kMeasure},
      {"delta_min", "0.00390625", "finest dyadic scale", kMeasure},
      {"gauge", "both", "koranyi, euclidean or both", kMeasure},
      {"exponent", "", "content exponent s (default m+1)", kMeasure},
      {"n", "1,2,3", "Heisenberg dimensions for the batteries", kCertify},
      {"trials", "1000", "trials per matrix battery", kCertify},
      {"green_trials", "100", "trials for the circle batteries", kCertify},
      {"corrupt_j", "false", "negative control: perturb J in the pairing battery", kCertify},
  };
  return keys;
}

std::vector<std::string> command_names() { return {"analyze", "blowup", "measure", "certify"}; }

unsigned command_mask(std::string_view command) {
  if (command == "analyze") return kAnalyze;
  if (command == "blowup") return kBlowup;
  if (command == "measure") return kMeasure;
  if (command == "certify") return kCertify;
  throw InvalidArgument("unknown command '" + std::string(command) + "'");
}

ExperimentConfig::ExperimentConfig(std::string command) : command_(std::move(command)) {
  const unsigned mask = command_mask(command_);
  for (const auto& k : config_keys()) {
    if (k.commands & mask) values_[k.key] = k.fallback;
  }
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  auto it = values_.find(key);
  if (it == values_.end()) {
    const bool known = std::any_of(config_keys().begin(), config_keys().end(), [&](const auto& k) { return k.key == key; });
    throw InvalidArgument(known ? "config key '" + key + "' does not apply to command '" + command_ + "'"
                                : "unknown config key '" + key + "'");
  }
  it->second = std::string(trim(value));
}

void ExperimentConfig::apply_text(std::string_view text) {
  int line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto p = text.find('\n');
    std::string_view line = text.substr(0, p);
    text = p == std::string_view::npos ? std::string_view{} : text.substr(p + 1);
    if (const auto h = line.find('#'); h != std::string_view::npos) line = line.substr(0, h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw InvalidArgument("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    set(std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))));
  }
}

bool ExperimentConfig::has(const std::string& key) const {
  auto it = values_.find(key);
  return it != values_.end() && !it->second.empty();
}

std::string ExperimentConfig::str(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw InvalidArgument("config key '" + key + "' does not apply to command '" + command_ + "'");
  return it->second;
}

double ExperimentConfig::real(const std::string& key) const {
  const double v = parse_number<double>(key, str(key));
  if (!std::isfinite(v)) throw InvalidArgument("config key '" + key + "' must be finite");
  return v;
}

double ExperimentConfig::positive(const std::string& key) const {
  const double v = real(key);
  if (!(v > 0.0)) throw InvalidArgument("config key '" + key + "' must be positive");
  return v;
}

long ExperimentConfig::integer(const std::string& key) const { return parse_number<long>(key, str(key)); }

bool ExperimentConfig::flag(const std::string& key) const {
  const std::string v = str(key);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off" || v.empty()) return false;
  throw InvalidArgument("config key '" + key + "': expected true or false, got '" + v + "'");
}

std::uint64_t ExperimentConfig::seed() const { return parse_number<std::uint64_t>("seed", str("seed")); }

std::vector<double> ExperimentConfig::reals(const std::string& key) const {
  std::vector<double> out;
  const std::string s = str(key);
  for (auto item : split_list(s)) out.push_back(parse_number<double>(key, item));
  return out;
}

std::vector<long> ExperimentConfig::integers(const std::string& key) const {
  std::vector<long> out;
  const std::string s = str(key);
  for (auto item : split_list(s)) out.push_back(parse_number<long>(key, item));
  return out;
}

}  // namespace heislab
