#include "qkr/config.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <set>
#include <sstream>

#include "qkr/error.hpp"

namespace qkr {
namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "kappa",  "kappa2",     "tau",        "kicks",          "schedule",
      "jitter", "ratio",      "seed",       "trajectories",   "basis",
      "models", "propagator", "tail_tolerance", "edge_tolerance", "track_residual",
      "threads", "output",    "plots"};
  return keys;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string normalise_key(std::string key) {
  std::replace(key.begin(), key.end(), '-', '_');
  if (!known_keys().contains(key)) throw ConfigError(key, "unknown key");
  return key;
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) throw ConfigError(key, "expected a number, got '" + v + "'");
  return out;
}

long long to_integer(const std::string& key, const std::string& v) {
  long long out = 0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(key, "expected an integer, got '" + v + "'");
  }
  return out;
}

int to_int(const std::string& key, const std::string& v) {
  const long long x = to_integer(key, v);
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
    throw ConfigError(key, "integer out of range");
  }
  return static_cast<int>(x);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(key, "expected true/false, got '" + v + "'");
}

ModelFlags to_models(const std::string& key, const std::string& v) {
  ModelFlags flags{false, false, false};
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item == "quantum") flags.quantum = true;
    else if (item == "markov") flags.markov = true;
    else if (item == "diffusion") flags.diffusion = true;
    else throw ConfigError(key, "unknown model '" + item + "'");
  }
  return flags;
}

}  // namespace

std::map<std::string, std::string> parse_key_values(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no), "expected 'key = value'");
    }
    const std::string key = normalise_key(trim(line.substr(0, eq)));
    if (out.contains(key)) throw ConfigError(key, "given twice in config file");
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

RunConfig parse_config(const std::vector<std::string>& args,
                       const std::optional<std::string>& file) {
  std::map<std::string, std::string> values;
  if (file) values = parse_key_values(*file);

  // A leading subcommand word is accepted and ignored.
  const std::size_t first = (!args.empty() && (args[0] == "run" || args[0] == "compare")) ? 1 : 0;
  for (std::size_t i = first; i < args.size(); ++i) {
    const std::string& tok = args[i];
    if (tok.rfind("--", 0) != 0) throw ConfigError(tok, "expected --key");
    std::string key = tok.substr(2);
    std::string value;
    if (const auto eq = key.find('='); eq != std::string::npos) {
      value = key.substr(eq + 1);
      key = key.substr(0, eq);
    } else {
      if (i + 1 >= args.size()) throw ConfigError(normalise_key(key), "missing value");
      value = args[++i];
    }
    values[normalise_key(key)] = trim(value);
  }

  auto get = [&](const char* key) -> const std::string* {
    auto it = values.find(key);
    return it == values.end() ? nullptr : &it->second;
  };

  RunConfig c;
  const std::string* kappa = get("kappa");
  if (!kappa) throw ConfigError("kappa", "required");
  c.kappa = to_double("kappa", *kappa);
  if (auto v = get("kappa2")) c.kappa2 = to_double("kappa2", *v);
  if (auto v = get("tau")) c.tau = to_double("tau", *v);
  if (auto v = get("kicks")) c.kicks = to_int("kicks", *v);
  if (auto v = get("schedule")) {
    try {
      c.schedule.kind = parse_schedule_kind(*v);
    } catch (const DomainError& e) {
      throw ConfigError("schedule", e.what());
    }
  }
  if (auto v = get("jitter")) c.schedule.jitter = to_double("jitter", *v);
  if (auto v = get("ratio")) c.schedule.ratio = to_double("ratio", *v);
  if (auto v = get("seed")) {
    const long long s = to_integer("seed", *v);
    if (s < 0) throw ConfigError("seed", "must be >= 0");
    c.seed = static_cast<std::uint64_t>(s);
  }
  if (auto v = get("models")) c.models = to_models("models", *v);
  if (auto v = get("propagator")) {
    if (*v == "banded") c.propagator = PropagatorKind::banded;
    else if (*v == "spectral") c.propagator = PropagatorKind::spectral;
    else throw ConfigError("propagator", "expected banded or spectral, got '" + *v + "'");
  }
  if (auto v = get("tail_tolerance")) c.tail_tolerance = to_double("tail_tolerance", *v);
  if (auto v = get("edge_tolerance")) c.edge_tolerance = to_double("edge_tolerance", *v);
  if (auto v = get("track_residual")) c.track_residual = to_bool("track_residual", *v);
  if (auto v = get("threads")) c.threads = to_int("threads", *v);
  if (auto v = get("output")) {
    if (v->empty()) throw ConfigError("output", "must not be empty");
    c.output_prefix = *v;
  }
  if (auto v = get("plots")) c.plots = to_bool("plots", *v);

  if (!(c.kappa >= 0.0)) throw ConfigError("kappa", "must be >= 0");
  if (c.kappa2 && !(*c.kappa2 >= 0.0)) throw ConfigError("kappa2", "must be >= 0");
  if (auto v = get("basis")) {
    c.basis_halfwidth = to_int("basis", *v);
  } else {
    c.basis_halfwidth = default_basis_halfwidth(std::max(c.kappa, c.second_kappa()));
  }
  if (c.basis_halfwidth < 1) throw ConfigError("basis", "must be >= 1");

  int trajectories = 100;
  if (auto v = get("trajectories")) trajectories = to_int("trajectories", *v);
  if (trajectories < 2 || trajectories % 2 != 0) {
    throw ConfigError("trajectories", "must be an even number >= 2 (+/-k pairs)");
  }
  if (trajectories / 2 > c.basis_halfwidth) {
    throw ConfigError("trajectories", "initial states do not fit in the basis");
  }
  c.initial_set = build_initial_set(trajectories / 2, c.basis_halfwidth);

  validate(c);
  return c;
}

}  // namespace qkr
