#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qkr/ensemble.hpp"

namespace qkr {

/// Builds a RunConfig from a flat `key = value` file (lines, `#` comments)
/// and command-line tokens (`--key value` or `--key=value`; `-` and `_` are
/// interchangeable in keys). Tokens override file values.
///
/// Recognised keys: kappa (required), kappa2, tau, kicks, schedule, jitter,
/// ratio, seed, trajectories, basis, models, propagator, tail_tolerance,
/// edge_tolerance, track_residual, threads, output, plots.
///
/// Throws ConfigError naming the offending key for unknown keys, malformed
/// values and constraint violations.
RunConfig parse_config(const std::vector<std::string>& args,
                       const std::optional<std::string>& file = std::nullopt);

/// Raw key/value pairs of a config file, keys normalised to underscores.
std::map<std::string, std::string> parse_key_values(const std::string& text);

}  // namespace qkr
