#pragma once

#include <span>
#include <string>
#include <vector>

#include "qkr/diagnostics.hpp"
#include "qkr/ensemble.hpp"

namespace qkr {

inline constexpr const char* kTimeseriesHeader =
    "kick,model,energy,markov_energy_cum,interference_energy_cum,entropy,participation,"
    "second_moment";

/// 17 significant digits; parses back to the same double.
std::string format_double(double v);

/// "# qkr <version> config_hash=<hex> seed=<n>" plus a label line.
std::string provenance_header(const EnsembleResult& result);

/// One row per (kick, model), sorted by kick then model name.
/// Throws IoError if the file cannot be written.
void emit_timeseries(const EnsembleResult& result, const std::string& path);

/// Columns k,<model>... holding the final trajectory-mean P_k.
void emit_distribution(const EnsembleResult& result, const std::string& path);

/// key = value lines for the localisation fit and the run checks.
void emit_fit_summary(const EnsembleResult& result, const std::string& path);
void emit_fit_summary(const LocalizationFit& fit, const std::string& header,
                      const std::string& path);

/// <prefix>_energy.svg from the first result and <prefix>_entropy.svg with
/// one curve per result. Throws DomainError, writing nothing, when there is
/// nothing to plot.
void emit_plots(std::span<const EnsembleResult> results, const std::string& path_prefix);
void emit_plots(const EnsembleResult& result, const std::string& path_prefix);

struct TimeseriesRow {
  int kick = 0;
  std::string model;
  DiagnosticsRecord record;
};

/// Skips `#` comment lines; throws IoError on a missing file or a malformed
/// header or row.
std::vector<TimeseriesRow> read_timeseries(const std::string& path);

/// Reads one model column of a distribution CSV written by emit_distribution.
Distribution read_distribution(const std::string& path, const std::string& model = "quantum");

}  // namespace qkr
