#include "qkr/output.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "qkr/error.hpp"
#include "qkr/svg.hpp"

namespace qkr {
namespace {

std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError("failed writing '" + path + "'");
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s, const std::string& path) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) throw IoError(path + ": bad number '" + s + "'");
  return v;
}

int parse_int(const std::string& s, const std::string& path) {
  int v = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) throw IoError(path + ": bad integer '" + s + "'");
  return v;
}

std::string hex(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

std::string provenance_header(const EnsembleResult& r) {
  std::ostringstream os;
  os << "# qkr " << r.version << " config_hash=" << hex(r.config_hash)
     << " seed=" << r.config.seed << '\n'
     << "# schedule=" << to_string(r.config.schedule.kind) << " kappa=" << format_double(r.config.kappa)
     << " tau=" << format_double(r.config.tau) << " kicks=" << r.config.kicks
     << " trajectories=" << r.trajectories << " basis=" << r.config.basis_halfwidth << '\n';
  return os.str();
}

void emit_timeseries(const EnsembleResult& result, const std::string& path) {
  std::ofstream out = open_for_write(path);
  out << provenance_header(result) << kTimeseriesHeader << '\n';
  for (int n = 0; n < result.config.kicks; ++n) {
    // result.models is already in model-name order.
    for (const auto& m : result.models) {
      const DiagnosticsRecord& r = m.records[n];
      out << r.kick_index << ',' << to_string(m.model) << ',' << format_double(r.energy) << ','
          << format_double(r.markov_energy_cum) << ',' << format_double(r.interference_energy_cum)
          << ',' << format_double(r.entropy) << ',' << format_double(r.participation_number)
          << ',' << format_double(r.second_moment) << '\n';
    }
  }
  finish(out, path);
}

void emit_distribution(const EnsembleResult& result, const std::string& path) {
  std::ofstream out = open_for_write(path);
  out << provenance_header(result) << 'k';
  for (const auto& m : result.models) out << ',' << to_string(m.model);
  out << '\n';
  const int n = result.config.basis_halfwidth;
  for (int k = -n; k <= n; ++k) {
    out << k;
    for (const auto& m : result.models) out << ',' << format_double(m.final_distribution.at(k));
    out << '\n';
  }
  finish(out, path);
}

void emit_fit_summary(const LocalizationFit& fit, const std::string& header,
                      const std::string& path) {
  std::ofstream out = open_for_write(path);
  out << header << "length_estimate = " << format_double(fit.length_estimate) << '\n'
      << "lambda = " << format_double(fit.lambda) << '\n'
      << "log_intercept = " << format_double(fit.log_intercept) << '\n'
      << "fit_quality = " << format_double(fit.fit_quality) << '\n'
      << "window_min = " << fit.window_min << '\n'
      << "window_max = " << fit.window_max << '\n'
      << "points = " << fit.points << '\n';
  finish(out, path);
}

void emit_fit_summary(const EnsembleResult& result, const std::string& path) {
  std::ofstream out = open_for_write(path);
  out << provenance_header(result);
  out << "trajectories = " << result.trajectories << '\n'
      << "fit_center = " << result.fit_center << '\n';
  if (result.fit) {
    const auto& fit = *result.fit;
    out << "length_estimate = " << format_double(fit.length_estimate) << '\n'
        << "lambda = " << format_double(fit.lambda) << '\n'
        << "log_intercept = " << format_double(fit.log_intercept) << '\n'
        << "fit_quality = " << format_double(fit.fit_quality) << '\n'
        << "window_min = " << fit.window_min << '\n'
        << "window_max = " << fit.window_max << '\n'
        << "points = " << fit.points << '\n';
  } else {
    out << "fit = unavailable\n";
  }
  out << "saturation_kick = "
      << (result.saturation_kick ? std::to_string(*result.saturation_kick) : "none") << '\n'
      << "max_closure_error = " << format_double(result.checks.max_closure_error) << '\n'
      << "max_markov_entropy_drop = " << format_double(result.checks.max_markov_entropy_drop)
      << '\n'
      << "max_edge_occupation = " << format_double(result.checks.max_edge_occupation) << '\n';
  if (result.checks.max_telescoping_error) {
    out << "max_telescoping_error = " << format_double(*result.checks.max_telescoping_error)
        << '\n';
  }
  finish(out, path);
}

void emit_plots(std::span<const EnsembleResult> results, const std::string& path_prefix) {
  if (results.empty()) throw DomainError("emit_plots: no results to plot");
  for (const auto& r : results) {
    if (r.models.empty() || r.models.front().records.empty()) {
      throw DomainError("emit_plots: result has no records");
    }
  }

  const EnsembleResult& first = results.front();
  const ModelSeries* energy_source = first.find(Model::quantum);
  if (!energy_source) energy_source = &first.models.back();

  std::vector<svg::Series> energy_series(3);
  energy_series[0] = {"total energy (" + to_string(energy_source->model) + ")", {}, {}, "#000000", "", 2.0};
  energy_series[1] = {"cumulative Markov term", {}, {}, "#1f77b4", "8,5", 1.8};
  energy_series[2] = {"cumulative interference term", {}, {}, "#d62728", "2,3", 1.8};
  for (const auto& r : energy_source->records) {
    for (auto& s : energy_series) s.x.push_back(r.kick_index);
    energy_series[0].y.push_back(r.energy);
    energy_series[1].y.push_back(r.markov_energy_cum);
    energy_series[2].y.push_back(r.interference_energy_cum);
  }
  svg::PlotSpec energy_spec{"Energy decomposition per kick", "kick n",
                            "energy (units of ħ²/2I)", false, 760, 480,
                            provenance_header(first)};

  static const char* palette[] = {"#000000", "#d62728", "#2ca02c", "#1f77b4", "#9467bd", "#8c564b"};
  std::vector<svg::Series> entropy_series;
  std::string comment;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const EnsembleResult& r = results[i];
    const ModelSeries* src = r.find(Model::quantum);
    if (!src) src = &r.models.back();
    svg::Series s;
    s.label = to_string(r.config.schedule.kind) + " (" + to_string(src->model) + ")";
    s.color = palette[i % std::size(palette)];
    s.stroke_width = i == 0 ? 2.5 : 1.2;
    for (const auto& rec : src->records) {
      s.x.push_back(rec.kick_index);
      s.y.push_back(rec.entropy);
    }
    entropy_series.push_back(std::move(s));
    comment += provenance_header(r);
  }
  svg::PlotSpec entropy_spec{"Entropy vs kick number", "kick n (log scale)", "entropy S (nats)",
                             true, 760, 480, comment};

  const std::string energy_doc = svg::render_line_plot(energy_spec, energy_series);
  const std::string entropy_doc = svg::render_line_plot(entropy_spec, entropy_series);
  for (const auto& [suffix, doc] : {std::pair{"_energy.svg", &energy_doc},
                                    std::pair{"_entropy.svg", &entropy_doc}}) {
    const std::string path = path_prefix + suffix;
    std::ofstream out = open_for_write(path);
    out << *doc;
    finish(out, path);
  }
}

void emit_plots(const EnsembleResult& result, const std::string& path_prefix) {
  emit_plots(std::span<const EnsembleResult>(&result, 1), path_prefix);
}

std::vector<TimeseriesRow> read_timeseries(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::vector<TimeseriesRow> rows;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != kTimeseriesHeader) throw IoError(path + ": unexpected header '" + line + "'");
      header_seen = true;
      continue;
    }
    const auto cells = split_csv(line);
    if (cells.size() != 8) throw IoError(path + ": expected 8 columns in '" + line + "'");
    TimeseriesRow row;
    row.kick = parse_int(cells[0], path);
    row.model = cells[1];
    row.record.kick_index = row.kick;
    row.record.energy = parse_double(cells[2], path);
    row.record.markov_energy_cum = parse_double(cells[3], path);
    row.record.interference_energy_cum = parse_double(cells[4], path);
    row.record.entropy = parse_double(cells[5], path);
    row.record.participation_number = parse_double(cells[6], path);
    row.record.second_moment = parse_double(cells[7], path);
    rows.push_back(std::move(row));
  }
  if (!header_seen) throw IoError(path + ": missing header");
  return rows;
}

Distribution read_distribution(const std::string& path, const std::string& model) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::string line;
  int column = -1;
  std::vector<std::pair<int, double>> entries;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto cells = split_csv(line);
    if (column < 0) {
      if (cells.empty() || cells[0] != "k") throw IoError(path + ": missing 'k' header");
      for (std::size_t i = 1; i < cells.size(); ++i) {
        if (cells[i] == model) column = static_cast<int>(i);
      }
      if (column < 0) throw IoError(path + ": no column for model '" + model + "'");
      continue;
    }
    if (static_cast<int>(cells.size()) <= column) throw IoError(path + ": short row '" + line + "'");
    entries.emplace_back(parse_int(cells[0], path), parse_double(cells[column], path));
  }
  if (entries.empty()) throw IoError(path + ": no data rows");
  const int n = entries.back().first;
  if (entries.front().first != -n || static_cast<int>(entries.size()) != 2 * n + 1) {
    throw IoError(path + ": rows must cover k = -N..N in order");
  }
  Distribution p;
  p.halfwidth = n;
  p.probabilities.resize(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].first != static_cast<int>(i) - n) throw IoError(path + ": rows out of order");
    p.probabilities[i] = entries[i].second;
  }
  return p;
}

}  // namespace qkr
