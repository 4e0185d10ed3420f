// qkr: kicked-rotor ensemble runner.
//
//   qkr run     [--config FILE] --kappa K [--key value ...]
//   qkr compare [--config FILE] --schedules periodic,random [--key value ...]
//   qkr fit     --input DIST.csv [--model quantum] [--k0 0] [--floor 1e-12] [--output PREFIX]
//
// QKR_OUTPUT_DIR, when set, is prepended to relative output prefixes.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qkr/config.hpp"
#include "qkr/ensemble.hpp"
#include "qkr/error.hpp"
#include "qkr/output.hpp"

namespace {

enum ExitCode : int {
  kOk = 0,
  kUnexpected = 1,
  kUsage = 2,
  kDomain = 3,
  kEdgeGuard = 4,
  kIo = 5,
  kInsufficientData = 6,
};

constexpr const char* kUsageText =
    "usage: qkr <run|compare|fit> [options]\n"
    "  run      one ensemble; writes <output>_timeseries.csv, _distribution.csv, _fit.txt,\n"
    "           _energy.svg, _entropy.svg\n"
    "  compare  one ensemble per schedule in --schedules; one entropy plot\n"
    "  fit      localisation fit of a saved distribution CSV\n"
    "run/compare keys: kappa kappa2 tau kicks schedule jitter ratio seed trajectories basis\n"
    "                  models propagator tail_tolerance edge_tolerance track_residual threads\n"
    "                  output plots (and --config FILE with key = value lines)\n";

std::string resolve_prefix(const std::string& prefix) {
  const char* dir = std::getenv("QKR_OUTPUT_DIR");
  std::filesystem::path p(prefix);
  if (dir && *dir && p.is_relative()) {
    std::filesystem::create_directories(dir);
    p = std::filesystem::path(dir) / p;
  }
  return p.string();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw qkr::IoError("cannot read config file '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Pulls `--name value` / `--name=value` out of args.
std::optional<std::string> take_option(std::vector<std::string>& args, const std::string& name) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--" + name) {
      if (i + 1 >= args.size()) throw qkr::ConfigError(name, "missing value");
      std::string v = args[i + 1];
      args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
      return v;
    }
    if (args[i].rfind("--" + name + "=", 0) == 0) {
      std::string v = args[i].substr(name.size() + 3);
      args.erase(args.begin() + static_cast<long>(i));
      return v;
    }
  }
  return std::nullopt;
}

qkr::RunConfig load_config(std::vector<std::string>& args) {
  std::optional<std::string> file;
  if (auto path = take_option(args, "config")) file = read_file(*path);
  return qkr::parse_config(args, file);
}

void write_outputs(const qkr::EnsembleResult& result, const std::string& prefix) {
  qkr::emit_timeseries(result, prefix + "_timeseries.csv");
  qkr::emit_distribution(result, prefix + "_distribution.csv");
  qkr::emit_fit_summary(result, prefix + "_fit.txt");
}

void report(const qkr::EnsembleResult& r, std::ostream& os) {
  os << to_string(r.config.schedule.kind) << ": " << r.trajectories << " trajectories, "
     << r.config.kicks << " kicks, N = " << r.config.basis_halfwidth << "\n";
  for (const auto& m : r.models) {
    const auto& rec = m.records.back();
    os << "  " << to_string(m.model) << ": energy " << qkr::format_double(rec.energy)
       << ", entropy " << qkr::format_double(rec.entropy) << "\n";
  }
  if (r.fit) {
    os << "  fit: L0 = " << qkr::format_double(r.fit->length_estimate)
       << ", R^2 = " << qkr::format_double(r.fit->fit_quality) << "\n";
  }
}

int cmd_run(std::vector<std::string> args) {
  const qkr::RunConfig config = load_config(args);
  const qkr::EnsembleResult result = qkr::run_ensemble(config);
  const std::string prefix = resolve_prefix(config.output_prefix);
  write_outputs(result, prefix);
  if (config.plots) qkr::emit_plots(result, prefix);
  report(result, std::cout);
  return kOk;
}

int cmd_compare(std::vector<std::string> args) {
  std::string list = take_option(args, "schedules").value_or("periodic,random");
  qkr::RunConfig base = load_config(args);
  std::vector<qkr::EnsembleResult> results;
  std::stringstream ss(list);
  std::string name;
  const std::string prefix = resolve_prefix(base.output_prefix);
  while (std::getline(ss, name, ',')) {
    qkr::RunConfig c = base;
    try {
      c.schedule.kind = qkr::parse_schedule_kind(name);
    } catch (const qkr::DomainError& e) {
      throw qkr::ConfigError("schedules", e.what());
    }
    results.push_back(qkr::run_ensemble(c));
    write_outputs(results.back(), prefix + "_" + qkr::to_string(c.schedule.kind));
    report(results.back(), std::cout);
  }
  if (results.empty()) throw qkr::ConfigError("schedules", "empty list");
  if (base.plots) qkr::emit_plots(results, prefix);
  return kOk;
}

int cmd_fit(std::vector<std::string> args) {
  CLI::App app{"localisation fit of a saved distribution"};
  std::string input, model = "quantum", output;
  int k0 = 0;
  double floor = 1e-12;
  app.add_option("--input", input, "distribution CSV")->required();
  app.add_option("--model", model, "column to fit");
  app.add_option("--k0", k0, "profile centre");
  app.add_option("--floor", floor, "ignore P_k at or below this value");
  app.add_option("--output", output, "write <output>_fit.txt");
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }
  const qkr::Distribution p = qkr::read_distribution(input, model);
  const qkr::LocalizationFit fit = qkr::fit_localization(p, k0, floor);
  const std::string header = "# qkr " QKR_VERSION " fit of " + input + " column " + model + "\n";
  if (!output.empty()) qkr::emit_fit_summary(fit, header, resolve_prefix(output) + "_fit.txt");
  std::cout << "length_estimate = " << qkr::format_double(fit.length_estimate) << "\n"
            << "lambda = " << qkr::format_double(fit.lambda) << "\n"
            << "fit_quality = " << qkr::format_double(fit.fit_quality) << "\n"
            << "points = " << fit.points << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << kUsageText;
    return kUsage;
  }
  const std::string command = argv[1];
  std::vector<std::string> args(argv + 2, argv + argc);
  try {
    if (command == "run") return cmd_run(args);
    if (command == "compare") return cmd_compare(args);
    if (command == "fit") return cmd_fit(args);
    if (command == "--help" || command == "-h" || command == "help") {
      std::cout << kUsageText;
      return kOk;
    }
    std::cerr << "qkr: unknown command '" << command << "'\n" << kUsageText;
    return kUsage;
  } catch (const qkr::ConfigError& e) {
    std::cerr << "qkr: config error: " << e.what() << "\n";
    return kUsage;
  } catch (const qkr::EdgeGuardError& e) {
    std::cerr << "qkr: " << e.what() << " (increase --basis)\n";
    return kEdgeGuard;
  } catch (const qkr::IoError& e) {
    std::cerr << "qkr: io error: " << e.what() << "\n";
    return kIo;
  } catch (const qkr::InsufficientDataError& e) {
    std::cerr << "qkr: " << e.what() << "\n";
    return kInsufficientData;
  } catch (const std::domain_error& e) {
    std::cerr << "qkr: domain error: " << e.what() << "\n";
    return kDomain;
  } catch (const std::logic_error& e) {
    std::cerr << "qkr: consistency error: " << e.what() << "\n";
    return kDomain;
  } catch (const std::exception& e) {
    std::cerr << "qkr: " << e.what() << "\n";
    return kUnexpected;
  }
}
