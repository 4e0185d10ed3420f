#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qkr/config.hpp"
#include "qkr/diagnostics.hpp"
#include "qkr/ensemble.hpp"
#include "qkr/error.hpp"
#include "qkr/output.hpp"
#include "qkr/svg.hpp"

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("qkr_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string key_of(const std::vector<std::string>& args) {
  try {
    qkr::parse_config(args);
  } catch (const qkr::ConfigError& e) {
    return e.key();
  }
  return "";
}

// Minimal well-formedness check: balanced element tags, closed comments.
bool well_formed_xml(const std::string& doc) {
  std::vector<std::string> stack;
  std::size_t i = 0;
  bool saw_root = false;
  while ((i = doc.find('<', i)) != std::string::npos) {
    if (doc.compare(i, 4, "<!--") == 0) {
      const auto end = doc.find("-->", i + 4);
      if (end == std::string::npos) return false;
      if (doc.substr(i + 4, end - i - 4).find("--") != std::string::npos) return false;
      i = end + 3;
      continue;
    }
    const auto end = doc.find('>', i);
    if (end == std::string::npos) return false;
    const std::string tag = doc.substr(i + 1, end - i - 1);
    i = end + 1;
    if (tag.empty()) return false;
    if (tag[0] == '?') continue;
    if (tag[0] == '/') {
      if (stack.empty() || stack.back() != tag.substr(1)) return false;
      stack.pop_back();
      continue;
    }
    const std::string name = tag.substr(0, tag.find_first_of(" \t\n/"));
    if (tag.back() == '/') {
      if (stack.empty() && !saw_root) return false;
      continue;
    }
    if (stack.empty()) {
      if (saw_root) return false;
      saw_root = true;
    }
    stack.push_back(name);
  }
  return saw_root && stack.empty();
}

qkr::RunConfig tiny_config() {
  qkr::RunConfig c;
  c.kappa = 4.0;
  c.kicks = 3;
  c.basis_halfwidth = 200;
  c.initial_set = qkr::build_initial_set(2, c.basis_halfwidth);
  return c;
}

int run_cli(const std::string& args, const fs::path& dir) {
  const std::string cmd = "cd '" + dir.string() + "' && QKR_OUTPUT_DIR= '" QKR_CLI_PATH "' " +
                          args + " > cli.log 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("parse_config reproduces the reference setup") {
  const auto c = qkr::parse_config({"run", "--kappa", "21", "--tau", "1", "--kicks", "1000",
                                    "--schedule", "periodic", "--trajectories", "100"});
  CHECK(c.kappa == 21.0);
  CHECK(c.tau == 1.0);
  CHECK(c.kicks == 1000);
  CHECK(c.schedule.kind == qkr::ScheduleKind::periodic);
  CHECK(c.initial_set.size() == 100u);
  CHECK(c.initial_set.front() == -1);
  CHECK(c.initial_set.back() == 50);
  CHECK(c.basis_halfwidth >= 2048);
  CHECK(c.models.quantum);
  CHECK(c.models.markov);
  CHECK(c.models.diffusion);
}

TEST_CASE("parse_config plumbing") {
  const auto c = qkr::parse_config({"--kappa", "21", "--schedule", "random", "--seed", "7",
                                    "--jitter", "0.5"});
  CHECK(c.schedule.kind == qkr::ScheduleKind::random);
  CHECK(c.seed == 7u);
  CHECK(c.schedule.jitter == 0.5);
  const auto s = qkr::make_schedule(c);
  CHECK(s.jitter() == 0.5);
  CHECK(s.seed() == 7u);

  const auto d = qkr::parse_config({"--kappa=3", "--models=quantum,markov", "--track-residual",
                                    "true", "--basis", "300", "--propagator", "spectral",
                                    "--output", "x/y", "--plots", "off", "--trajectories", "4"});
  CHECK(d.kappa == 3.0);
  CHECK_FALSE(d.models.diffusion);
  CHECK(d.track_residual);
  CHECK(d.basis_halfwidth == 300);
  CHECK(d.propagator == qkr::PropagatorKind::spectral);
  CHECK(d.output_prefix == "x/y");
  CHECK_FALSE(d.plots);
  CHECK(d.initial_set == std::vector<int>{-1, 1, -2, 2});
}

TEST_CASE("parse_config errors name the key") {
  CHECK(key_of({"--tau", "1"}) == "kappa");
  CHECK(key_of({"--kappa", "21", "--colour", "red"}) == "colour");
  CHECK(key_of({"--kappa", "abc"}) == "kappa");
  CHECK(key_of({"--kappa", "-2"}) == "kappa");
  CHECK(key_of({"--kappa", "2", "--kicks", "1.5"}) == "kicks");
  CHECK(key_of({"--kappa", "2", "--kicks", "0"}) == "kicks");
  CHECK(key_of({"--kappa", "2", "--schedule", "weekly"}) == "schedule");
  CHECK(key_of({"--kappa", "2", "--trajectories", "3"}) == "trajectories");
  CHECK(key_of({"--kappa", "2", "--jitter", "1.5"}) == "jitter");
  CHECK(key_of({"--kappa", "2", "--models", "quantum,oracle"}) == "models");
  CHECK(key_of({"--kappa", "2", "--seed", "-1"}) == "seed");
  CHECK(key_of({"--kappa", "2", "--plots", "maybe"}) == "plots");
  CHECK(key_of({"--kappa", "2", "--tau"}) == "tau");
  CHECK(key_of({"--kappa", "2", "--basis", "10", "--trajectories", "40"}) == "trajectories");
}

TEST_CASE("config file values are overridden by flags") {
  const std::string file =
      "# reference run\n"
      "kappa = 21\n"
      "kicks = 500   # shorter\n"
      "schedule = random\n"
      "\n"
      "seed = 3\n";
  const auto c = qkr::parse_config({"--kicks", "20"}, file);
  CHECK(c.kappa == 21.0);
  CHECK(c.kicks == 20);
  CHECK(c.seed == 3u);
  CHECK(c.schedule.kind == qkr::ScheduleKind::random);

  CHECK_THROWS_AS(qkr::parse_key_values("kappa = 1\nkappa = 2\n"), qkr::ConfigError);
  CHECK_THROWS_AS(qkr::parse_key_values("bogus = 1\n"), qkr::ConfigError);
  CHECK_THROWS_AS(qkr::parse_key_values("kappa 1\n"), qkr::ConfigError);
  const auto kv = qkr::parse_key_values("edge-tolerance = 1e-10\n");
  CHECK(kv.at("edge_tolerance") == "1e-10");
}

TEST_CASE("format_double round trips") {
  for (double v : {0.0, 1.0, -2.5, 0.1, 1.0 / 3.0, 220.5, 6.02214076e23, 5e-324, -1e-300}) {
    CHECK(std::strtod(qkr::format_double(v).c_str(), nullptr) == v);
  }
  CHECK(qkr::format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("timeseries CSV contract") {
  const auto dir = scratch_dir("timeseries");
  auto c = tiny_config();
  c.models = {true, true, false};
  const auto r = qkr::run_ensemble(c);
  const auto path = (dir / "a.csv").string();
  qkr::emit_timeseries(r, path);

  std::ifstream in(path);
  std::string line;
  std::vector<std::string> comments, data;
  std::string header;
  while (std::getline(in, line)) {
    if (line.rfind('#', 0) == 0) comments.push_back(line);
    else if (header.empty()) header = line;
    else data.push_back(line);
  }
  CHECK(header ==
        "kick,model,energy,markov_energy_cum,interference_energy_cum,entropy,participation,"
        "second_moment");
  CHECK(data.size() == 6u);
  CHECK(data[0].rfind("1,markov,", 0) == 0);
  CHECK(data[1].rfind("1,quantum,", 0) == 0);
  CHECK(data[5].rfind("3,quantum,", 0) == 0);
  REQUIRE_FALSE(comments.empty());
  std::ostringstream hash;
  hash << std::hex << r.config_hash;
  CHECK(comments[0].find(hash.str()) != std::string::npos);
  CHECK(comments[0].find("seed=1") != std::string::npos);

  const auto rows = qkr::read_timeseries(path);
  REQUIRE(rows.size() == 6u);
  for (const auto& row : rows) {
    const auto* m = r.find(row.model == "markov" ? qkr::Model::markov : qkr::Model::quantum);
    const auto& rec = m->records[static_cast<std::size_t>(row.kick - 1)];
    CHECK(row.record.energy == rec.energy);
    CHECK(row.record.markov_energy_cum == rec.markov_energy_cum);
    CHECK(row.record.interference_energy_cum == rec.interference_energy_cum);
    CHECK(row.record.entropy == rec.entropy);
    CHECK(row.record.participation_number == rec.participation_number);
    CHECK(row.record.second_moment == rec.second_moment);
  }
  const auto* markov = r.find(qkr::Model::markov);
  for (const auto& row : rows) {
    if (row.model == "markov") {
      CHECK(row.record.energy == doctest::Approx(markov->initial_energy + row.kick * 8.0));
    }
  }

  qkr::emit_timeseries(qkr::run_ensemble(c), (dir / "b.csv").string());
  CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
  CHECK_THROWS_AS(qkr::emit_timeseries(r, (dir / "missing" / "x.csv").string()), qkr::IoError);
  CHECK_THROWS_AS(qkr::read_timeseries((dir / "nope.csv").string()), qkr::IoError);
}

TEST_CASE("distribution CSV round trip and fit summary") {
  const auto dir = scratch_dir("distribution");
  auto c = tiny_config();
  c.kicks = 30;
  const auto r = qkr::run_ensemble(c);
  const auto path = (dir / "d.csv").string();
  qkr::emit_distribution(r, path);
  for (const char* name : {"quantum", "markov", "diffusion"}) {
    const auto p = qkr::read_distribution(path, name);
    const auto* m = r.find(name[0] == 'q' ? qkr::Model::quantum
                           : name[0] == 'm' ? qkr::Model::markov
                                            : qkr::Model::diffusion);
    CHECK(p.halfwidth == 200);
    CHECK(p.probabilities == m->final_distribution.probabilities);
  }
  CHECK_THROWS_AS(qkr::read_distribution(path, "classical"), qkr::IoError);

  qkr::emit_fit_summary(r, (dir / "f.txt").string());
  const std::string text = slurp(dir / "f.txt");
  CHECK(text.find("trajectories = 4") != std::string::npos);
  CHECK(text.find("max_closure_error = ") != std::string::npos);
  CHECK(text.rfind("# qkr ", 0) == 0);
}

TEST_CASE("plots are self-contained SVG") {
  const auto dir = scratch_dir("plots");
  auto c = tiny_config();
  c.kicks = 20;
  const auto periodic = qkr::run_ensemble(c);
  c.schedule.kind = qkr::ScheduleKind::random;
  const auto random = qkr::run_ensemble(c);
  const std::vector<qkr::EnsembleResult> both{periodic, random};
  const auto prefix = (dir / "cmp").string();
  qkr::emit_plots(both, prefix);
  for (const char* suffix : {"_energy.svg", "_entropy.svg"}) {
    const std::string doc = slurp(prefix + suffix);
    CAPTURE(suffix);
    CHECK(doc.find("<svg") != std::string::npos);
    CHECK(well_formed_xml(doc));
    CHECK(doc.find("href") == std::string::npos);
    CHECK(doc.find("http://www.w3.org/2000/svg") != std::string::npos);
    CHECK(doc.find("config_hash=") != std::string::npos);
  }
  const std::string energy = slurp(prefix + "_energy.svg");
  CHECK(energy.find("cumulative Markov term") != std::string::npos);
  CHECK(energy.find("cumulative interference term") != std::string::npos);
  CHECK(energy.find("ħ²/2I") != std::string::npos);
  const std::string entropy = slurp(prefix + "_entropy.svg");
  CHECK(entropy.find("periodic") != std::string::npos);
  CHECK(entropy.find("random") != std::string::npos);
  CHECK(entropy.find("nats") != std::string::npos);
  CHECK(entropy.find("log scale") != std::string::npos);

  const auto empty_prefix = (dir / "empty").string();
  CHECK_THROWS_AS(qkr::emit_plots(std::vector<qkr::EnsembleResult>{}, empty_prefix),
                  qkr::DomainError);
  CHECK_THROWS_AS(qkr::emit_plots(qkr::EnsembleResult{}, empty_prefix), qkr::DomainError);
  CHECK_FALSE(fs::exists(empty_prefix + "_energy.svg"));
  CHECK_FALSE(fs::exists(empty_prefix + "_entropy.svg"));
}

TEST_CASE("svg helpers") {
  CHECK(qkr::svg::xml_escape("a<b & \"c\" > 'd'") ==
        "a&lt;b &amp; &quot;c&quot; &gt; &apos;d&apos;");
  const auto ticks = qkr::svg::nice_ticks(0.0, 97.0, 6);
  REQUIRE(ticks.size() >= 3u);
  CHECK(ticks.front() >= 0.0);
  CHECK(ticks.back() <= 97.0 + 1e-9);
  for (std::size_t i = 1; i < ticks.size(); ++i) CHECK(ticks[i] > ticks[i - 1]);
  qkr::svg::PlotSpec spec;
  spec.title = "t <1>";
  spec.comment = "has -- inside";
  qkr::svg::Series s;
  s.label = "line";
  s.x = {1, 2, 3};
  s.y = {1, 4, 9};
  const std::string doc = qkr::svg::render_line_plot(spec, {s});
  CHECK(well_formed_xml(doc));
  CHECK(doc.find("t &lt;1&gt;") != std::string::npos);
  spec.log_x = true;
  CHECK(well_formed_xml(qkr::svg::render_line_plot(spec, {s})));
}

TEST_CASE("command line runs end to end") {
  const auto dir = scratch_dir("cli");
  const std::string common = "--kappa 4 --kicks 40 --trajectories 4 --basis 300";
  REQUIRE(run_cli("run " + common + " --output one", dir) == 0);
  for (const char* suffix : {"_timeseries.csv", "_distribution.csv", "_fit.txt", "_energy.svg",
                             "_entropy.svg"}) {
    CHECK(fs::exists(dir / (std::string("one") + suffix)));
  }
  REQUIRE(run_cli("run " + common + " --output two", dir) == 0);
  CHECK(slurp(dir / "one_timeseries.csv") == slurp(dir / "two_timeseries.csv"));
  CHECK(slurp(dir / "one_distribution.csv") == slurp(dir / "two_distribution.csv"));

  {
    std::ofstream cfg(dir / "run.cfg");
    cfg << "kappa = 4\nkicks = 40\ntrajectories = 4\nbasis = 300\noutput = three\n";
  }
  REQUIRE(run_cli("run --config run.cfg", dir) == 0);
  CHECK(slurp(dir / "one_timeseries.csv") == slurp(dir / "three_timeseries.csv"));

  const std::string env = "cd '" + dir.string() + "' && QKR_OUTPUT_DIR=out '" QKR_CLI_PATH
                          "' run " + common + " --output four > cli.log 2>&1";
  REQUIRE(WEXITSTATUS(std::system(env.c_str())) == 0);
  CHECK(fs::exists(dir / "out" / "four_timeseries.csv"));

  REQUIRE(run_cli("compare " + common + " --schedules periodic,random --output cmp", dir) == 0);
  CHECK(fs::exists(dir / "cmp_periodic_timeseries.csv"));
  CHECK(fs::exists(dir / "cmp_random_timeseries.csv"));
  CHECK(fs::exists(dir / "cmp_entropy.svg"));

  REQUIRE(run_cli("fit --input one_distribution.csv --model quantum --output refit", dir) == 0);
  CHECK(fs::exists(dir / "refit_fit.txt"));
  CHECK(slurp(dir / "cli.log").find("length_estimate = ") != std::string::npos);

  CHECK(run_cli("run --tau 1", dir) == 2);
  CHECK(slurp(dir / "cli.log").find("kappa") != std::string::npos);
  CHECK(run_cli("run --kappa 2 --bogus 1", dir) == 2);
  CHECK(run_cli("frobnicate", dir) == 2);
  CHECK(run_cli("run --kappa 10 --kicks 50 --trajectories 4 --basis 60 --output e", dir) == 4);
  CHECK(run_cli("fit --input missing.csv", dir) == 5);
  CHECK(run_cli("run --kappa 2 --basis 10 --trajectories 2 --output x --config none.cfg", dir) == 5);
}
