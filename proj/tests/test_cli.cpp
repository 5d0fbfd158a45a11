#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <set>
#include <fstream>
#include <sstream>
#include <string>

#include "entrolab/experiment.hpp"
#include "entrolab/io.hpp"

namespace fs = std::filesystem;
using entrolab::io::Json;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("entrolab_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Runs the CLI binary and returns its exit status.
int cli(const std::string& task, const Json& config, const fs::path& dir, const std::string& extra = {}) {
  const fs::path cfg = dir / "config.json";
  std::ofstream(cfg) << config.dump(2);
  const std::string cmd = std::string(ENTROLAB_CLI) + " " + task + " --config " + cfg.string() + " --out " +
                          (dir / "out").string() + " " + extra + " > " + (dir / "stdout").string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Json report(const fs::path& dir) { return Json::parse(slurp(dir / "out" / "report.json")); }

const Json geometric_diag = {{"kind", "diagonal"},
                             {"eigenvalues", {{"rule", "geometric"}, {"first", 1.5}, {"ratio", 0.5}}}};

}  // namespace

TEST_CASE("spectral-entropy report") {
  const fs::path d = scratch("spectral");
  REQUIRE(cli("spectral-entropy", {{"operator", geometric_diag}}, d) == 0);
  const Json r = report(d);
  CHECK(r["schema_version"] == 1);
  CHECK(r["task"] == "spectral-entropy");
  CHECK(r["result"]["h_top"].get<double>() == doctest::Approx(std::log(1.5)).epsilon(1e-15));
}

TEST_CASE("estimate-entropy on diag(2) writes a table and plot data") {
  const fs::path d = scratch("estimate");
  const Json cfg = {{"operator", {{"kind", "diagonal"}, {"eigenvalues", {2.0}}}},
                    {"space", {{"kind", "lp"}, {"p", 2}}},
                    {"sample", {{"kind", "grid"}, {"dim", 1}, {"per_axis", 4097}}},
                    {"n_range", {1, 10}},
                    {"epsilons", {0.125, 0.0625, 0.03125, 0.015625}}};
  REQUIRE(cli("estimate-entropy", cfg, d) == 0);
  const Json r = report(d);
  const double h = r["result"]["estimate"]["h_estimate"].get<double>();
  CHECK(std::abs(h - std::log(2.0)) < 0.1 * std::log(2.0));
  const std::string csv = slurp(d / "out" / "table.csv");
  CHECK(csv.rfind("n,epsilon,s,method,saturated", 0) == 0);
  CHECK(fs::exists(d / "out" / "plot.csv"));
  CHECK(slurp(d / "out" / "plot.svg").find("<svg") != std::string::npos);
}

TEST_CASE("identity map gives flat plot lines") {
  const fs::path d = scratch("flat");
  const Json cfg = {{"operator", {{"kind", "identity"}, {"dim", 1}}},
                    {"sample", {{"kind", "grid"}, {"dim", 1}, {"per_axis", 129}}},
                    {"n_range", {1, 5}},
                    {"epsilons", {0.1}}};
  REQUIRE(cli("estimate-entropy", cfg, d) == 0);
  std::istringstream in(slurp(d / "out" / "plot.csv"));
  std::string line;
  std::getline(in, line);
  std::set<std::string> values;
  while (std::getline(in, line)) values.insert(line.substr(line.rfind(',') + 1));
  CHECK(values.size() == 1);
}

TEST_CASE("exit codes") {
  const fs::path d = scratch("codes");
  // validation: empty epsilon list
  const Json empty_eps = {{"operator", {{"kind", "diagonal"}, {"eigenvalues", {2.0}}}},
                          {"sample", {{"kind", "grid"}, {"dim", 1}, {"per_axis", 9}}},
                          {"n_range", {1, 3}},
                          {"epsilons", Json::array()}};
  CHECK(cli("estimate-entropy", empty_eps, d) == 2);
  CHECK(report(d)["error"]["exit_code"] == 2);
  // validation: broken schedule
  const Json bad_gap = {{"operator", {{"kind", "backward_shift"}, {"weights", {{"rule", "const"}, {"value", 2}}}}},
                        {"epsilon", 0.1},
                        {"schedule", {{"gap", 4}, {"segments", {{{"a", 0}, {"b", 1}, {"y", {1, 1}}},
                                                                {{"a", 3}, {"b", 3}, {"y", {1}}}}}}}};
  CHECK(cli("shadow", bad_gap, d) == 2);
  // missing seed for a randomized task
  const Json embed = {{"weights", {{"rule", "const"}, {"value", 2}}}, {"N", 2}, {"samples", 50}, {"M", 16}};
  CHECK(cli("embed-shift", embed, d) == 2);
  CHECK(cli("embed-shift", embed, d, "--seed 5") == 0);
  CHECK(report(d)["seed"] == 5);
  // uncertified shadow with --require-certified
  const Json unit = {{"operator", {{"kind", "backward_shift"}, {"weights", {{"rule", "const"}, {"value", 1}}}}},
                     {"epsilon", 0.1},
                     {"schedule", {{"gap", 4}, {"segments", {{{"a", 0}, {"b", 1}, {"y", {1, 1}}}}}}}};
  CHECK(cli("shadow", unit, d) == 0);
  CHECK(cli("shadow", unit, d, "--require-certified") == 4);
  // bad flags
  CHECK(cli("shadow", unit, d, "--threads 0") == 2);
}

TEST_CASE("shadow, sp-lower-bound, splitting and variational-gap tasks") {
  const fs::path d = scratch("tasks");
  const Json shift = {{"kind", "backward_shift"}, {"weights", {{"rule", "const"}, {"value", 2}}}};
  const Json shadow = {{"operator", shift},
                       {"epsilon", 0.1},
                       {"schedule", {{"gap", 4}, {"segments", {{{"a", 0}, {"b", 1}, {"y", {{1, 0}, {1, 0}}}}}}}}};
  CHECK(cli("shadow", shadow, d, "--require-certified") == 0);
  CHECK(report(d)["result"]["certified"] == true);

  Json fixed = Json::array();
  for (int i = 0; i < 30; ++i) fixed.push_back(std::ldexp(1.0, -i));
  const Json sp = {{"operator", shift}, {"anchors", {Json::array({0}), fixed}}, {"n", 3}, {"epsilon", 0.1}};
  CHECK(cli("sp-lower-bound", sp, d, "--require-certified") == 0);
  const Json r = report(d);
  CHECK(r["result"]["family_size"] == 8);
  CHECK(r["result"]["table_count"].get<int>() >= 8);
  CHECK(r["result"]["lower_bound"].get<double>() == doctest::Approx(std::log(2.0) / 5));

  const Json split = {{"operator", {{"kind", "diagonal"}, {"eigenvalues", {2.0, 1.0, 0.5}}}}};
  CHECK(cli("splitting", split, d) == 0);
  CHECK(report(d)["result"]["center"]["dim"] == 1);

  const Json gap = {{"operator", {{"kind", "diagonal"}, {"eigenvalues", {2.0, 0.5}}}}};
  CHECK(cli("variational-gap", gap, d) == 0);
  CHECK(report(d)["result"]["gap"].get<double>() == std::log(2.0));
}

TEST_CASE("verify task passes") {
  const fs::path d = scratch("verify");
  CHECK(cli("verify", Json::object(), d, "--seed 1") == 0);
  const Json r = report(d);
  CHECK(r["result"]["passed"] == true);
  CHECK(r["result"]["checks"].size() >= 8);
}

TEST_CASE("reports are byte-identical across runs and thread counts") {
  const Json cfg = {{"operator", {{"kind", "dense"}, {"entries", {{1.1, 0.4}, {-0.3, 0.9}}}}},
                    {"sample", {{"kind", "grid"}, {"dim", 2}, {"per_axis", 120}}},
                    {"n_range", {1, 5}},
                    {"epsilons", {0.2, 0.1}}};
  const fs::path a = scratch("det_a");
  const fs::path b = scratch("det_b");
  REQUIRE(cli("estimate-entropy", cfg, a, "--threads 1") == 0);
  REQUIRE(cli("estimate-entropy", cfg, b, "--threads 4") == 0);
  for (const char* f : {"report.json", "table.csv", "plot.csv", "plot.svg"}) {
    CHECK(slurp(a / "out" / f) == slurp(b / "out" / f));
  }
}

TEST_CASE("reports carry the hash of their config") {
  const Json cfg = {{"operator", geometric_diag}};
  const fs::path d = scratch("hash");
  REQUIRE(cli("spectral-entropy", cfg, d) == 0);
  // the CLI reads the dumped file back, so hash what it read
  const Json read = Json::parse(slurp(d / "config.json"));
  CHECK(report(d)["config_hash"] == entrolab::io::config_hash(read));
  const Json other = {{"operator", {{"kind", "diagonal"}, {"eigenvalues", {2.0}}}}};
  CHECK(entrolab::io::config_hash(other) != entrolab::io::config_hash(read));
}

TEST_CASE("emit_plot_data rejects an empty table") {
  entrolab::EntropyTable t;
  CHECK_THROWS(entrolab::io::emit_plot_data(t, scratch("empty") / "plot"));
}
