// entrolab <task> --config exp.json --out dir [--seed S] [--threads T] [--require-certified]

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "entrolab/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Entropy experiments for linear operators"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  bool require_certified = false;

  for (const auto& name : entrolab::task_names()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "report directory")->required();
    sub->add_option("--seed", seed, "seed for randomized tasks");
    sub->add_option("--threads", threads, "worker threads")->check(CLI::Range(1u, 256u));
    sub->add_flag("--require-certified", require_certified, "exit 4 when the result is not certified");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : entrolab::kExitValidation;
  }

  entrolab::io::Json config;
  try {
    std::ifstream in(config_path);
    config = entrolab::io::Json::parse(in);
  } catch (const std::exception& e) {
    std::cerr << "error: cannot parse " << config_path << ": " << e.what() << "\n";
    return entrolab::kExitValidation;
  }

  entrolab::RunOptions opt;
  opt.out_dir = out_dir;
  opt.seed = seed;
  opt.threads = threads;
  opt.require_certified = require_certified;
  const std::string task = app.get_subcommands().front()->get_name();
  try {
    const auto res = entrolab::run(task, config, opt);
    if (res.exit_code != entrolab::kExitOk) std::cerr << "error: " << res.message << "\n";
    std::cout << (std::filesystem::path(out_dir) / "report.json").string() << "\n";
    return res.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return entrolab::kExitFailed;
  }
}
