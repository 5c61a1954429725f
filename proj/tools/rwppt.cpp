// Command-line runner: rwppt <subcommand> --config FILE [--out DIR] [--seed N] [--threads N]

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rwppt/error.hpp"
#include "rwppt/experiment.hpp"

namespace fs = std::filesystem;

namespace {

struct Job {
  std::string file;
  std::function<std::string(const rwppt::ExperimentConfig&)> body;
};

void report(const char* kind, const std::string& message) {
  nlohmann::json line{{"error", kind}, {"message", message}};
  std::cerr << line.dump() << '\n';
}

// Writes through a temporary file so a failed run never leaves a partial output.
void write_atomic(const fs::path& path, const std::string& contents) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
    out << contents;
    out.flush();
    if (!out) {
      out.close();
      fs::remove(tmp);
      throw std::runtime_error("write failed for '" + tmp.string() + "'");
    }
  }
  fs::rename(tmp, path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regionally weight-preserved parallel tempering experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  std::vector<CLI::Option*> seed_opts;
  unsigned threads = 1;

  const char* names[] = {"theory-curve", "optimize", "ladder", "simulate", "convergence", "figure"};
  for (const char* name : names) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "experiment config (JSON)")->required();
    sub->add_option("--out", out_dir, "output directory");
    seed_opts.push_back(sub->add_option("--seed", seed, "overrides the config seed"));
    sub->add_option("--threads", threads, "worker threads for Monte Carlo batches")
        ->check(CLI::Range(1u, 1024u));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report("argument", e.what());
    return 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  fs::path target;
  try {
    rwppt::ExperimentConfig config = rwppt::load_config(config_path);
    for (CLI::Option* o : seed_opts) {
      if (o->count() > 0) config.seed = seed;
    }

    Job job;
    if (command == "theory-curve") {
      job = {config.theory_curve_file, rwppt::theory_curve_csv};
    } else if (command == "optimize") {
      job = {config.optimize_file, rwppt::optimize_json};
    } else if (command == "ladder") {
      job = {config.ladder_file, rwppt::ladder_csv};
    } else if (command == "simulate") {
      job = {config.simulate_file, [&](const auto& c) { return rwppt::simulate_csv(c, threads); }};
    } else if (command == "convergence") {
      job = {config.convergence_file,
             [&](const auto& c) { return rwppt::convergence_csv(c, threads); }};
    } else {
      job = {config.figure_file, rwppt::figure_csv};
    }

    const std::string contents = job.body(config);
    fs::create_directories(out_dir);
    target = fs::path(out_dir) / job.file;
    write_atomic(target, contents);
    return 0;
  } catch (const rwppt::ConfigError& e) {
    report("config", e.what());
    return 2;
  } catch (const rwppt::ArgumentError& e) {
    report("config", e.what());
    return 2;
  } catch (const rwppt::DomainError& e) {
    report("config", e.what());
    return 2;
  } catch (const rwppt::ModelMismatchError& e) {
    report("config", e.what());
    return 2;
  } catch (const rwppt::OptimizerConfigurationError& e) {
    report("optimizer", e.what());
    return 3;
  } catch (const std::exception& e) {
    report("runtime", e.what());
  }
  std::error_code ec;
  if (!target.empty()) {
    fs::path tmp = target;
    tmp += ".tmp";
    fs::remove(tmp, ec);
  }
  return 1;
}
