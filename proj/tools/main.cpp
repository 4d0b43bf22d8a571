// decolab command-line tool: run, validate and list decoherence scenarios.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "config.hpp"
#include "decolab/core.hpp"
#include "output.hpp"
#include "scenarios.hpp"

#ifndef DECOLAB_VERSION
#define DECOLAB_VERSION "unknown"
#endif

namespace {

using namespace decolab::cli;

constexpr int exit_schema = 2;
constexpr int exit_physics = 3;
constexpr int exit_io = 4;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Json read_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read '" + path + "'");
  try {
    return Json::parse(buf.str());
  } catch (const Json::parse_error& e) {
    throw SchemaError(path + ": invalid JSON: " + e.what());
  }
}

void print_issues(const std::vector<Issue>& issues) {
  for (const auto& i : issues) {
    std::cerr << "error[schema] " << (i.path.empty() ? "<root>" : i.path) << ": " << i.message << "\n";
  }
}

// DECOLAB_THREADS caps the worker count; unset means hardware concurrency.
unsigned worker_threads() {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const char* env = std::getenv("DECOLAB_THREADS");
  if (!env || !*env) return hw;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1) throw SchemaError("DECOLAB_THREADS must be a positive integer (got '" + std::string(env) + "')");
  return std::min(hw, static_cast<unsigned>(v));
}

Format infer_format(const std::string& path) {
  return std::filesystem::path(path).extension() == ".json" ? Format::json : Format::csv;
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << contents;
  out.close();
  if (!out) throw IoError("cannot write '" + path + "'");
}

struct RunOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output;
  std::optional<std::string> format;
};

int cmd_run(const RunOptions& opt) {
  const Json doc = read_config(opt.config_path);
  const auto validation = validate_config(doc, scenarios());
  if (!validation.issues.empty()) {
    print_issues(validation.issues);
    return exit_schema;
  }
  const ScenarioConfig& cfg = *validation.config;
  const std::uint64_t seed = opt.seed ? *opt.seed : cfg.seed.value_or(0);
  const auto path = opt.output ? opt.output : cfg.output_path;
  Format format = Format::csv;
  if (opt.format) {
    format = parse_format(*opt.format);
  } else if (cfg.format) {
    format = *cfg.format;
  } else if (path) {
    format = infer_format(*path);
  }

  const RunContext ctx{seed, worker_threads()};
  const auto start = std::chrono::steady_clock::now();
  const ResultSeries series = cfg.scenario->run(cfg.typed_params(), ctx);
  const double runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  // Runtime stays out of the files so that reruns are byte-identical.
  Json metadata = Json::object();
  metadata["decolab_version"] = DECOLAB_VERSION;
  metadata["scenario"] = cfg.scenario->name;
  metadata["units"] = units_name(cfg.units);
  metadata["seed"] = seed;
  metadata["config"] = cfg.echo(seed);
  metadata["summary"] = series.summary();

  std::ostringstream body;
  if (format == Format::json) {
    body << series_to_json(series, metadata).dump(2) << "\n";
  } else {
    write_csv(body, series);
  }
  if (path) {
    write_file(*path, body.str());
    if (format == Format::csv) write_file(*path + ".meta.json", metadata.dump(2) + "\n");
  } else {
    std::cout << body.str();
  }

  // Human-readable summary; stderr when the data itself goes to stdout.
  std::ostream& log = path ? std::cout : std::cerr;
  log << "scenario " << cfg.scenario->name << ": " << series.rows() << " rows, seed " << seed << ", "
      << format_double(runtime) << " s\n";
  for (const auto& [key, value] : series.summary().items()) {
    log << "  " << key << " = " << (value.is_number_float() ? format_double(value.get<double>()) : value.dump()) << "\n";
  }
  if (path) log << "wrote " << *path << (format == Format::csv ? " (+ .meta.json)" : "") << "\n";
  return 0;
}

int cmd_validate(const std::string& config_path) {
  const Json doc = read_config(config_path);
  const auto validation = validate_config(doc, scenarios());
  if (validation.issues.empty()) {
    std::cout << "ok: " << validation.config->scenario->name << "\n";
    return 0;
  }
  print_issues(validation.issues);
  std::cerr << validation.issues.size() << " issue(s)\n";
  return exit_schema;
}

int cmd_list() {
  for (const auto& s : scenarios()) {
    std::cout << s.name << "\n  " << s.description << "\n";
    for (const auto& p : s.params) {
      std::cout << "    " << p.name;
      if (!p.default_value.is_null()) {
        std::cout << " = " << p.default_value.dump();
      } else if (p.optional) {
        std::cout << " (optional)";
      } else {
        std::cout << " (required)";
      }
      std::cout << ": " << p.description << "\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"decolab: decoherence scenarios from exact and master-equation models"};
  app.set_version_flag("--version", DECOLAB_VERSION);
  app.require_subcommand(1);

  RunOptions run_opt;
  auto* run = app.add_subcommand("run", "run a scenario config and write its results");
  run->add_option("config", run_opt.config_path, "config file (JSON)")->required();
  run->add_option("--seed", run_opt.seed, "override the config seed");
  run->add_option("--output", run_opt.output, "override the output path");
  run->add_option("--format", run_opt.format, "override the output format")->check(CLI::IsMember({"csv", "json"}));

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "check a config without running it");
  validate->add_option("config", validate_path, "config file (JSON)")->required();

  auto* list = app.add_subcommand("list-scenarios", "list scenarios and their parameters");
  auto* schema = app.add_subcommand("schema", "print the JSON Schema for config files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_schema;
  }

  try {
    if (*run) return cmd_run(run_opt);
    if (*validate) return cmd_validate(validate_path);
    if (*list) return cmd_list();
    if (*schema) {
      std::cout << config_schema(scenarios()).dump(2) << "\n";
      return 0;
    }
  } catch (const SchemaError& e) {
    std::cerr << "error[schema] " << e.what() << "\n";
    return exit_schema;
  } catch (const IoError& e) {
    std::cerr << "error[io] " << e.what() << "\n";
    return exit_io;
  } catch (const decolab::DimensionError& e) {
    std::cerr << "error[physics] DimensionError: " << e.what() << "\n";
    return exit_physics;
  } catch (const decolab::DomainError& e) {
    std::cerr << "error[physics] DomainError: " << e.what() << "\n";
    return exit_physics;
  } catch (const decolab::ConvergenceError& e) {
    std::cerr << "error[physics] ConvergenceError: " << e.what() << "\n";
    return exit_physics;
  } catch (const decolab::Error& e) {
    std::cerr << "error[physics] Error: " << e.what() << "\n";
    return exit_physics;
  }
  return 0;
}
