// vdclab: run, validate and list experiments from JSON configs.
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "vdclab/config.hpp"
#include "vdclab/zoo.hpp"

namespace fs = std::filesystem;
using namespace vdclab;

namespace {

constexpr int kExitError = 1;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::pass: return 0;
    case Verdict::fail: return 2;
    case Verdict::abstain: return 3;
  }
  return kExitError;
}

int cmd_run(const std::string& config_path, const std::string& out_dir, int threads, bool seed_check) {
  ConfigDocument doc = parse_config(read_file(config_path));
  if (threads > 0) doc.options.threads = static_cast<unsigned>(threads);

  const auto t0 = std::chrono::steady_clock::now();
  ExperimentReport report = run_experiment(doc);
  report.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const std::string report_json = report.to_json().dump(2) + "\n";

  if (seed_check) {
    const std::string again = run_experiment(doc).to_json().dump(2) + "\n";
    if (again != report_json) {
      std::cerr << "seed check failed: a second run produced a different report\n";
      return kExitError;
    }
  }

  const auto issues = audit(report);
  for (const auto& i : issues) std::cerr << "audit: " << i << "\n";

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("cannot create " + out_dir + ": " + ec.message());
  const fs::path dir(out_dir);
  write_file(dir / "report.json", report_json);
  write_file(dir / "metrics.csv", metrics_csv(report));
  write_file(dir / "decay.csv", decay_csv(report));
  write_file(dir / "timing.txt", "wall_clock_seconds " + format_double(report.wall_clock_seconds) + "\n");

  std::cout << report.name << ": " << to_string(report.verdict) << " (" << report.verdict_reason << ")\n";
  if (!issues.empty()) return 2;
  return exit_code(report.verdict);
}

int cmd_validate(const std::string& config_path) {
  const ConfigDocument doc = parse_config(read_file(config_path));
  std::cout << "valid " << doc.experiment << " config\n";
  return 0;
}

int cmd_zoo() {
  for (const auto& z : zoo()) {
    std::cout << z.name << "\t" << to_string(z.expected) << "\t" << z.description << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Executable laboratory for van der Corput difference theorems"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  int threads = 0;
  bool seed_check = false;
  auto* run = app.add_subcommand("run", "Run an experiment config and write report.json, metrics.csv, decay.csv");
  run->add_option("config", config_path, "Config JSON")->required();
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_option("--threads", threads, "Worker threads for grid measures")->check(CLI::Range(1, 256));
  run->add_flag("--seed-check", seed_check, "Run twice and require byte-identical reports");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Parse and validate a config");
  validate->add_option("config", validate_path, "Config JSON")->required();

  auto* zoo_cmd = app.add_subcommand("zoo", "List the built-in labeled orbits");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(config_path, out_dir, threads, seed_check);
    if (*validate) return cmd_validate(validate_path);
    if (*zoo_cmd) return cmd_zoo();
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
