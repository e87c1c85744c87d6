#include "stefan/check.hpp"
#include "stefan/config.hpp"
#include "stefan/report.hpp"
#include "stefan/tasks.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using namespace stefan;

namespace {

struct Options {
  std::string config;
  std::string out;
  int jobs = 1;
  std::optional<std::uint64_t> seed;
};

fs::path output_dir(const Options& opt, const RunConfig& cfg) {
  if (!opt.out.empty()) return opt.out;
  if (const char* env = std::getenv("STEFAN_LAB_OUT"); env && *env) return env;
  return cfg.output_dir;
}

int emit(const fs::path& dir, const std::string& name, const TaskOutput& out) {
  write_atomic(dir / (name + ".json"), dump_json(out.summary));
  for (const auto& [file, table] : out.tables) write_atomic(dir / file, table.str());
  if (out.stop_code) {
    std::cerr << name << ": stopped early (" << to_string(*out.stop_code) << "); outputs written to " << dir
              << "\n";
    return exit_code_for(*out.stop_code);
  }
  std::cout << name << ": outputs written to " << dir.string() << "\n";
  return 0;
}

int run(const std::string& command, const Options& opt) {
  RunConfig cfg = load_config(opt.config);
  if (opt.seed) cfg.seed = *opt.seed;
  const auto dir = output_dir(opt, cfg);
  if (command == "equilibria") return emit(dir, command, run_equilibria_task(cfg));
  if (command == "spectrum") return emit(dir, command, run_spectrum_task(cfg, opt.jobs));
  if (command == "simulate") return emit(dir, command, run_simulate_task(cfg));
  if (command == "ripening") return emit(dir, command, run_ripening_task(cfg));

  const auto report = run_check_suite(cfg, opt.jobs);
  write_atomic(dir / "check.json", dump_json(report.to_json()));
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
  int failed = 0;
  for (const auto& item : report.items) {
    if (!item.passed) {
      ++failed;
      std::cerr << "FAIL " << item.suite << "." << item.name << " measured " << item.measured << " tolerance "
                << item.tolerance << (item.detail.empty() ? "" : " (" + item.detail + ")") << "\n";
    }
  }
  std::cout << "check: " << report.items.size() - failed << "/" << report.items.size() << " passed\n";
  return report.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-phase Stefan problem with surface tension: equilibria, spectra and simulations"};
  app.require_subcommand(1);
  Options opt;
  std::string command;
  const std::pair<const char*, const char*> commands[] = {
      {"equilibria", "roots of phi(u) = E0 with stability classes"},
      {"spectrum", "eigenvalue counts of the linearization"},
      {"simulate", "radially symmetric evolution"},
      {"ripening", "reduced multi-sphere model"},
      {"check", "invariant suites"},
  };
  for (const auto& [name, about] : commands) {
    auto* sub = app.add_subcommand(name, about);
    sub->add_option("--config", opt.config, "YAML config file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out, "output directory (overrides STEFAN_LAB_OUT and output.dir)");
    sub->add_option("--jobs", opt.jobs, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--seed", opt.seed, "random seed for perturbations");
    sub->callback([&command, name = std::string(name)] { command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    return run(command, opt);
  } catch (const ConfigError& e) {
    for (const auto& msg : e.errors()) std::cerr << "config error: " << msg << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
