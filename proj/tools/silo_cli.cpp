// silo - command-line front end of the cross-silo game engine. All work is
// delegated to the shared library through the C API in silo_games.h.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "silo_games.h"

namespace {

struct CommonArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> rounds;
  std::optional<int> reps;
  std::optional<double> phi;
  std::optional<int> slice;
  std::string out_dir;
  std::string format = "csv";
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "JSON configuration file")
      ->required();
  cmd->add_option("--seed", args.seed, "override sim.seed");
  cmd->add_option("--rounds", args.rounds, "override sim.rounds");
  cmd->add_option("--reps", args.reps, "override sim.reps");
  cmd->add_option("--phi", args.phi, "override pinning.phi");
  cmd->add_option("--slice", args.slice, "override pinning.slice");
  cmd->add_option("--out", args.out_dir, "directory for result files");
  cmd->add_option("--format", args.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
}

silo_format format_of(const CommonArgs& args) {
  return args.format == "json" ? SILO_FORMAT_JSON : SILO_FORMAT_CSV;
}

// Exit codes: 0 success, 1 validation/usage, 2 infeasible pinning.
int exit_code(silo_status status) {
  if (status == SILO_OK) return 0;
  if (status == SILO_ERROR_INFEASIBLE) return 2;
  return 1;
}

class Engine {
 public:
  explicit Engine(const CommonArgs& args) {
    silo_status status = silo_engine_create_from_file(args.config_path.c_str(), &engine_);
    if (status != SILO_OK) {
      std::cerr << "error: cannot load config '" << args.config_path << "'";
      if (engine_ && silo_engine_last_error(engine_)[0] != '\0')
        std::cerr << ": " << silo_engine_last_error(engine_);
      std::cerr << "\n";
      silo_engine_destroy(engine_);
      std::exit(1);
    }
    apply(args);
  }
  ~Engine() { silo_engine_destroy(engine_); }
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  silo_engine* get() { return engine_; }

  void apply(const CommonArgs& args) {
    if (args.seed) check(silo_engine_set_seed(engine_, *args.seed));
    if (args.rounds) check(silo_engine_set_rounds(engine_, *args.rounds));
    if (args.reps) check(silo_engine_set_reps(engine_, *args.reps));
    if (args.phi) check(silo_engine_set_phi(engine_, *args.phi));
    if (args.slice) check(silo_engine_set_slice(engine_, *args.slice));
  }

  void check(silo_status status) {
    if (status != SILO_OK) {
      std::cerr << "error: " << silo_engine_last_error(engine_) << "\n";
      std::exit(1);
    }
  }

 private:
  silo_engine* engine_ = nullptr;
};

std::string take_buffer(char* buffer) {
  std::string text = buffer ? buffer : "";
  silo_buffer_free(buffer);
  return text;
}

int write_file(const std::string& dir, const std::string& name,
               const std::string& text) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  const fs::path path = fs::path(dir) / name;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    std::cerr << "error: cannot write " << path.string() << "\n";
    return 1;
  }
  out << text;
  std::cout << "wrote " << path.string() << "\n";
  return 0;
}

// Prints to stdout; writes a file too when --out was given.
int deliver(const CommonArgs& args, const std::string& name,
            const std::string& text, bool print) {
  if (print) std::cout << text;
  if (!args.out_dir.empty()) return write_file(args.out_dir, name, text);
  if (!print) std::cout << text;  // file-producing command without --out
  return 0;
}

std::string ext(const CommonArgs& args) {
  return args.format == "json" ? ".json" : ".csv";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cross-silo collaborative-training game engine"};
  app.require_subcommand(1);

  CommonArgs args;
  bool aggregate = false;
  bool all_slices = false;
  std::optional<double> alpha0;

  CLI::App* analyze = app.add_subcommand(
      "analyze", "social-dilemma analysis of the configured game");
  add_common(analyze, args);

  CLI::App* bounds = app.add_subcommand(
      "bounds", "alpha0 feasibility interval of the pinning spec");
  add_common(bounds, args);
  bounds->add_flag("--aggregate", aggregate,
                   "force the enumeration-free bound computation");
  bounds->add_flag("--all-slices", all_slices, "report every slice g in {0..r}");

  CLI::App* synthesize = app.add_subcommand(
      "synthesize", "materialize the welfare-pinning strategy to a file");
  add_common(synthesize, args);
  synthesize->add_option("--alpha0", alpha0,
                         "pin at this alpha0 instead of alpha0_min");

  CLI::App* stationary = app.add_subcommand(
      "stationary", "stationary distribution of the configured profile");
  add_common(stationary, args);

  CLI::App* simulate = app.add_subcommand(
      "simulate", "iterated-game trajectory of the configured profile");
  add_common(simulate, args);

  CLI::App* grid = app.add_subcommand(
      "grid", "tournament of controller strategies vs opponent families");
  add_common(grid, args);

  CLI11_PARSE(app, argc, argv);

  Engine engine(args);
  char* buffer = nullptr;

  if (analyze->parsed()) {
    silo_status status = silo_run_analyze(engine.get(), format_of(args), &buffer);
    if (status != SILO_OK) {
      std::cerr << "error: " << silo_engine_last_error(engine.get()) << "\n";
      return exit_code(status);
    }
    return deliver(args, "analyze" + ext(args), take_buffer(buffer), true);
  }

  if (bounds->parsed()) {
    silo_status status = silo_run_bounds(
        engine.get(), aggregate ? SILO_BOUNDS_AGGREGATE : SILO_BOUNDS_AUTO,
        all_slices ? 1 : 0, format_of(args), &buffer);
    if (status != SILO_OK && status != SILO_ERROR_INFEASIBLE) {
      std::cerr << "error: " << silo_engine_last_error(engine.get()) << "\n";
      return exit_code(status);
    }
    int rc = deliver(args, "bounds" + ext(args), take_buffer(buffer), true);
    if (status == SILO_ERROR_INFEASIBLE) {
      std::cerr << "pinning is infeasible for the reported slice(s)\n";
      return 2;
    }
    return rc;
  }

  if (synthesize->parsed()) {
    const double a0 = alpha0.value_or(0.0);
    silo_status status = silo_run_synthesize(
        engine.get(), alpha0 ? &a0 : nullptr, &buffer);
    if (status != SILO_OK && status != SILO_ERROR_INFEASIBLE) {
      std::cerr << "error: " << silo_engine_last_error(engine.get()) << "\n";
      return exit_code(status);
    }
    if (status == SILO_ERROR_INFEASIBLE) {
      std::cout << take_buffer(buffer);
      std::cerr << "no strategy synthesized: "
                << silo_engine_last_error(engine.get()) << "\n";
      return 2;
    }
    return deliver(args, "strategy.json", take_buffer(buffer), false);
  }

  if (stationary->parsed()) {
    silo_status status =
        silo_run_stationary(engine.get(), format_of(args), &buffer);
    if (status != SILO_OK) {
      if (buffer) std::cout << take_buffer(buffer);
      std::cerr << "error: " << silo_engine_last_error(engine.get()) << "\n";
      return exit_code(status);
    }
    return deliver(args, "stationary" + ext(args), take_buffer(buffer), false);
  }

  if (simulate->parsed()) {
    silo_status status =
        silo_run_simulate(engine.get(), format_of(args), &buffer);
    if (status != SILO_OK) {
      if (buffer) std::cout << take_buffer(buffer);
      std::cerr << "error: " << silo_engine_last_error(engine.get()) << "\n";
      return exit_code(status);
    }
    return deliver(args, "trajectory" + ext(args), take_buffer(buffer), false);
  }

  if (grid->parsed()) {
    const char* controllers[] = {"mmzd", "alld", "allc", "rand"};
    int final_rc = 0;
    for (const char* controller : controllers) {
      silo_status status = silo_run_grid_row(engine.get(), controller,
                                             format_of(args), &buffer);
      if (status == SILO_ERROR_INFEASIBLE) {
        std::cout << take_buffer(buffer);
        std::cerr << "controller '" << controller
                  << "' is infeasible under the configured pinning spec\n";
        final_rc = 2;
        continue;
      }
      if (status != SILO_OK) {
        std::cerr << "error: " << silo_engine_last_error(engine.get()) << "\n";
        return exit_code(status);
      }
      int rc = deliver(args, std::string("grid_") + controller + ext(args),
                       take_buffer(buffer), false);
      if (rc != 0) return rc;
    }
    return final_rc;
  }

  return 1;
}
