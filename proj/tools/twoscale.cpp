// Command-line front end: twoscale {run|mms|verify|sweep} [--config f] [--out d] [--seed n] [--levels n]

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <string>

#include "twoscale/cli.hpp"

using namespace twoscale;

namespace {

struct Flags {
  std::string config;
  std::string out = ".";
  std::uint64_t seed = 0;
  int levels = 0;
};

void add_flags(CLI::App* cmd, Flags& f, bool config_required) {
  auto* opt = cmd->add_option("--config", f.config, "INI configuration file");
  if (config_required) opt->required();
  cmd->add_option("--out", f.out, "output directory")->capture_default_str();
  cmd->add_option("--seed", f.seed, "seed of the randomized suites");
  cmd->add_option("--levels", f.levels, "number of refinement levels");
}

CommandOptions command_options(const CLI::App* cmd, const Flags& f) {
  CommandOptions o;
  o.out_dir = f.out;
  if (cmd->count("--seed")) o.seed = f.seed;
  if (cmd->count("--levels")) o.levels = f.levels;
  return o;
}

int dispatch(const CLI::App& app, const Flags& f) {
  const CLI::App* run = app.get_subcommand("run");
  const CLI::App* mms = app.get_subcommand("mms");
  const CLI::App* verify = app.get_subcommand("verify");
  const CLI::App* sweep = app.get_subcommand("sweep");

  if (verify->parsed()) {
    VerifyOptions vo;
    if (!f.config.empty()) vo.seed = load_config(f.config).seed;
    CommandOptions o = command_options(verify, f);
    if (o.seed) vo.seed = *o.seed;
    if (o.levels) vo.sweep_levels = *o.levels;
    return cmd_verify(vo, o);
  }
  const CLI::App* cmd = run->parsed() ? run : mms->parsed() ? mms : sweep;
  RunConfig c = load_config(f.config);
  const CommandOptions o = command_options(cmd, f);
  if (o.seed) c.seed = *o.seed;
  if (cmd == run) return cmd_run(c, o);
  if (cmd == mms) return cmd_mms(c, o);
  return cmd_sweep(c, o);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-scale sulfate corrosion semi-discrete solver"};
  app.require_subcommand(1);
  Flags f;
  add_flags(app.add_subcommand("run", "integrate a scenario and write profiles"), f, true);
  add_flags(app.add_subcommand("mms", "manufactured-solution convergence table"), f, true);
  add_flags(app.add_subcommand("verify", "run all property suites"), f, false);
  add_flags(app.add_subcommand("sweep", "refinement sweep of the a-priori quantities"), f, true);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config;
  }

  try {
    return dispatch(app, f);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return exit_config;
  } catch (const ParameterError& e) {
    std::fprintf(stderr, "parameter error: %s\n", e.what());
    return exit_config;
  } catch (const ConvergenceError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return exit_config;
  } catch (const TimeSpecError& e) {
    std::fprintf(stderr, "time error: %s\n", e.what());
    return exit_config;
  } catch (const InvalidGrid& e) {
    std::fprintf(stderr, "grid error: %s\n", e.what());
    return exit_config;
  } catch (const DivergedError& e) {
    std::fprintf(stderr, "diverged: %s\n", e.what());
    return exit_diverged;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_verification;
  }
}
