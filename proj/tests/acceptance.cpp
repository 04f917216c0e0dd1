// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "twoscale/cli.hpp"

using namespace twoscale;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (budget_s > 0.0 && secs > budget_s) {
    o.pass = false;
    o.detail += "; runtime budget " + detail::fmt17(budget_s) + " s exceeded";
  }
  if (!o.pass) ++failures;
  std::printf("C%-2d %s  %s (%.2f s): %s\n", id, o.pass ? "PASS" : "FAIL", title, secs, o.detail.c_str());
  std::fflush(stdout);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

std::string config(const std::string& name) { return std::string(TWOSCALE_CONFIGS) + "/" + name; }

Trajectory run_config(const RunConfig& c, ModelParams* params = nullptr) {
  const GridSpec g = c.grid_spec();
  const ScenarioInstance inst = scenario_factory(c.scenario, &c.params)(g);
  if (params) *params = inst.params;
  return integrate(inst.initial, inst.params, g, c.time, &inst.sources);
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(TWOSCALE_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Compares every regular file of two directories byte by byte.
bool same_tree(const fs::path& a, const fs::path& b, std::string& why) {
  int files = 0;
  for (const auto& e : fs::directory_iterator(a)) {
    if (!e.is_regular_file()) continue;
    ++files;
    const fs::path other = b / e.path().filename();
    if (!fs::exists(other) || slurp(e.path()) != slurp(other)) {
      why = e.path().filename().string() + " differs";
      return false;
    }
  }
  const auto count = std::distance(fs::directory_iterator(b), fs::directory_iterator());
  if (count != files) {
    why = "file sets differ";
    return false;
  }
  why = std::to_string(files) + " files identical";
  return files > 0;
}

}  // namespace

int main() {
  const VerifyOptions base;

  criterion(1, "discrete Green identities", 5.0, [&] {
    const SuiteResult m = suite_green_macro(base);
    const SuiteResult u = suite_green_micro(base);
    return Outcome{m.pass && u.pass, "macro " + fmt(m.max_residual) + ", micro " + fmt(u.max_residual) +
                                         " (scaled, threshold 1e-12)"};
  });

  criterion(2, "discrete trace inequality", 5.0, [&] {
    VerifyOptions o = base;
    o.trace_trials = 1000;
    const SuiteResult r = suite_trace(o);
    return Outcome{r.pass, r.detail + ", max lhs/rhs " + fmt(r.max_residual)};
  });

  criterion(3, "extension identities", 0.0, [&] {
    bool pass = true;
    std::string d;
    for (const SuiteResult& r : suite_extensions(base)) {
      pass = pass && r.pass;
      d += r.name + " " + fmt(r.max_residual) + " ";
    }
    return Outcome{pass, d + "(threshold 1e-12)"};
  });

  criterion(4, "energy dissipation", 0.0, [&] {
    const SuiteResult r = suite_dissipation(base);
    return Outcome{r.pass, "largest energy increase " + fmt(r.max_residual) + " (slack 1e-9)"};
  });

  criterion(5, "micro mass conservation", 0.0, [&] {
    const SuiteResult r = suite_conservation(base);
    return Outcome{r.pass, "relative drift " + fmt(r.max_residual) + " (threshold 1e-9)"};
  });

  const RunConfig fig1 = load_config(config("fig1.ini"));
  ModelParams fig1_p;
  Trajectory fig1_traj;

  criterion(6, "quasi-positivity and monotone gypsum", 0.0, [&] {
    fig1_traj = run_config(fig1, &fig1_p);
    const SuiteResult p = suite_positivity(fig1_traj, fig1_p);
    const SuiteResult m = suite_monotone_gypsum(fig1_traj);
    return Outcome{p.pass && m.pass, p.detail + ", largest u4 decrease " + fmt(m.max_residual)};
  });

  criterion(7, "boundedness under refinement", 120.0, [&] {
    const RunConfig c = load_config(config("sweep_fig1.ini"));
    const SweepResult r = refinement_sweep(scenario_factory(c.scenario, &c.params),
                                           refinement_grids(c.grid_spec(), 3), c.time, c.sweep_threshold);
    const double sup = r.max_ratio(false);
    return Outcome{sup <= 1.25, "max sup-in-time ratio " + fmt(sup) + ", max integral ratio " +
                                    fmt(r.max_ratio(true)) + " (threshold 1.25)"};
  });

  criterion(8, "manufactured solution order", 120.0, [&] {
    const RunConfig c = load_config(config("mms_smooth.ini"));
    const ConvergenceTable t = mms_table(c, 3);
    const double p = std::min({t.min_order(0), t.min_order(1), t.min_order(2)});
    return Outcome{p >= 1.9, "orders u1 " + fmt(t.min_order(0)) + ", u2 " + fmt(t.min_order(1)) + ", u3 " +
                                 fmt(t.min_order(2)) + " (threshold 1.9)"};
  });

  criterion(9, "gypsum front", 0.0, [&] {
    if (fig1_traj.snapshots.empty()) fig1_traj = run_config(fig1, &fig1_p);
    const SuiteResult r = suite_front(fig1.grid_spec(), fig1_traj);
    return Outcome{r.pass, std::to_string(static_cast<int>(r.max_residual)) + " failed conditions; " + r.detail};
  });

  criterion(10, "determinism", 0.0, [&] {
    const fs::path root = fs::temp_directory_path() / "twoscale_acceptance";
    fs::remove_all(root);
    std::string why_v, why_r;
    for (const char* tag : {"a", "b"}) {
      const fs::path v = root / ("verify_" + std::string(tag)), r = root / ("run_" + std::string(tag));
      if (run_cli("verify --seed 42 --out " + v.string()) != 0) return Outcome{false, "verify failed"};
      if (run_cli("run --config " + config("fig1.ini") + " --out " + r.string()) != 0)
        return Outcome{false, "run failed"};
    }
    const bool v = same_tree(root / "verify_a", root / "verify_b", why_v);
    const bool r = same_tree(root / "run_a", root / "run_b", why_r);
    return Outcome{v && r, "verify: " + why_v + "; run: " + why_r};
  });

  std::printf("%s: %d of 10 criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
