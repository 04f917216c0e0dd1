/**
 * @file cli.hpp
 * @brief Command implementations behind the twoscale executable: run, mms,
 *        verify and sweep, and their CSV output.
 *
 * Exit codes: 0 ok, 1 verification failure, 2 configuration or usage error,
 * 3 divergence.
 */
#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "twoscale/config.hpp"
#include "twoscale/mms.hpp"
#include "twoscale/verify.hpp"

namespace twoscale {

enum ExitCode : int { exit_ok = 0, exit_verification = 1, exit_config = 2, exit_diverged = 3 };

class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Comma-separated writer: a `# config_hash=` line, a header row, then rows of
/// numbers with 17 significant digits.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::string& hash, const std::vector<std::string>& header)
      : out_(path, std::ios::binary) {
    if (!out_) throw OutputError("cannot write '" + path.string() + "'");
    out_ << "# config_hash=" << hash << "\n";
    for (std::size_t k = 0; k < header.size(); ++k) out_ << (k ? "," : "") << header[k];
    out_ << "\n";
  }

  CsvWriter& cell(double v) { return text(detail::fmt17(v)); }
  CsvWriter& cell(long long v) { return text(std::to_string(v)); }
  CsvWriter& text(const std::string& s) {
    out_ << (first_ ? "" : ",") << s;
    first_ = false;
    return *this;
  }
  void end_row() {
    out_ << "\n";
    first_ = true;
  }

 private:
  std::ofstream out_;
  bool first_ = true;
};

struct CommandOptions {
  std::filesystem::path out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<int> levels;
};

namespace detail {

inline void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw OutputError("cannot create output directory '" + dir.string() + "': " + ec.message());
}

inline std::string slice_name(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "micro_slice_%g.csv", x);
  return buf;
}

}  // namespace detail

/// Integrates the configured scenario and writes macro profiles, micro
/// slices, energy records and a summary.
inline int cmd_run(const RunConfig& c, const CommandOptions& o) {
  detail::ensure_dir(o.out_dir);
  const GridSpec g = c.grid_spec();
  const ScenarioInstance inst = scenario_factory(c.scenario, &c.params)(g);
  const Trajectory traj = integrate(inst.initial, inst.params, g, c.time, &inst.sources);
  const std::string hash = config_hash(c);
  const ModelParams& p = inst.params;

  CsvWriter macro(o.out_dir / "macro_profiles.csv", hash, {"t", "x", "u1", "u4"});
  for (const State& s : traj.snapshots)
    for (int i = 0; i <= g.nx(); ++i) {
      const auto k = static_cast<std::size_t>(i);
      macro.cell(s.t).cell(g.x(i)).cell(s.u1[k] + p.u1_d).cell(s.u4[k]).end_row();
    }

  for (double xs : c.micro_slices) {
    const auto i = static_cast<std::size_t>(std::lround(xs / g.hx()));
    CsvWriter slice(o.out_dir / detail::slice_name(xs), hash, {"t", "y", "u2", "u3"});
    for (const State& s : traj.snapshots)
      for (int j = 0; j <= g.ny(); ++j) {
        const auto b = static_cast<std::size_t>(j);
        slice.cell(s.t).cell(g.y(j)).cell(s.u2(i, b)).cell(s.u3(i, b)).end_row();
      }
  }

  CsvWriter energy(o.out_dir / "energy.csv", hash, {"t", "n1", "n2", "n3", "n4", "g1", "g2", "g3", "total"});
  for (const State& s : traj.snapshots) {
    const EnergyRecord e = energy_record(s, g);
    energy.cell(e.t).cell(e.n1).cell(e.n2).cell(e.n3).cell(e.n4).cell(e.g1).cell(e.g2).cell(e.g3).cell(e.total());
    energy.end_row();
  }

  std::ofstream summary(o.out_dir / "summary.txt", std::ios::binary);
  if (!summary) throw OutputError("cannot write summary.txt");
  const StepStats& st = traj.stats;
  summary << "# config_hash=" << hash << "\n"
          << config_echo(c) << "steps.accepted = " << st.accepted << "\n"
          << "steps.rejected = " << st.rejected << "\n"
          << "steps.rhs_evals = " << st.rhs_evals << "\n"
          << "steps.min_dt = " << detail::fmt17(st.min_dt) << "\n"
          << "steps.max_dt = " << detail::fmt17(st.max_dt) << "\n"
          << "steps.final_dt = " << detail::fmt17(st.final_dt) << "\n"
          << "steps.stability_dt = " << detail::fmt17(stability_dt(p, g)) << "\n";
  return exit_ok;
}

/// Convergence table of the configured manufactured solution.
inline ConvergenceTable mms_table(const RunConfig& c, int levels) {
  const GridSpec base = c.grid_spec();
  switch (c.mms_solution) {
    case MmsSolution::constant:
      return mms_convergence(ConstantSolution(c.params), base, levels, c.time);
    case MmsSolution::y_only:
      return mms_convergence(SeparableSolution(c.params, c.grid.L, c.grid.ell, false), base, levels, c.time,
                             Refinement::y_only);
    case MmsSolution::smooth:
    default:
      return mms_convergence(SeparableSolution(c.params, c.grid.L, c.grid.ell, true), base, levels, c.time);
  }
}

inline int cmd_mms(const RunConfig& c, const CommandOptions& o) {
  const int levels = o.levels.value_or(c.mms_levels);
  if (levels < 2) throw ConvergenceError("mms needs at least 2 levels to report orders, got " + std::to_string(levels));
  detail::ensure_dir(o.out_dir);
  const ConvergenceTable t = mms_table(c, levels);
  CsvWriter csv(o.out_dir / "mms_convergence.csv", config_hash(c),
                {"level", "N_x", "N_y", "e_u1", "e_u2", "e_u3", "e_u4", "p_u1", "p_u2", "p_u3", "p_u4"});
  for (const ConvergenceRow& r : t.rows) {
    csv.cell(static_cast<long long>(r.level)).cell(static_cast<long long>(r.nx)).cell(static_cast<long long>(r.ny));
    for (double e : r.error) csv.cell(e);
    for (double p : r.order) csv.cell(p);
    csv.end_row();
  }
  for (const ConvergenceRow& r : t.rows) {
    std::printf("level %d  N_x=%d N_y=%d  e = %.3e %.3e %.3e %.3e", r.level, r.nx, r.ny, r.error[0], r.error[1],
                r.error[2], r.error[3]);
    if (r.level > 0) std::printf("  p = %.3f %.3f %.3f %.3f", r.order[0], r.order[1], r.order[2], r.order[3]);
    std::printf("\n");
  }
  return exit_ok;
}

inline int cmd_verify(const VerifyOptions& vo, const CommandOptions& o) {
  detail::ensure_dir(o.out_dir);
  const std::vector<SuiteResult> results = run_all_suites(vo);
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(fnv1a("verify seed=" + std::to_string(vo.seed))));
  CsvWriter csv(o.out_dir / "verify_report.csv", hash, {"suite", "max_residual", "threshold", "pass"});
  std::vector<std::string> failed;
  for (const SuiteResult& r : results) {
    csv.text(r.name).cell(r.max_residual).cell(r.threshold).text(r.pass ? "1" : "0");
    csv.end_row();
    std::printf("%-22s %s  max_residual=%.3e threshold=%.3e%s%s\n", r.name.c_str(), r.pass ? "PASS" : "FAIL",
                r.max_residual, r.threshold, r.detail.empty() ? "" : "  ", r.detail.c_str());
    if (!r.pass) failed.push_back(r.name);
  }
  if (failed.empty()) return exit_ok;
  std::string names;
  for (const std::string& n : failed) names += (names.empty() ? "" : ", ") + n;
  std::fprintf(stderr, "verification failed: %s\n", names.c_str());
  return exit_verification;
}

inline int cmd_sweep(const RunConfig& c, const CommandOptions& o) {
  const int levels = o.levels.value_or(c.sweep_levels);
  detail::ensure_dir(o.out_dir);
  const SweepResult r = refinement_sweep(scenario_factory(c.scenario, &c.params),
                                         refinement_grids(c.grid_spec(), levels), c.time, c.sweep_threshold);
  CsvWriter csv(o.out_dir / "sweep.csv", config_hash(c),
                {"level", "N_x", "N_y", "quantity", "sup", "integral", "ratio_sup", "ratio_integral"});
  const auto& names = monitored_names();
  for (std::size_t k = 0; k < r.levels.size(); ++k)
    for (std::size_t q = 0; q < names.size(); ++q) {
      const SweepLevel& l = r.levels[k];
      const double rs = k ? SweepResult::ratio(r.levels[k - 1].sup[q], l.sup[q]) : 1.0;
      const double ri = k ? SweepResult::ratio(r.levels[k - 1].integral[q], l.integral[q]) : 1.0;
      csv.cell(static_cast<long long>(k)).cell(static_cast<long long>(l.nx)).cell(static_cast<long long>(l.ny));
      csv.text(names[q]).cell(l.sup[q]).cell(l.integral[q]).cell(rs).cell(ri);
      csv.end_row();
    }
  std::printf("max growth ratio %.4f (threshold %.4f): %s\n", r.max_growth(), r.ratio_threshold,
              r.passed() ? "PASS" : "FAIL");
  return r.passed() ? exit_ok : exit_verification;
}

}  // namespace twoscale
