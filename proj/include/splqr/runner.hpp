#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "splqr/bvp.hpp"
#include "splqr/config.hpp"
#include "splqr/riccati.hpp"

namespace splqr {

/// Format a double with 17 significant digits (round-trippable CSV output).
std::string fmt17(double v);

struct OracleReport {
  RiccatiSolution initial;   // stabilizing root at tau = 0
  RiccatiSolution terminal;  // anti-stabilizing root at tau = 1
};

struct LearnReport {
  LearnResult initial;
  LearnResult terminal;
  OracleReport reference;  // model-based values printed for comparison
};

struct CompareRow {
  double epsilon = 0.0;
  bool failed = false;
  std::string error;
  double sup_state_err_learned = 0.0;
  double sup_state_err_oracle_gains = 0.0;
  double sup_control_err = 0.0;
  double cost_gap = 0.0;
  double t_c = 0.0;
};

OracleReport run_oracle(const RunConfig& cfg);
LearnReport run_learn(const RunConfig& cfg);
std::vector<CompareRow> run_compare(const RunConfig& cfg);

/// Subcommand drivers: compute, write CSVs under cfg.out_dir, and print a
/// short human-readable report to `out`.
void cmd_oracle(const RunConfig& cfg, std::ostream& out);
void cmd_learn(const RunConfig& cfg, std::ostream& out);
void cmd_simulate(const RunConfig& cfg, bool learned_gains, std::ostream& out);
void cmd_optimal(const RunConfig& cfg, std::ostream& out);
void cmd_compare(const RunConfig& cfg, std::ostream& out);

void write_trajectory_csv(const std::string& path, const Trajectory& traj);
void write_trace_csv(const std::string& path,
                     const std::vector<PolicyIterate>& trace, int n, int m);
void write_compare_csv(const std::string& path,
                       const std::vector<CompareRow>& rows);

}  // namespace splqr
