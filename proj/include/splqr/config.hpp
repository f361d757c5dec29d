#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "splqr/composite.hpp"
#include "splqr/learner.hpp"
#include "splqr/systems.hpp"

namespace splqr {

struct ExcitationConfig {
  int count = 100;
  double amplitude = 0.1;
  double freq_min = 0.1;
  double freq_max = 100.0;
};

struct LearnerConfig {
  std::uint64_t seed = 7;
  double dt = 0.1;
  double horizon = 10.0;
  double step = 1e-3;
  double tol = 1e-6;
  int max_iter = 30;
  ExcitationConfig excitation;
  std::optional<Matrix> k_init_a;
  std::optional<Matrix> k_init_b;
  bool time_varying_plant = false;
  double layer_fraction = 0.1;
};

struct OracleConfig {
  double tol = 1e-10;
  int max_iter = 60;
  std::optional<Matrix> k_init_a;
};

/// Everything a run needs; parsed from a JSON config file, with every field
/// optional and defaulting to the builtin dissipating-mass example setup.
struct RunConfig {
  bool builtin_mass = true;
  int n = 1;
  int m = 1;
  PolyTable A, B, Q, R;
  Vector x0;
  Vector xT;
  std::vector<double> epsilons{0.9, 0.5, 0.1};
  CompositionMode mode = CompositionMode::Superposition;
  double sim_step = 1e-3;
  double layer_step = 1e-4;
  std::string out_dir = ".";
  LearnerConfig learner;
  OracleConfig oracle;
};

RunConfig default_config();
RunConfig load_config(const std::string& path);

/// CLI overrides (--out, --seed, --epsilon).
void apply_overrides(RunConfig& cfg, const std::optional<std::string>& out_dir,
                     const std::optional<std::uint64_t>& seed,
                     const std::vector<double>& epsilons);

LTVSystem build_system(const RunConfig& cfg);
BoundarySpec build_boundary(const RunConfig& cfg, double epsilon);

/// Learner initial gains with builtin defaults filled in.
Matrix k_init_initial(const RunConfig& cfg);
Matrix k_init_terminal(const RunConfig& cfg);

}  // namespace splqr
