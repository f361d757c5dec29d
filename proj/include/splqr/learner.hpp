#pragma once

#include <cstdint>
#include <vector>

#include "splqr/odeint.hpp"
#include "splqr/riccati.hpp"
#include "splqr/systems.hpp"

namespace splqr {

/// Deterministic multisine exploration input: each control channel is
/// amplitude * sum of `count` sinusoids with frequencies drawn i.i.d.
/// uniform from [freq_min, freq_max] by the seeded generator.
struct ExcitationSignal {
  std::uint64_t seed = 0;
  int count = 0;
  int channels = 1;
  double amplitude = 0.0;
  Matrix frequencies;  // channels x count

  Vector evaluate(double t) const;
};

ExcitationSignal make_excitation(std::uint64_t seed, int count,
                                 double amplitude, double freq_min,
                                 double freq_max, int channels = 1);

/// Regression blocks assembled from one excited open-loop run, one row per
/// sampling window [t_i, t_i + dt]:
///   delta_xx  - increments of the symmetric-reduced x (x) x (off-diagonal
///               entries doubled so the row times svec(P) equals x'Px),
///   I_xx      - integral of x (x) x over the window (full n^2 columns),
///   I_xu0     - integral of x (x) u0 over the window.
struct DataLog {
  int n = 0;
  int m = 0;
  double dt = 0.0;
  Matrix delta_xx;
  Matrix I_xx;
  Matrix I_xu0;

  Eigen::Index rows() const { return delta_xx.rows(); }
};

struct CollectOptions {
  double step = 1e-3;        // integrator step in the regulator clock
  double blowup_bound = 1e9;
  Vector x_init;             // defaults to the origin when empty

  /// When set, the black-box simulator evolves the original time-varying
  /// plant (in the regulator clock, tau = epsilon*gamma resp.
  /// 1 - epsilon*beta) instead of the frozen snapshot, and the horizon is
  /// capped at layer_fraction of the clock span 1/epsilon.
  const LTVSystem* time_varying_plant = nullptr;
  double epsilon = 0.0;
  double layer_fraction = 0.1;
};

/// Excite the plant once in open loop and assemble the DataLog. The plant
/// matrices live only inside the simulator closure; nothing downstream of
/// the returned log can see them.
DataLog collect(const RegulatorProblem& prob, const ExcitationSignal& u0,
                double horizon, double dt, const CollectOptions& opts = {});

int required_rank(const DataLog& log);

/// Assumption check: numerical rank of [I_xx(sym-merged) I_xu0] equals
/// n(n+1)/2 + mn.
bool rank_check(const DataLog& log);

struct PolicyIterate {
  int k = 0;
  Matrix P;       // symmetric estimate for this iteration
  Matrix K_next;  // improved gain
  double step_change = 0.0;  // max|P_k - P_{k-1}| (|P_0| on the first step)
  double residual = 0.0;     // relative least-squares residual
};

/// One evaluation/improvement step: solve
///   [delta_xx, -2 I_xx (I (x) K'R) - 2 I_xu0 (I (x) R)] [svec(P); vec(K+)]
///     = -I_xx vec(Q + K'RK)
/// in the least-squares sense. Uses no plant matrices.
PolicyIterate pi_step(const DataLog& log, const Matrix& k_gain,
                      const Matrix& q0, const Matrix& r0);

struct LearnOptions {
  double dt = 0.1;
  double horizon = 10.0;
  double tol = 1e-6;
  int max_iter = 30;
  CollectOptions collect;
};

struct LearnResult {
  RiccatiSolution solution;  // residual field holds the relative
                             // regression residual of the final step
  std::vector<PolicyIterate> trace;
};

/// Full model-free loop: collect once, iterate pi_step from k_init until
/// the P estimate settles. Terminal problems run on the reversed clock
/// (the learner sees the sign-flipped plant) and the returned solution is
/// mapped back to the anti-stabilizing branch: P = -Pbar, K unchanged.
LearnResult learn_gain(const RegulatorProblem& prob,
                       const ExcitationSignal& u0, const Matrix& k_init,
                       const LearnOptions& opts = {});

}  // namespace splqr
