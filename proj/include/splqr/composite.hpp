#pragma once

#include "splqr/odeint.hpp"
#include "splqr/systems.hpp"

namespace splqr {

enum class CompositionMode { Switching, Superposition };

/// Boundary-layer trajectories sampled on a shared uniform tau grid:
/// xa[i] = x_a(gamma = tau_i / eps), xb[i] = x_b(beta = (1 - tau_i) / eps).
struct LayerTrajectories {
  double h_tau = 0.0;
  std::vector<double> taus;
  std::vector<Vector> xa;
  std::vector<Vector> xb;

  Vector xa_at(double tau) const;
  Vector xb_at(double tau) const;
};

/// Integrate the two closed-loop regulator layers (forward clock from x0,
/// reversed clock from xT) and map both onto the tau grid.
LayerTrajectories boundary_trajectories(const Vector& x0, const Vector& xT,
                                        const Matrix& ka, const Matrix& kb,
                                        const RegulatorProblem& init,
                                        const RegulatorProblem& term,
                                        double epsilon, double h_tau = 1e-4);

struct CrossoverResult {
  double t_c = 0.5;
  bool degenerate = false;
};

/// Scalar systems: root of x_a(tau) - x_b(tau) by sign change + interpolant
/// bisection. Vector systems: minimizer of |x_a - x_b| by grid scan with
/// golden-section refinement. Flat/identical layers fall back to t_c = 0.5.
CrossoverResult crossover(const LayerTrajectories& layers);

struct CompositeController {
  Matrix Ka;
  Matrix Kb;
  double t_c = 0.5;
  CompositionMode mode = CompositionMode::Superposition;
  LayerTrajectories layers;
  bool degenerate_crossover = false;
};

CompositeController build_composite(const LTVSystem& sys,
                                    const BoundarySpec& spec, const Matrix& ka,
                                    const Matrix& kb, CompositionMode mode,
                                    double h_tau = 1e-4);

/// Closed-loop run of the true plant on tau in [0, 1] under the composite
/// law. Switching feeds back -Ka x before t_c and -Kb x after (the gain is
/// constant within a step); superposition applies the feedforward
/// -Ka x_a(gamma) - Kb x_b(beta). Cost carries the horizon factor T so runs
/// at different epsilon compare in original-time units.
Trajectory simulate_composite(const LTVSystem& sys, const BoundarySpec& spec,
                              const CompositeController& ctrl, double h = 1e-3);

struct ApproxError {
  double sup_state_err = 0.0;
  double sup_control_err = 0.0;
  double cost_gap = 0.0;
};

/// Sup-norm state/control deviation and cost gap against a reference
/// trajectory, resampling by linear interpolation onto the finer grid when
/// the steps differ.
ApproxError approx_error(const Trajectory& traj, const Trajectory& optimal);

}  // namespace splqr
