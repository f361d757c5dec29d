#pragma once

#include "splqr/odeint.hpp"
#include "splqr/systems.hpp"

namespace splqr {

/// Exact model-based solution of the two-point boundary optimal control
/// problem via the Hamiltonian flow: states, costates, the stationarity
/// control u = -R^-1 B' p, and the accumulated cost in original-time units.
struct BVPSolution {
  Vector p0;
  Trajectory trajectory;          // x and u on the tau grid
  std::vector<Vector> costates;   // p on the same grid
  double cost = 0.0;
  double boundary_residual = 0.0;
  double phi12_condition = 0.0;
};

/// Hamiltonian generator M_H(tau) = [A, -B R^-1 B'; -Q, -A'].
Matrix hamiltonian_matrix(const LTVSystem& sys, double tau);

/// State-transition matrix of eps * z' = M_H(tau) z over tau in [0, 1],
/// integrated with RK4 at step h. Supported for epsilon >= 0.05.
Matrix transition_matrix(const LTVSystem& sys, double epsilon, double h = 1e-3);

/// Shooting solve: p0 from Phi11 x0 + Phi12 p0 = xT, then one forward pass
/// recording the optimal trajectory. Raises the unreachable-boundary error
/// when Phi12 is numerically singular or the terminal miss exceeds 1e-6.
BVPSolution solve_bvp(const LTVSystem& sys, const BoundarySpec& spec,
                      double h = 1e-3);

struct OptimalityResidual {
  double costate_res = 0.0;       // sup |dp/dtau + (Qx + A'p)/eps| (4th-order FD)
  double stationarity_res = 0.0;  // sup |u + R^-1 B' p|
};

OptimalityResidual optimality_residual(const BVPSolution& sol,
                                       const LTVSystem& sys, double epsilon);

}  // namespace splqr
