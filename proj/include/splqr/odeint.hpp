#pragma once

#include <functional>
#include <vector>

#include "splqr/matlib.hpp"

namespace splqr {

/// Sampled solution of a controlled ODE on a uniform grid.
///
/// controls[i] is the value sampled at the start of step i and held across
/// it (zero-order hold); the final entry repeats the controller value at the
/// end time so all three sequences share one length. running_cost[i] is the
/// accumulated quadratic cost up to times[i].
struct Trajectory {
  std::vector<double> times;
  std::vector<Vector> states;
  std::vector<Vector> controls;
  std::vector<double> running_cost;
  double cost = 0.0;
};

using OdeField = std::function<Vector(double, const Vector&)>;
using ControlledField =
    std::function<Vector(double, const Vector&, const Vector&)>;
using Controller = std::function<Vector(double, const Vector&)>;
using CostIntegrand =
    std::function<double(double, const Vector&, const Vector&)>;
using VectorIntegrand =
    std::function<Vector(double, const Vector&, const Vector&)>;

/// One classical Runge-Kutta-4 update. Throws a divergence error naming the
/// offending time when a stage evaluates to a non-finite value.
Vector rk4_step(const OdeField& f, double t, const Vector& x, double h);

struct SimulateOptions {
  double blowup_bound = 1e9;
  std::vector<VectorIntegrand> integrands;
};

struct SimulateResult {
  Trajectory trajectory;
  /// integrals[q].row(i): integral of integrand q over [t0, times[i]].
  std::vector<Matrix> integrals;
};

/// Integrate x' = f(t, x, u) over [t0, t1] with fixed step h, the control
/// sampled at each step start and held. The cost integrand and any requested
/// vector integrands are accumulated per step by a Simpson rule using a
/// fourth-order Hermite midpoint, so quadrature matches the RK4 solution
/// order. (t1 - t0)/h must be an integer to 1e-9.
SimulateResult simulate(const ControlledField& f, const Controller& controller,
                        double t0, double t1, const Vector& x0, double h,
                        const CostIntegrand& cost,
                        const SimulateOptions& opts = {});

/// Composite-Simpson quadrature of sampled values g_i on the trajectory grid
/// (even interval counts exactly; a trailing 3/8 block handles odd ones).
double quadrature_on_grid(const std::vector<double>& values, double h);

}  // namespace splqr
