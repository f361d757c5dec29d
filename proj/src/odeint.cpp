#include "splqr/odeint.hpp"

#include <cmath>
#include <sstream>

namespace splqr {

namespace {

void check_stage(const Vector& v, double t) {
  if (!v.allFinite()) {
    std::ostringstream os;
    os << "rk4: non-finite stage evaluation at t = " << t;
    fail(ErrorKind::Divergence, os.str());
  }
}

long resolve_step_count(double t0, double t1, double h) {
  if (!(h > 0.0)) fail(ErrorKind::Parameter, "simulate: step must be positive");
  if (!(t1 > t0)) fail(ErrorKind::Parameter, "simulate: empty time interval");
  const double ratio = (t1 - t0) / h;
  const long steps = std::lround(ratio);
  if (steps < 1 || std::abs(ratio - static_cast<double>(steps)) > 1e-9) {
    std::ostringstream os;
    os << "simulate: (t1 - t0)/h = " << ratio << " is not an integer";
    fail(ErrorKind::Parameter, os.str());
  }
  return steps;
}

}  // namespace

Vector rk4_step(const OdeField& f, double t, const Vector& x, double h) {
  if (!(h > 0.0)) fail(ErrorKind::Parameter, "rk4_step: step must be positive");
  const Vector k1 = f(t, x);
  check_stage(k1, t);
  const Vector k2 = f(t + 0.5 * h, x + (0.5 * h) * k1);
  check_stage(k2, t + 0.5 * h);
  const Vector k3 = f(t + 0.5 * h, x + (0.5 * h) * k2);
  check_stage(k3, t + 0.5 * h);
  const Vector k4 = f(t + h, x + h * k3);
  check_stage(k4, t + h);
  return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

SimulateResult simulate(const ControlledField& f, const Controller& controller,
                        double t0, double t1, const Vector& x0, double h,
                        const CostIntegrand& cost, const SimulateOptions& opts) {
  const long steps = resolve_step_count(t0, t1, h);
  const std::size_t nq = opts.integrands.size();

  SimulateResult out;
  Trajectory& traj = out.trajectory;
  traj.times.reserve(steps + 1);
  traj.states.reserve(steps + 1);
  traj.controls.reserve(steps + 1);
  traj.running_cost.reserve(steps + 1);

  std::vector<Vector> acc(nq);
  out.integrals.resize(nq);

  Vector x = x0;
  double t = t0;
  double j = 0.0;

  traj.times.push_back(t);
  traj.states.push_back(x);
  traj.running_cost.push_back(0.0);

  for (long i = 0; i < steps; ++i) {
    // Exact node times avoid drift over long horizons.
    t = t0 + static_cast<double>(i) * h;
    const double t_next = t0 + static_cast<double>(i + 1) * h;
    const Vector u = controller(t, x);
    traj.controls.push_back(u);

    const auto fu = [&](double tt, const Vector& xx) { return f(tt, xx, u); };

    const Vector k1 = fu(t, x);
    check_stage(k1, t);
    const Vector k2 = fu(t + 0.5 * h, x + (0.5 * h) * k1);
    check_stage(k2, t + 0.5 * h);
    const Vector k3 = fu(t + 0.5 * h, x + (0.5 * h) * k2);
    check_stage(k3, t + 0.5 * h);
    const Vector k4 = fu(t + h, x + h * k3);
    check_stage(k4, t + h);
    const Vector x_next = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    // Fourth-order dense-output midpoint for the in-step Simpson rule.
    const Vector f_end = fu(t_next, x_next);
    check_stage(f_end, t_next);
    const Vector x_mid = 0.5 * (x + x_next) + (h / 8.0) * (k1 - f_end);
    const double t_mid = t + 0.5 * h;

    j += (h / 6.0) * (cost(t, x, u) + 4.0 * cost(t_mid, x_mid, u) +
                      cost(t_next, x_next, u));
    for (std::size_t q = 0; q < nq; ++q) {
      const Vector g0 = opts.integrands[q](t, x, u);
      const Vector gm = opts.integrands[q](t_mid, x_mid, u);
      const Vector g1 = opts.integrands[q](t_next, x_next, u);
      if (acc[q].size() == 0) acc[q] = Vector::Zero(g0.size());
      acc[q] += (h / 6.0) * (g0 + 4.0 * gm + g1);
      if (out.integrals[q].size() == 0) {
        out.integrals[q] = Matrix::Zero(steps + 1, g0.size());
      }
      out.integrals[q].row(i + 1) = acc[q].transpose();
    }

    if (!x_next.allFinite() ||
        x_next.cwiseAbs().maxCoeff() > opts.blowup_bound) {
      std::ostringstream os;
      os << "simulate: state exceeded blow-up bound " << opts.blowup_bound
         << " at t = " << t_next;
      fail(ErrorKind::Instability, os.str());
    }

    x = x_next;
    traj.times.push_back(t_next);
    traj.states.push_back(x);
    traj.running_cost.push_back(j);
  }

  traj.controls.push_back(controller(t1, x));
  traj.cost = j;
  return out;
}

double quadrature_on_grid(const std::vector<double>& values, double h) {
  const std::size_t n = values.size();
  if (n < 2) return 0.0;
  const std::size_t intervals = n - 1;
  double sum = 0.0;
  std::size_t simpson_end = intervals;  // index of last node used by Simpson
  if (intervals % 2 != 0) {
    if (intervals < 3) {
      return 0.5 * h * (values[0] + values[1]);
    }
    simpson_end = intervals - 3;
  }
  for (std::size_t i = 0; i + 2 <= simpson_end; i += 2) {
    sum += (h / 3.0) * (values[i] + 4.0 * values[i + 1] + values[i + 2]);
  }
  if (simpson_end != intervals) {
    const std::size_t b = simpson_end;
    sum += (3.0 * h / 8.0) * (values[b] + 3.0 * values[b + 1] +
                              3.0 * values[b + 2] + values[b + 3]);
  }
  return sum;
}

}  // namespace splqr
