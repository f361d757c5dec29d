#include "splqr/composite.hpp"

#include <algorithm>
#include <cmath>

namespace splqr {

namespace {

Vector interp_at(const std::vector<double>& ts, const std::vector<Vector>& vs,
                 double t) {
  const double h = ts[1] - ts[0];
  const double pos = (t - ts.front()) / h;
  const long i = std::clamp<long>(static_cast<long>(std::floor(pos)), 0,
                                  static_cast<long>(ts.size()) - 2);
  const double w = pos - static_cast<double>(i);
  return (1.0 - w) * vs[i] + w * vs[i + 1];
}

}  // namespace

Vector LayerTrajectories::xa_at(double tau) const {
  return interp_at(taus, xa, tau);
}

Vector LayerTrajectories::xb_at(double tau) const {
  return interp_at(taus, xb, tau);
}

LayerTrajectories boundary_trajectories(const Vector& x0, const Vector& xT,
                                        const Matrix& ka, const Matrix& kb,
                                        const RegulatorProblem& init,
                                        const RegulatorProblem& term,
                                        double epsilon, double h_tau) {
  if (init.orientation != Orientation::Initial ||
      term.orientation != Orientation::Terminal) {
    fail(ErrorKind::Parameter,
         "boundary_trajectories: problems must be (initial, terminal)");
  }
  const long steps = std::lround(1.0 / h_tau);
  if (std::abs(1.0 / h_tau - static_cast<double>(steps)) > 1e-9) {
    fail(ErrorKind::Parameter, "boundary_trajectories: h_tau must divide 1");
  }
  const auto [ai, bi] = init.clock_dynamics();
  const auto [at, bt] = term.clock_dynamics();
  const Matrix loop_a = ai - bi * ka;  // gamma clock
  const Matrix loop_b = at - bt * kb;  // beta clock
  const double h_clock = h_tau / epsilon;

  const auto zero_cost = [](double, const Vector&, const Vector&) {
    return 0.0;
  };
  const Controller no_control = [](double, const Vector& x) {
    return Vector::Zero(1).eval();
  };

  const auto run_layer = [&](const Matrix& loop, const Vector& start) {
    const ControlledField f = [&loop](double, const Vector& x,
                                      const Vector&) -> Vector {
      return loop * x;
    };
    return simulate(f, no_control, 0.0, static_cast<double>(steps) * h_clock,
                    start, h_clock, zero_cost)
        .trajectory.states;
  };

  const auto xa_clock = run_layer(loop_a, x0);   // samples in gamma
  const auto xb_clock = run_layer(loop_b, xT);   // samples in beta

  LayerTrajectories out;
  out.h_tau = h_tau;
  out.taus.resize(steps + 1);
  out.xa.resize(steps + 1);
  out.xb.resize(steps + 1);
  for (long i = 0; i <= steps; ++i) {
    out.taus[i] = static_cast<double>(i) * h_tau;
    out.xa[i] = xa_clock[i];
    out.xb[i] = xb_clock[steps - i];  // beta = (1 - tau)/eps
  }
  return out;
}

CrossoverResult crossover(const LayerTrajectories& layers) {
  const auto& taus = layers.taus;
  const std::size_t count = taus.size();
  if (count < 2 || layers.xa.size() != count || layers.xb.size() != count) {
    fail(ErrorKind::Dimension, "crossover: layers not sampled on a grid");
  }
  const int n = static_cast<int>(layers.xa.front().size());

  double sup_a = 0.0, sup_b = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    sup_a = std::max(sup_a, layers.xa[i].cwiseAbs().maxCoeff());
    sup_b = std::max(sup_b, layers.xb[i].cwiseAbs().maxCoeff());
  }
  if (sup_a == 0.0 && sup_b == 0.0) {
    return {0.5, true};  // identically flat: fixed convention
  }

  if (n == 1) {
    for (std::size_t i = 0; i + 1 < count; ++i) {
      const double g0 = layers.xa[i][0] - layers.xb[i][0];
      const double g1 = layers.xa[i + 1][0] - layers.xb[i + 1][0];
      if (g0 == 0.0) return {taus[i], false};
      if (g0 * g1 < 0.0) {
        // root of the linear interpolant on the bracketing segment
        const double w = g0 / (g0 - g1);
        return {taus[i] + w * (taus[i + 1] - taus[i]), false};
      }
    }
    if (layers.xa.back()[0] - layers.xb.back()[0] == 0.0) {
      return {taus.back(), false};
    }
  }

  // Vector case (or scalar without a sign change): minimize |xa - xb|.
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < count; ++i) {
    const double d = (layers.xa[i] - layers.xb[i]).norm();
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  const bool at_edge = best == 0 || best + 1 == count;
  double lo = taus[best == 0 ? 0 : best - 1];
  double hi = taus[best + 1 >= count ? count - 1 : best + 1];
  const auto dist = [&](double tau) {
    return (layers.xa_at(tau) - layers.xb_at(tau)).norm();
  };
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  for (int it = 0; it < 60 && (b - a) > 1e-10; ++it) {
    if (dist(c) < dist(d)) {
      b = d;
    } else {
      a = c;
    }
    c = b - gr * (b - a);
    d = a + gr * (b - a);
  }
  const double t_c = std::clamp(0.5 * (a + b), 0.0, 1.0);
  return {t_c, at_edge};
}

CompositeController build_composite(const LTVSystem& sys,
                                    const BoundarySpec& spec, const Matrix& ka,
                                    const Matrix& kb, CompositionMode mode,
                                    double h_tau) {
  const RegulatorProblem init = freeze(sys, Orientation::Initial);
  const RegulatorProblem term = freeze(sys, Orientation::Terminal);
  CompositeController ctrl;
  ctrl.Ka = ka;
  ctrl.Kb = kb;
  ctrl.mode = mode;
  ctrl.layers = boundary_trajectories(spec.x0, spec.xT, ka, kb, init, term,
                                      spec.epsilon, h_tau);
  const CrossoverResult cr = crossover(ctrl.layers);
  ctrl.t_c = cr.t_c;
  ctrl.degenerate_crossover = cr.degenerate;
  return ctrl;
}

Trajectory simulate_composite(const LTVSystem& sys, const BoundarySpec& spec,
                              const CompositeController& ctrl, double h) {
  const double eps = spec.epsilon;
  const double T = spec.T;

  std::function<Vector(double, const Vector&)> law;
  if (ctrl.mode == CompositionMode::Switching) {
    law = [&ctrl](double tau, const Vector& x) -> Vector {
      return tau < ctrl.t_c ? Vector(-(ctrl.Ka * x))
                            : Vector(-(ctrl.Kb * x));
    };
  } else {
    law = [&ctrl](double tau, const Vector&) -> Vector {
      return -(ctrl.Ka * ctrl.layers.xa_at(tau)) -
             (ctrl.Kb * ctrl.layers.xb_at(tau));
    };
  }

  const ControlledField f = [&sys, &law, eps](double tau, const Vector& x,
                                              const Vector&) -> Vector {
    return (sys.A(tau) * x + sys.B(tau) * law(tau, x)) / eps;
  };
  const Controller record = [&law](double tau, const Vector& x) {
    return law(tau, x);
  };
  const CostIntegrand cost = [&sys, &law, T](double tau, const Vector& x,
                                             const Vector&) {
    const Vector u = law(tau, x);
    return T * ((x.dot(sys.Q(tau) * x)) + u.dot(sys.R(tau) * u));
  };

  return simulate(f, record, 0.0, 1.0, spec.x0, h, cost).trajectory;
}

namespace {

double sup_diff(const std::vector<double>& ta, const std::vector<Vector>& va,
                const std::vector<double>& tb, const std::vector<Vector>& vb) {
  // Evaluate on the finer grid; interpolate the other linearly.
  const bool a_finer = ta.size() >= tb.size();
  const auto& fine_t = a_finer ? ta : tb;
  const auto& fine_v = a_finer ? va : vb;
  const auto& coarse_t = a_finer ? tb : ta;
  const auto& coarse_v = a_finer ? vb : va;
  double sup = 0.0;
  for (std::size_t i = 0; i < fine_t.size(); ++i) {
    const Vector other = interp_at(coarse_t, coarse_v, fine_t[i]);
    sup = std::max(sup, (fine_v[i] - other).cwiseAbs().maxCoeff());
  }
  return sup;
}

}  // namespace

ApproxError approx_error(const Trajectory& traj, const Trajectory& optimal) {
  if (traj.states.empty() || optimal.states.empty()) {
    fail(ErrorKind::Dimension, "approx_error: empty trajectory");
  }
  if (traj.states.front().size() != optimal.states.front().size() ||
      traj.controls.front().size() != optimal.controls.front().size()) {
    fail(ErrorKind::Dimension, "approx_error: dimension mismatch");
  }
  ApproxError err;
  err.sup_state_err =
      sup_diff(traj.times, traj.states, optimal.times, optimal.states);
  err.sup_control_err =
      sup_diff(traj.times, traj.controls, optimal.times, optimal.controls);
  err.cost_gap = traj.cost - optimal.cost;
  return err;
}

}  // namespace splqr
