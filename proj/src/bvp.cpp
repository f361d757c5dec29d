#include "splqr/bvp.hpp"

#include <cmath>
#include <sstream>

namespace splqr {

Matrix hamiltonian_matrix(const LTVSystem& sys, double tau) {
  const Matrix a = sys.A(tau);
  const Matrix b = sys.B(tau);
  const Matrix q = sys.Q(tau);
  const Matrix rinv_bt = solve_linear(sys.R(tau), b.transpose());
  const int n = sys.n;
  Matrix mh(2 * n, 2 * n);
  mh.topLeftCorner(n, n) = a;
  mh.topRightCorner(n, n) = -b * rinv_bt;
  mh.bottomLeftCorner(n, n) = -q;
  mh.bottomRightCorner(n, n) = -a.transpose();
  return mh;
}

namespace {

void check_epsilon(double epsilon) {
  if (epsilon < 0.05 - 1e-12) {
    std::ostringstream os;
    os << "bvp: epsilon = " << epsilon
       << " below the supported minimum 0.05 (shooting would overflow)";
    fail(ErrorKind::Parameter, os.str());
  }
  if (epsilon > 1.0 + 1e-12) {
    fail(ErrorKind::Parameter, "bvp: epsilon must lie in (0, 1]");
  }
}

}  // namespace

Matrix transition_matrix(const LTVSystem& sys, double epsilon, double h) {
  check_epsilon(epsilon);
  const long steps = std::lround(1.0 / h);
  if (steps < 1 || std::abs(1.0 / h - static_cast<double>(steps)) > 1e-9) {
    fail(ErrorKind::Parameter, "transition_matrix: h must divide 1");
  }
  const int d = 2 * sys.n;
  Matrix phi = Matrix::Identity(d, d);
  // Matrix-valued RK4: identical arithmetic to integrating each column.
  for (long i = 0; i < steps; ++i) {
    const double tau = static_cast<double>(i) * h;
    const Matrix k1 = hamiltonian_matrix(sys, tau) * phi / epsilon;
    const Matrix k2 =
        hamiltonian_matrix(sys, tau + 0.5 * h) * (phi + 0.5 * h * k1) / epsilon;
    const Matrix k3 =
        hamiltonian_matrix(sys, tau + 0.5 * h) * (phi + 0.5 * h * k2) / epsilon;
    const Matrix k4 =
        hamiltonian_matrix(sys, tau + h) * (phi + h * k3) / epsilon;
    phi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!phi.allFinite() || phi.cwiseAbs().maxCoeff() > 1e250) {
      std::ostringstream os;
      os << "transition_matrix: hyperbolic blow-up at tau = " << tau + h;
      fail(ErrorKind::Instability, os.str());
    }
  }
  return phi;
}

BVPSolution solve_bvp(const LTVSystem& sys, const BoundarySpec& spec,
                      double h) {
  check_epsilon(spec.epsilon);
  const int n = sys.n;
  if (spec.x0.size() != n || spec.xT.size() != n) {
    fail(ErrorKind::Dimension, "solve_bvp: boundary dimension mismatch");
  }
  const Matrix phi = transition_matrix(sys, spec.epsilon, h);
  const Matrix phi11 = phi.topLeftCorner(n, n);
  const Matrix phi12 = phi.topRightCorner(n, n);

  Eigen::JacobiSVD<Matrix> svd(phi12);
  const auto& sv = svd.singularValues();
  if (sv(sv.size() - 1) <= kRankTolerance * sv(0)) {
    fail(ErrorKind::UnreachableBoundary,
         "solve_bvp: singular transition block Phi12; the target state is "
         "not reachable over this horizon");
  }

  const Vector p0 =
      solve_linear(phi12, spec.xT - phi11 * spec.x0,
                   ErrorKind::UnreachableBoundary);

  const double eps = spec.epsilon;
  const ControlledField flow = [&sys, eps](double tau, const Vector& z,
                                           const Vector&) -> Vector {
    return hamiltonian_matrix(sys, tau) * z / eps;
  };
  const auto control_of = [&sys, n](double tau, const Vector& z) -> Vector {
    const Vector p = z.tail(n);
    return -solve_linear(sys.R(tau), sys.B(tau).transpose() * p);
  };
  const Controller record = [&control_of](double tau, const Vector& z) {
    return control_of(tau, z);
  };
  const CostIntegrand cost = [&sys, &control_of, &spec, n](
                                 double tau, const Vector& z, const Vector&) {
    const Vector x = z.head(n);
    const Vector u = control_of(tau, z);
    return spec.T * (x.dot(sys.Q(tau) * x) + u.dot(sys.R(tau) * u));
  };

  Vector z0(2 * n);
  z0 << spec.x0, p0;
  SimulateOptions opts;
  opts.blowup_bound = 1e250;
  const SimulateResult run =
      simulate(flow, record, 0.0, 1.0, z0, h, cost, opts);

  BVPSolution sol;
  sol.p0 = p0;
  sol.cost = run.trajectory.cost;
  sol.phi12_condition = sv(0) / sv(sv.size() - 1);
  sol.trajectory.times = run.trajectory.times;
  sol.trajectory.running_cost = run.trajectory.running_cost;
  sol.trajectory.cost = run.trajectory.cost;
  sol.trajectory.controls = run.trajectory.controls;
  sol.trajectory.states.reserve(run.trajectory.states.size());
  sol.costates.reserve(run.trajectory.states.size());
  for (const Vector& z : run.trajectory.states) {
    sol.trajectory.states.push_back(z.head(n));
    sol.costates.push_back(z.tail(n));
  }
  sol.boundary_residual = (sol.trajectory.states.back() - spec.xT).norm();
  if (sol.boundary_residual > 1e-6) {
    std::ostringstream os;
    os << "solve_bvp: terminal miss " << sol.boundary_residual
       << " exceeds 1e-6 (shooting precision floor at epsilon = "
       << spec.epsilon << ")";
    fail(ErrorKind::UnreachableBoundary, os.str());
  }
  return sol;
}

OptimalityResidual optimality_residual(const BVPSolution& sol,
                                       const LTVSystem& sys, double epsilon) {
  const auto& ts = sol.trajectory.times;
  const auto& xs = sol.trajectory.states;
  const auto& ps = sol.costates;
  const auto& us = sol.trajectory.controls;
  const std::size_t count = ts.size();
  if (count < 5) {
    fail(ErrorKind::Dimension, "optimality_residual: trajectory too short");
  }
  const double h = ts[1] - ts[0];

  OptimalityResidual res;
  // Costate equation, fourth-order central differences on interior nodes.
  for (std::size_t i = 2; i + 2 < count; ++i) {
    const Vector dp = (-ps[i + 2] + 8.0 * ps[i + 1] - 8.0 * ps[i - 1] +
                       ps[i - 2]) /
                      (12.0 * h);
    const double tau = ts[i];
    const Vector rhs =
        -(sys.Q(tau) * xs[i] + sys.A(tau).transpose() * ps[i]) / epsilon;
    res.costate_res =
        std::max(res.costate_res, (dp - rhs).cwiseAbs().maxCoeff());
  }
  for (std::size_t i = 0; i < count; ++i) {
    const double tau = ts[i];
    const Vector stat =
        us[i] + solve_linear(sys.R(tau), sys.B(tau).transpose() * ps[i]);
    res.stationarity_res =
        std::max(res.stationarity_res, stat.cwiseAbs().maxCoeff());
  }
  return res;
}

}  // namespace splqr
