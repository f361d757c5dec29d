#include "splqr/riccati.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace splqr {

Matrix solve_lyapunov(const Matrix& a, const Matrix& q) {
  const int n = static_cast<int>(a.rows());
  if (a.cols() != n || q.rows() != n || q.cols() != n) {
    fail(ErrorKind::Dimension, "solve_lyapunov: dimension mismatch");
  }
  const double skew = (q - q.transpose()).cwiseAbs().maxCoeff();
  if (skew > 1e-12 * std::max(1.0, q.cwiseAbs().maxCoeff())) {
    fail(ErrorKind::Symmetry, "solve_lyapunov: q is not symmetric");
  }
  const Matrix id = Matrix::Identity(n, n);
  const Matrix at = a.transpose();
  const Matrix lhs = kron(id, at) + kron(at, id);
  const Matrix rhs = -q.reshaped(n * n, 1);
  const Matrix vec_p = solve_linear(lhs, rhs, ErrorKind::Resonance);
  Matrix p = vec_p.reshaped(n, n);
  p = 0.5 * (p + p.transpose());
  const double res = (at * p + p * a + q).cwiseAbs().maxCoeff();
  if (res > 1e-10 * (1.0 + q.cwiseAbs().maxCoeff())) {
    std::ostringstream os;
    os << "solve_lyapunov: residual " << res << " (near-resonant spectrum)";
    fail(ErrorKind::Resonance, os.str());
  }
  return p;
}

bool is_stabilizing(const Matrix& a, const Matrix& b, const Matrix& k) {
  const Matrix ak = a - b * k;
  try {
    const Matrix x = solve_lyapunov(ak, Matrix::Identity(a.rows(), a.rows()));
    return is_posdef(x);
  } catch (const Error&) {
    return false;
  }
}

Matrix find_stabilizing_gain(const Matrix& a, const Matrix& b) {
  const Matrix zero = Matrix::Zero(b.cols(), a.rows());
  if (is_stabilizing(a, b, zero)) return zero;
  for (const double c : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0}) {
    for (const double sign : {1.0, -1.0}) {
      const Matrix k = sign * c * b.transpose();
      if (is_stabilizing(a, b, k)) return k;
    }
  }
  fail(ErrorKind::Stabilization,
       "find_stabilizing_gain: grid search failed; supply an initial gain");
}

double are_residual(const RegulatorProblem& prob, const Matrix& p) {
  const Matrix rinv_bt = solve_linear(prob.R0, prob.B0.transpose());
  return (prob.A0.transpose() * p + p * prob.A0 -
          p * prob.B0 * rinv_bt * p + prob.Q0)
      .cwiseAbs()
      .maxCoeff();
}

RiccatiSolution kleinman(const RegulatorProblem& prob, const Matrix& k0,
                         const KleinmanOptions& opts) {
  const Matrix& a = prob.A0;
  const Matrix& b = prob.B0;
  const Matrix& q = prob.Q0;
  const Matrix& r = prob.R0;
  if (k0.rows() != b.cols() || k0.cols() != a.rows()) {
    fail(ErrorKind::Dimension, "kleinman: initial gain has wrong shape");
  }
  if (!is_stabilizing(a, b, k0)) {
    fail(ErrorKind::Stabilization,
         "kleinman: initial gain does not stabilize the snapshot loop");
  }

  Matrix k = k0;
  Matrix p_prev;
  double residual = 0.0;
  for (int iter = 1; iter <= opts.max_iter; ++iter) {
    const Matrix ak = a - b * k;
    const Matrix p = solve_lyapunov(ak, q + k.transpose() * r * k);
    k = solve_linear(r, b.transpose() * p);
    residual = are_residual(prob, p);
    if (p_prev.size() != 0 &&
        (p - p_prev).cwiseAbs().maxCoeff() <= opts.tol) {
      if (residual > 1e-8) {
        std::ostringstream os;
        os << "kleinman: converged iterate violates ARE residual bound ("
           << residual << ")";
        fail(ErrorKind::Convergence, os.str());
      }
      RiccatiSolution sol;
      sol.P = p;
      sol.K = k;
      sol.branch = Branch::Stabilizing;
      sol.residual = residual;
      sol.iterations = iter - 1;  // index at which P stopped changing
      return sol;
    }
    p_prev = p;
  }
  std::ostringstream os;
  os << "kleinman: no convergence in " << opts.max_iter
     << " iterations, last residual " << residual;
  fail(ErrorKind::Convergence, os.str());
}

RiccatiSolution stabilizing_root(const RegulatorProblem& prob,
                                 const std::optional<Matrix>& k0,
                                 const KleinmanOptions& opts) {
  const Matrix start = k0 ? *k0 : find_stabilizing_gain(prob.A0, prob.B0);
  return kleinman(prob, start, opts);
}

RiccatiSolution antistabilizing_root(const RegulatorProblem& prob,
                                     const KleinmanOptions& opts) {
  if (prob.orientation != Orientation::Terminal) {
    fail(ErrorKind::Parameter,
         "antistabilizing_root: requires a terminal-orientation problem");
  }
  RegulatorProblem flipped = prob;
  flipped.A0 = -prob.A0;
  flipped.orientation = Orientation::Initial;
  const RiccatiSolution bar = stabilizing_root(flipped, {}, opts);

  RiccatiSolution sol;
  sol.P = -bar.P;
  sol.K = solve_linear(prob.R0, prob.B0.transpose() * sol.P);
  sol.branch = Branch::Antistabilizing;
  sol.iterations = bar.iterations;
  sol.residual = are_residual(prob, sol.P);
  if (sol.residual > 1e-8) {
    std::ostringstream os;
    os << "antistabilizing_root: ARE residual " << sol.residual;
    fail(ErrorKind::Convergence, os.str());
  }
  const int n = static_cast<int>(sol.P.rows());
  if (!is_posdef(-sol.P + 1e-10 * Matrix::Identity(n, n))) {
    fail(ErrorKind::Convergence,
         "antistabilizing_root: -P is not positive semidefinite");
  }
  return sol;
}

}  // namespace splqr
