#include "splqr/systems.hpp"

#include <cmath>
#include <sstream>

namespace splqr {

BoundarySpec make_boundary(const Vector& x0, const Vector& xT, double epsilon) {
  if (!(epsilon > 0.0)) {
    fail(ErrorKind::Config, "boundary: epsilon must be positive");
  }
  if (x0.size() != xT.size()) {
    fail(ErrorKind::Dimension, "boundary: x0 and xT dimensions differ");
  }
  BoundarySpec spec;
  spec.x0 = x0;
  spec.xT = xT;
  spec.epsilon = epsilon;
  spec.T = 1.0 / epsilon;
  if (std::abs(spec.epsilon * spec.T - 1.0) > 1e-15) {
    fail(ErrorKind::Config, "boundary: epsilon * T does not round-trip to 1");
  }
  return spec;
}

void validate_system(const LTVSystem& sys) {
  if (sys.n < 1 || sys.m < 1) {
    fail(ErrorKind::Config, "system: dimensions must be at least 1");
  }
  for (int k = 0; k <= 10; ++k) {
    const double tau = 0.1 * k;
    const Matrix a = sys.A(tau);
    const Matrix b = sys.B(tau);
    const Matrix q = sys.Q(tau);
    const Matrix r = sys.R(tau);
    if (a.rows() != sys.n || a.cols() != sys.n || b.rows() != sys.n ||
        b.cols() != sys.m || q.rows() != sys.n || q.cols() != sys.n ||
        r.rows() != sys.m || r.cols() != sys.m) {
      fail(ErrorKind::Config, "system: matrix dimensions inconsistent");
    }
    ensure_finite(a, "system A");
    ensure_finite(b, "system B");
    ensure_finite(q, "system Q");
    ensure_finite(r, "system R");
    const double qscale = std::max(1.0, q.cwiseAbs().maxCoeff());
    if (!is_posdef(q + 1e-10 * qscale * Matrix::Identity(sys.n, sys.n))) {
      std::ostringstream os;
      os << "system: Q(" << tau << ") is not positive semidefinite";
      fail(ErrorKind::Config, os.str());
    }
    if (!is_posdef(r)) {
      std::ostringstream os;
      os << "system: R(" << tau << ") is not positive definite";
      fail(ErrorKind::Config, os.str());
    }
  }
}

RegulatorProblem freeze(const LTVSystem& sys, Orientation orientation) {
  const double tau = orientation == Orientation::Initial ? 0.0 : 1.0;
  RegulatorProblem prob;
  prob.A0 = sys.A(tau);
  prob.B0 = sys.B(tau);
  prob.Q0 = sys.Q(tau);
  prob.R0 = sys.R(tau);
  prob.orientation = orientation;
  return prob;
}

std::pair<LTVSystem, BoundarySpec> mass_example(double epsilon) {
  LTVSystem sys;
  sys.n = 1;
  sys.m = 1;
  sys.A = [](double tau) {
    return Matrix::Constant(1, 1, -(1.0 + 0.2 * tau));
  };
  sys.B = [](double) { return Matrix::Identity(1, 1); };
  sys.Q = [](double) { return Matrix::Identity(1, 1); };
  sys.R = [](double) { return Matrix::Identity(1, 1); };
  const BoundarySpec spec = make_boundary(Vector::Constant(1, 0.5),
                                          Vector::Constant(1, 0.9), epsilon);
  return {sys, spec};
}

namespace {

MatrixFn poly_matrix_fn(int rows, int cols, const PolyTable& table,
                        const char* name) {
  if (static_cast<int>(table.size()) != rows) {
    fail(ErrorKind::Config, std::string("system ") + name + ": row count");
  }
  for (const auto& row : table) {
    if (static_cast<int>(row.size()) != cols) {
      fail(ErrorKind::Config, std::string("system ") + name + ": column count");
    }
    for (const auto& coeffs : row) {
      if (coeffs.empty() || coeffs.size() > 7) {
        fail(ErrorKind::Config, std::string("system ") + name +
                                    ": entry degree must be 0..6");
      }
    }
  }
  return [rows, cols, table](double tau) {
    Matrix out(rows, cols);
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) {
        double v = 0.0;
        for (auto it = table[i][j].rbegin(); it != table[i][j].rend(); ++it) {
          v = v * tau + *it;
        }
        out(i, j) = v;
      }
    }
    return out;
  };
}

}  // namespace

LTVSystem system_from_polynomials(int n, int m, const PolyTable& a,
                                  const PolyTable& b, const PolyTable& q,
                                  const PolyTable& r) {
  LTVSystem sys;
  sys.n = n;
  sys.m = m;
  sys.A = poly_matrix_fn(n, n, a, "A");
  sys.B = poly_matrix_fn(n, m, b, "B");
  sys.Q = poly_matrix_fn(n, n, q, "Q");
  sys.R = poly_matrix_fn(m, m, r, "R");
  validate_system(sys);
  return sys;
}

double to_scaled(double t, double T) {
  if (!(T > 0.0)) fail(ErrorKind::Range, "to_scaled: horizon must be positive");
  if (t < -1e-12 || t > T * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "to_scaled: t = " << t << " outside [0, " << T << "]";
    fail(ErrorKind::Range, os.str());
  }
  return t / T;
}

Clocks clocks(double tau, double epsilon) {
  if (!(epsilon > 0.0)) {
    fail(ErrorKind::Range, "clocks: epsilon must be positive");
  }
  if (tau < -1e-12 || tau > 1.0 + 1e-12) {
    std::ostringstream os;
    os << "clocks: tau = " << tau << " outside [0, 1]";
    fail(ErrorKind::Range, os.str());
  }
  return {tau / epsilon, (1.0 - tau) / epsilon};
}

}  // namespace splqr
