#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "splqr/matlib.hpp"

namespace splqr {

using MatrixFn = std::function<Matrix(double)>;

/// Linear time-varying plant and quadratic weights on the scaled clock
/// tau in [0, 1]: x' = A(tau) x + B(tau) u, running cost x'Qx + u'Ru.
struct LTVSystem {
  int n = 0;
  int m = 0;
  MatrixFn A;
  MatrixFn B;
  MatrixFn Q;
  MatrixFn R;
};

/// Two-point boundary data and horizon. T and epsilon satisfy epsilon*T = 1.
struct BoundarySpec {
  Vector x0;
  Vector xT;
  double T = 1.0;
  double epsilon = 1.0;
};

BoundarySpec make_boundary(const Vector& x0, const Vector& xT, double epsilon);

enum class Orientation { Initial, Terminal };

/// Frozen endpoint snapshot. For the terminal orientation the stored
/// matrices are A(1), B(1), Q(1), R(1) and the regulator clock runs
/// backwards: x' = -A(1) x - B(1) u in beta = (1 - tau)/epsilon.
struct RegulatorProblem {
  Matrix A0;
  Matrix B0;
  Matrix Q0;
  Matrix R0;
  Orientation orientation = Orientation::Initial;

  /// Dynamics matrices of the regulator in its own clock
  /// (gamma forward, beta sign-flipped).
  std::pair<Matrix, Matrix> clock_dynamics() const {
    if (orientation == Orientation::Initial) return {A0, B0};
    return {-A0, -B0};
  }
};

/// Check the standing assumptions at tau in {0, 0.1, ..., 1}: Q symmetric
/// positive semidefinite, R symmetric positive definite, all entries finite.
void validate_system(const LTVSystem& sys);

RegulatorProblem freeze(const LTVSystem& sys, Orientation orientation);

/// Builtin example: a body whose mass dissipates as m(t) = -1/(1 + 0.2 t),
/// giving A(tau) = -(1 + 0.2 tau), B = Q = R = 1, x0 = 0.5, xT = 0.9.
std::pair<LTVSystem, BoundarySpec> mass_example(double epsilon);

/// Build a system whose matrix entries are polynomials in tau
/// (coefficients in ascending powers, degree <= 6).
using PolyTable = std::vector<std::vector<std::vector<double>>>;
LTVSystem system_from_polynomials(int n, int m, const PolyTable& a,
                                  const PolyTable& b, const PolyTable& q,
                                  const PolyTable& r);

double to_scaled(double t, double T);

struct Clocks {
  double gamma;
  double beta;
};

/// gamma = tau/epsilon, beta = (1 - tau)/epsilon (so gamma + beta = 1/epsilon).
Clocks clocks(double tau, double epsilon);

}  // namespace splqr
