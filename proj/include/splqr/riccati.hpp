#pragma once

#include <optional>

#include "splqr/systems.hpp"

namespace splqr {

enum class Branch { Stabilizing, Antistabilizing };

/// An algebraic Riccati root together with its gain and certificate data.
struct RiccatiSolution {
  Matrix P;
  Matrix K;
  Branch branch = Branch::Stabilizing;
  double residual = 0.0;
  int iterations = 0;
};

/// Solve a'P + Pa + q = 0 through the n^2 x n^2 Kronecker system
/// (I (x) a' + a' (x) I) vec(P) = -vec(q). A numerically singular system
/// signals a resonant spectrum (some lambda_i + lambda_j = 0).
Matrix solve_lyapunov(const Matrix& a, const Matrix& q);

/// True iff a - b*k is Hurwitz, certified by a Lyapunov solve against -I.
bool is_stabilizing(const Matrix& a, const Matrix& b, const Matrix& k);

/// Search k = c * b' over a small coefficient grid for a stabilizing gain
/// (adequate for the small systems this library targets).
Matrix find_stabilizing_gain(const Matrix& a, const Matrix& b);

struct KleinmanOptions {
  double tol = 1e-10;
  int max_iter = 60;
};

/// Newton-type policy iteration on the frozen snapshot (A0, B0, Q0, R0):
/// repeatedly solve A_k'P + P A_k + Q + K'RK = 0 with A_k = A0 - B0 K and
/// update K = R^-1 B0' P. Requires a stabilizing initial gain; converges
/// monotonically to the stabilizing ARE root.
RiccatiSolution kleinman(const RegulatorProblem& prob, const Matrix& k0,
                         const KleinmanOptions& opts = {});

/// Stabilizing root with an automatically searched initial gain when k0 is
/// not supplied.
RiccatiSolution stabilizing_root(const RegulatorProblem& prob,
                                 const std::optional<Matrix>& k0 = {},
                                 const KleinmanOptions& opts = {});

/// Anti-stabilizing root of the tau = 1 ARE: the stabilizing root Pbar of
/// the sign-flipped regulator (A -> -A(1)) is computed and P_b = -Pbar,
/// K_b = R^-1 B' P_b returned, verified against the original ARE.
RiccatiSolution antistabilizing_root(const RegulatorProblem& prob,
                                     const KleinmanOptions& opts = {});

/// max|A'P + PA - PBR^-1B'P + Q| for the snapshot's own matrices.
double are_residual(const RegulatorProblem& prob, const Matrix& p);

}  // namespace splqr
