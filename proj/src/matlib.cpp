#include "splqr/matlib.hpp"

#include <cmath>
#include <sstream>

namespace splqr {

void ensure_finite(const Matrix& a, const char* what) {
  if (!a.allFinite()) {
    fail(ErrorKind::Parameter, std::string(what) + ": non-finite entries");
  }
}

Matrix kron(const Matrix& a, const Matrix& b) {
  if (a.size() == 0 || b.size() == 0) {
    fail(ErrorKind::Dimension, "kron: empty operand");
  }
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

static void require_symmetric(const Matrix& p, const char* who) {
  if (p.rows() != p.cols()) {
    fail(ErrorKind::Dimension, std::string(who) + ": matrix not square");
  }
  const double scale = p.cwiseAbs().maxCoeff();
  const double skew = (p - p.transpose()).cwiseAbs().maxCoeff();
  if (skew > 1e-12 * scale) {
    std::ostringstream os;
    os << who << ": asymmetry " << skew << " exceeds 1e-12 * " << scale;
    fail(ErrorKind::Symmetry, os.str());
  }
}

SymVec sym_reduce(const Matrix& p) {
  require_symmetric(p, "sym_reduce");
  const int n = static_cast<int>(p.rows());
  SymVec s;
  s.n = n;
  s.values.resize(SymVec::length(n));
  int k = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      s.values[k++] = p(i, j);
    }
  }
  return s;
}

Matrix sym_expand(const SymVec& s) {
  if (s.values.size() != SymVec::length(s.n)) {
    fail(ErrorKind::Dimension, "sym_expand: length does not match dimension");
  }
  Matrix p(s.n, s.n);
  int k = 0;
  for (int i = 0; i < s.n; ++i) {
    for (int j = i; j < s.n; ++j) {
      p(i, j) = s.values[k];
      p(j, i) = s.values[k];
      ++k;
    }
  }
  return p;
}

Vector lstsq(const Matrix& a, const Vector& b) {
  if (a.rows() < a.cols()) {
    fail(ErrorKind::Dimension, "lstsq: fewer rows than unknowns");
  }
  if (a.rows() != b.size()) {
    fail(ErrorKind::Dimension, "lstsq: rhs length mismatch");
  }
  ensure_finite(a, "lstsq");
  Eigen::ColPivHouseholderQR<Matrix> qr(a);
  qr.setThreshold(kRankTolerance);
  const auto rank = qr.rank();
  if (rank < a.cols()) {
    std::ostringstream os;
    os << "lstsq: rank deficient, numerical rank " << rank << " of "
       << a.cols() << " unknowns";
    fail(ErrorKind::Rank, os.str());
  }
  return qr.solve(b);
}

Matrix solve_linear(const Matrix& a, const Matrix& b, ErrorKind singular_kind) {
  if (a.rows() != a.cols() || a.rows() != b.rows()) {
    fail(ErrorKind::Dimension, "solve_linear: dimension mismatch");
  }
  ensure_finite(a, "solve_linear");
  Eigen::FullPivLU<Matrix> lu(a);
  lu.setThreshold(kRankTolerance);
  if (!lu.isInvertible()) {
    fail(singular_kind, "solve_linear: numerically singular system");
  }
  return lu.solve(b);
}

bool is_posdef(const Matrix& p) {
  require_symmetric(p, "is_posdef");
  Eigen::LLT<Matrix> llt(p);
  if (llt.info() != Eigen::Success) return false;
  // LLT can report success on a semidefinite boundary; insist on strictly
  // positive pivots.
  return llt.matrixLLT().diagonal().minCoeff() > 0.0;
}

int numerical_rank(const Matrix& a) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(a);
  const auto& sv = svd.singularValues();
  const double cutoff = kRankTolerance * sv(0);
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) ++rank;
  }
  return rank;
}

}  // namespace splqr
