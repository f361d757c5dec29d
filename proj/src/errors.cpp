#include "splqr/errors.hpp"

namespace splqr {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config: return "config";
    case ErrorKind::Dimension: return "dimension";
    case ErrorKind::Symmetry: return "symmetry";
    case ErrorKind::Rank: return "rank";
    case ErrorKind::Resonance: return "resonance";
    case ErrorKind::Stabilization: return "stabilization";
    case ErrorKind::Convergence: return "convergence";
    case ErrorKind::InsufficientData: return "insufficient_data";
    case ErrorKind::Instability: return "instability";
    case ErrorKind::Divergence: return "divergence";
    case ErrorKind::UnreachableBoundary: return "unreachable_boundary";
    case ErrorKind::Range: return "range";
    case ErrorKind::Parameter: return "parameter";
  }
  return "unknown";
}

int Error::exit_code() const noexcept {
  switch (kind_) {
    case ErrorKind::Config:
    case ErrorKind::Dimension:
    case ErrorKind::Symmetry:
    case ErrorKind::Range:
    case ErrorKind::Parameter:
      return 2;
    case ErrorKind::InsufficientData:
    case ErrorKind::Rank:
      return 3;
    case ErrorKind::Convergence:
    case ErrorKind::Stabilization:
    case ErrorKind::Resonance:
      return 4;
    case ErrorKind::Instability:
    case ErrorKind::Divergence:
      return 5;
    case ErrorKind::UnreachableBoundary:
      return 6;
  }
  return 1;
}

}  // namespace splqr
