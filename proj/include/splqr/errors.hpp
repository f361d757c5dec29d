#pragma once

#include <stdexcept>
#include <string>

namespace splqr {

enum class ErrorKind {
  Config,
  Dimension,
  Symmetry,
  Rank,
  Resonance,
  Stabilization,
  Convergence,
  InsufficientData,
  Instability,
  Divergence,
  UnreachableBoundary,
  Range,
  Parameter,
};

const char* to_string(ErrorKind kind);

/// Exception carrying a typed failure kind; the CLI maps kinds onto exit
/// statuses (2 config, 3 insufficient data, 4 non-convergence, 5 instability,
/// 6 unreachable boundary).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  int exit_code() const noexcept;

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) {
  throw Error(kind, msg);
}

}  // namespace splqr
