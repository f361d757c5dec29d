#include "splqr/learner.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace splqr {

Vector ExcitationSignal::evaluate(double t) const {
  Vector u = Vector::Zero(channels);
  for (int c = 0; c < channels; ++c) {
    double s = 0.0;
    for (int i = 0; i < count; ++i) {
      s += std::sin(frequencies(c, i) * t);
    }
    u[c] = amplitude * s;
  }
  return u;
}

ExcitationSignal make_excitation(std::uint64_t seed, int count,
                                 double amplitude, double freq_min,
                                 double freq_max, int channels) {
  if (count < 1) fail(ErrorKind::Parameter, "excitation: count must be >= 1");
  if (channels < 1) {
    fail(ErrorKind::Parameter, "excitation: channels must be >= 1");
  }
  if (!(0.0 < freq_min && freq_min < freq_max)) {
    fail(ErrorKind::Parameter,
         "excitation: frequency range must satisfy 0 < min < max");
  }
  ExcitationSignal sig;
  sig.seed = seed;
  sig.count = count;
  sig.channels = channels;
  sig.amplitude = amplitude;
  sig.frequencies.resize(channels, count);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(freq_min, freq_max);
  for (int c = 0; c < channels; ++c) {
    for (int i = 0; i < count; ++i) {
      sig.frequencies(c, i) = dist(rng);
    }
  }
  return sig;
}

namespace {

// Row of (2 - delta_ij) * M(i, j) over the upper triangle, so that
// row * svec(P) reproduces the full quadratic form x'Px.
Eigen::RowVectorXd quad_reduce(const Matrix& m) {
  const int n = static_cast<int>(m.rows());
  Eigen::RowVectorXd row(SymVec::length(n));
  int k = 0;
  for (int i = 0; i < n; ++i) {
    row[k++] = m(i, i);
    for (int j = i + 1; j < n; ++j) {
      row[k++] = m(i, j) + m(j, i);
    }
  }
  return row;
}

Matrix merge_sym_columns(const Matrix& ixx, int n) {
  Matrix out(ixx.rows(), SymVec::length(n));
  int k = 0;
  for (int i = 0; i < n; ++i) {
    out.col(k++) = ixx.col(i * n + i);
    for (int j = i + 1; j < n; ++j) {
      out.col(k++) = ixx.col(i * n + j) + ixx.col(j * n + i);
    }
  }
  return out;
}

}  // namespace

DataLog collect(const RegulatorProblem& prob, const ExcitationSignal& u0,
                double horizon, double dt, const CollectOptions& opts) {
  const int n = static_cast<int>(prob.A0.rows());
  const int m = static_cast<int>(prob.B0.cols());
  if (u0.channels != m) {
    fail(ErrorKind::Dimension, "collect: excitation channel count != m");
  }
  if (!(dt > 0.0) || !(horizon > 0.0)) {
    fail(ErrorKind::Parameter, "collect: horizon and dt must be positive");
  }
  const double steps_per_window = dt / opts.step;
  const long spw = std::lround(steps_per_window);
  if (spw < 1 || std::abs(steps_per_window - static_cast<double>(spw)) > 1e-9) {
    fail(ErrorKind::Parameter,
         "collect: dt must be an integer multiple of the integrator step");
  }

  double span = horizon;
  if (opts.time_varying_plant != nullptr) {
    if (!(opts.epsilon > 0.0)) {
      fail(ErrorKind::Parameter,
           "collect: time-varying plant requires epsilon");
    }
    span = std::min(horizon, opts.layer_fraction / opts.epsilon);
  }
  const long windows = static_cast<long>(std::floor(span / dt + 1e-9));
  if (windows < 1) {
    fail(ErrorKind::InsufficientData, "collect: horizon shorter than one window");
  }
  const double t_end = static_cast<double>(windows) * dt;

  // Black-box plant: only this closure touches the dynamics matrices.
  ControlledField field;
  if (opts.time_varying_plant != nullptr) {
    const LTVSystem* sys = opts.time_varying_plant;
    const double eps = opts.epsilon;
    const bool terminal = prob.orientation == Orientation::Terminal;
    field = [sys, eps, terminal](double clock, const Vector& x,
                                 const Vector& u) -> Vector {
      const double tau =
          terminal ? 1.0 - eps * clock : eps * clock;
      if (terminal) return -(sys->A(tau) * x) - sys->B(tau) * u;
      return sys->A(tau) * x + sys->B(tau) * u;
    };
  } else {
    const auto [a, b] = prob.clock_dynamics();
    field = [a, b](double, const Vector& x, const Vector& u) -> Vector {
      return a * x + b * u;
    };
  }

  const Controller excite = [&u0](double t, const Vector&) {
    return u0.evaluate(t);
  };

  SimulateOptions sim;
  sim.blowup_bound = opts.blowup_bound;
  sim.integrands.push_back([n](double, const Vector& x, const Vector&) {
    return Vector(kron(x, x).reshaped(n * n, 1));
  });
  sim.integrands.push_back([n, m](double, const Vector& x, const Vector& u) {
    return Vector(kron(x, u).reshaped(n * m, 1));
  });

  Vector x_init = opts.x_init;
  if (x_init.size() == 0) x_init = Vector::Zero(n);
  if (x_init.size() != n) {
    fail(ErrorKind::Dimension, "collect: x_init dimension mismatch");
  }

  const auto zero_cost = [](double, const Vector&, const Vector&) {
    return 0.0;
  };
  const SimulateResult run =
      simulate(field, excite, 0.0, t_end, x_init, opts.step, zero_cost, sim);

  DataLog log;
  log.n = n;
  log.m = m;
  log.dt = dt;
  log.delta_xx.resize(windows, SymVec::length(n));
  log.I_xx.resize(windows, n * n);
  log.I_xu0.resize(windows, n * m);
  for (long w = 0; w < windows; ++w) {
    const long i0 = w * spw;
    const long i1 = (w + 1) * spw;
    const Vector& xs = run.trajectory.states[i0];
    const Vector& xe = run.trajectory.states[i1];
    log.delta_xx.row(w) =
        quad_reduce(xe * xe.transpose() - xs * xs.transpose());
    log.I_xx.row(w) = run.integrals[0].row(i1) - run.integrals[0].row(i0);
    log.I_xu0.row(w) = run.integrals[1].row(i1) - run.integrals[1].row(i0);
  }
  ensure_finite(log.delta_xx, "collect delta_xx");
  ensure_finite(log.I_xx, "collect I_xx");
  ensure_finite(log.I_xu0, "collect I_xu0");
  return log;
}

int required_rank(const DataLog& log) {
  return SymVec::length(log.n) + log.m * log.n;
}

bool rank_check(const DataLog& log) {
  Matrix stacked(log.rows(), SymVec::length(log.n) + log.n * log.m);
  stacked << merge_sym_columns(log.I_xx, log.n), log.I_xu0;
  return numerical_rank(stacked) == required_rank(log);
}

PolicyIterate pi_step(const DataLog& log, const Matrix& k_gain,
                      const Matrix& q0, const Matrix& r0) {
  const int n = log.n;
  const int m = log.m;
  if (k_gain.rows() != m || k_gain.cols() != n) {
    fail(ErrorKind::Dimension, "pi_step: gain has wrong shape");
  }
  if (!rank_check(log)) {
    std::ostringstream os;
    os << "pi_step: excitation data rank below required "
       << required_rank(log);
    fail(ErrorKind::InsufficientData, os.str());
  }

  const int np = SymVec::length(n);
  const int nk = n * m;
  const Matrix id = Matrix::Identity(n, n);
  const Matrix qk = q0 + k_gain.transpose() * r0 * k_gain;

  Matrix psi(log.rows(), np + nk);
  psi.leftCols(np) = log.delta_xx;
  psi.rightCols(nk) = -2.0 * log.I_xx * kron(id, k_gain.transpose() * r0) -
                      2.0 * log.I_xu0 * kron(id, r0);
  Vector gamma = -log.I_xx * qk.reshaped(n * n, 1);

  // Row equilibration: open-loop data spans orders of magnitude when the
  // clock plant is unstable; scaling keeps the QR well conditioned.
  for (Eigen::Index i = 0; i < psi.rows(); ++i) {
    const double s = psi.row(i).cwiseAbs().maxCoeff();
    if (s > 0.0) {
      psi.row(i) /= s;
      gamma[i] /= s;
    }
  }

  const Vector z = lstsq(psi, gamma);

  PolicyIterate it;
  SymVec sp;
  sp.n = n;
  sp.values = z.head(np);
  it.P = sym_expand(sp);
  it.K_next = z.tail(nk).reshaped(m, n);
  const double denom = std::max(1.0, gamma.norm());
  it.residual = (psi * z - gamma).norm() / denom;
  return it;
}

LearnResult learn_gain(const RegulatorProblem& prob,
                       const ExcitationSignal& u0, const Matrix& k_init,
                       const LearnOptions& opts) {
  const DataLog log = collect(prob, u0, opts.horizon, opts.dt, opts.collect);
  if (!rank_check(log)) {
    std::ostringstream os;
    os << "learn_gain: rank condition failed; need rank "
       << required_rank(log) << " from " << log.rows() << " windows";
    fail(ErrorKind::InsufficientData, os.str());
  }

  const bool terminal = prob.orientation == Orientation::Terminal;
  Matrix k = k_init;
  Matrix p_prev;
  LearnResult result;
  double regression_residual = 0.0;

  for (int iter = 0; iter < opts.max_iter; ++iter) {
    PolicyIterate it = pi_step(log, k, prob.Q0, prob.R0);
    regression_residual = it.residual;
    it.k = iter;
    const double change = p_prev.size() == 0
                              ? it.P.cwiseAbs().maxCoeff()
                              : (it.P - p_prev).cwiseAbs().maxCoeff();
    it.step_change = change;
    p_prev = it.P;
    k = it.K_next;

    PolicyIterate reported = it;
    if (terminal) reported.P = -it.P;  // anti-stabilizing branch
    result.trace.push_back(reported);

    if (iter > 0 && change <= opts.tol) {
      result.solution.P = terminal ? Matrix(-it.P) : it.P;
      result.solution.K = k;
      result.solution.branch =
          terminal ? Branch::Antistabilizing : Branch::Stabilizing;
      result.solution.residual = regression_residual;
      result.solution.iterations = iter;
      return result;
    }
  }
  std::ostringstream os;
  os << "learn_gain: no convergence in " << opts.max_iter
     << " iterations (last step change "
     << (result.trace.empty() ? 0.0 : result.trace.back().step_change) << ")";
  fail(ErrorKind::Convergence, os.str());
}

}  // namespace splqr
