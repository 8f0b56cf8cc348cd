#include "gie/fock.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gie/errors.hpp"
#include "gie/parallel.hpp"

namespace gie::fock {

namespace {

void require_cutoff(std::size_t cutoff) {
  if (cutoff < 2) {
    throw Error(ErrorCode::CutoffTooSmall, "Fock cutoff must be at least 2");
  }
}

Eigen::Index idx(std::size_t n) { return static_cast<Eigen::Index>(n); }

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CMatrix sigma_z() {
  CMatrix s = CMatrix::Zero(2, 2);
  s(0, 0) = -1.0;  // |R> or |0>
  s(1, 1) = 1.0;   // |L> or |1>
  return s;
}

// H = spin_part (x) 1_N + 1_4 (x) osc + (g_a sa + g_b sb) (x) (a + a^dag)
TruncatedOperator assemble(double omega_a, double omega_b, const CMatrix& osc, double g_a,
                           double g_b, std::size_t cutoff) {
  const CMatrix id2 = CMatrix::Identity(2, 2);
  const CMatrix id_n = CMatrix::Identity(idx(cutoff), idx(cutoff));
  const CMatrix sa = kron(sigma_z(), id2);
  const CMatrix sb = kron(id2, sigma_z());
  const CMatrix a = annihilation(cutoff);
  const CMatrix x = a + a.adjoint();
  TruncatedOperator h;
  h.cutoff = cutoff;
  h.matrix = kron(omega_a * sa + omega_b * sb, id_n) + kron(CMatrix::Identity(4, 4), osc) +
             kron(g_a * sa + g_b * sb, x);
  return h;
}

}  // namespace

negativity::Dims system_dims(std::size_t cutoff) { return {2, 2, cutoff}; }

CMatrix annihilation(std::size_t cutoff) {
  require_cutoff(cutoff);
  CMatrix a = CMatrix::Zero(idx(cutoff), idx(cutoff));
  for (std::size_t n = 1; n < cutoff; ++n) a(idx(n - 1), idx(n)) = std::sqrt(double(n));
  return a;
}

// ---------------------------------------------------------------------------
// TruncatedState

TruncatedState::TruncatedState(CVector amplitudes, std::size_t cutoff, double tail_mass)
    : pure_(true), psi_(std::move(amplitudes)), cutoff_(cutoff), tail_mass_(tail_mass) {
  if (static_cast<std::size_t>(psi_.size()) != 4 * cutoff) {
    throw Error(ErrorCode::DimensionMismatch, "state vector must have length 4N");
  }
}

TruncatedState::TruncatedState(CMatrix density, std::size_t cutoff, double tail_mass)
    : pure_(false), rho_(std::move(density)), cutoff_(cutoff), tail_mass_(tail_mass) {
  if (rho_.rows() != rho_.cols() || static_cast<std::size_t>(rho_.rows()) != 4 * cutoff) {
    throw Error(ErrorCode::DimensionMismatch, "density matrix must be 4N x 4N");
  }
}

const CVector& TruncatedState::vector() const {
  if (!pure_) throw Error(ErrorCode::InvalidArgument, "state is mixed");
  return psi_;
}

CMatrix TruncatedState::density() const { return pure_ ? CMatrix(psi_ * psi_.adjoint()) : rho_; }

double TruncatedState::norm() const {
  return pure_ ? psi_.squaredNorm() : rho_.trace().real();
}

double TruncatedState::top_level_population() const {
  double p = 0.0;
  const std::size_t top = cutoff_ - 1;
  for (std::size_t s = 0; s < 4; ++s) {
    const auto i = idx(s * cutoff_ + top);
    p += pure_ ? std::norm(psi_(i)) : rho_(i, i).real();
  }
  return p;
}

// ---------------------------------------------------------------------------
// Hamiltonians

TruncatedOperator build_hamiltonian_lab(const units::ModelParams& mp, std::size_t cutoff) {
  require_cutoff(cutoff);
  const CMatrix a = annihilation(cutoff);
  const CMatrix ad = a.adjoint();
  const double F = mp.F();
  const CMatrix osc = (mp.omega_tilde - 2.0 * F) * (ad * a) + mp.epsilon * (a + ad) -
                      F * (ad * ad + a * a);
  return assemble(mp.omega_a, mp.omega_b, osc, mp.g_a, mp.g_b, cutoff);
}

TruncatedOperator build_hamiltonian_squeezed(const units::SqueezedFrame& frame, double omega_a,
                                             double omega_b, std::size_t cutoff) {
  require_cutoff(cutoff);
  const CMatrix a = annihilation(cutoff);
  const CMatrix osc = frame.omega_s * (a.adjoint() * a);
  return assemble(omega_a, omega_b, osc, frame.g_a_s, frame.g_b_s, cutoff);
}

// ---------------------------------------------------------------------------
// Oscillator state preparation

namespace {

// w = G v for the banded generators, on a basis of v.size() levels.
CVector apply_squeeze_generator(cplx xi, const CVector& v) {
  // G = (conj(xi) a^2 - xi a^dag^2) / 2
  const Eigen::Index m = v.size();
  CVector w = CVector::Zero(m);
  const cplx lower = 0.5 * std::conj(xi);
  const cplx raise = -0.5 * xi;
  for (Eigen::Index n = 0; n < m; ++n) {
    if (n + 2 < m) w(n) += lower * std::sqrt(double((n + 1) * (n + 2))) * v(n + 2);
    if (n >= 2) w(n) += raise * std::sqrt(double(n * (n - 1))) * v(n - 2);
  }
  return w;
}

CVector apply_displace_generator(cplx beta, const CVector& v) {
  // G = beta a^dag - conj(beta) a
  const Eigen::Index m = v.size();
  CVector w = CVector::Zero(m);
  for (Eigen::Index n = 0; n < m; ++n) {
    if (n + 1 < m) w(n) -= std::conj(beta) * std::sqrt(double(n + 1)) * v(n + 1);
    if (n >= 1) w(n) += beta * std::sqrt(double(n)) * v(n - 1);
  }
  return w;
}

// exp(G) v by scaled Taylor steps; `bound` is an upper estimate of ||G||.
template <class Apply>
CVector expm_action(Apply apply, double bound, CVector v) {
  const int substeps = std::max(1, static_cast<int>(std::ceil(bound)));
  const double h = 1.0 / substeps;
  for (int s = 0; s < substeps; ++s) {
    CVector term = v;
    CVector sum = v;
    const double ref = v.norm();
    for (int k = 1; k < 200; ++k) {
      term = apply(term) * (h / k);
      sum += term;
      if (term.norm() <= 1e-18 * ref) break;
    }
    v = std::move(sum);
  }
  return v;
}

}  // namespace

OscillatorPrep::OscillatorPrep(cplx alpha0) : alpha0_(alpha0) {}

OscillatorPrep& OscillatorPrep::squeeze(cplx xi) {
  steps_.push_back({true, xi});
  return *this;
}

OscillatorPrep& OscillatorPrep::displace(cplx beta) {
  steps_.push_back({false, beta});
  return *this;
}

CVector OscillatorPrep::build(std::size_t cutoff, double tail_threshold, double* tail_out) const {
  require_cutoff(cutoff);
  const std::size_t padded = 2 * cutoff + 32;
  const auto m = idx(padded);

  CVector v = CVector::Zero(m);
  v(0) = std::exp(-0.5 * std::norm(alpha0_));
  for (Eigen::Index n = 1; n < m; ++n) v(n) = v(n - 1) * alpha0_ / std::sqrt(double(n));
  double lost = std::max(0.0, 1.0 - v.squaredNorm());

  for (const auto& step : steps_) {
    if (step.squeeze) {
      const double bound = std::abs(step.value) * double(padded + 1);
      v = expm_action([&](const CVector& x) { return apply_squeeze_generator(step.value, x); },
                      bound, std::move(v));
    } else {
      const double bound = 2.0 * std::abs(step.value) * std::sqrt(double(padded));
      v = expm_action([&](const CVector& x) { return apply_displace_generator(step.value, x); },
                      bound, std::move(v));
    }
  }

  const double total = v.squaredNorm();
  const double kept = v.head(idx(cutoff)).squaredNorm();
  const double tail = lost + std::max(0.0, total - kept);
  if (tail_out) *tail_out = tail;
  if (!(tail <= tail_threshold) || !(kept > 0.0)) {
    std::ostringstream os;
    os << "cutoff N = " << cutoff << " leaves tail mass " << tail << " > " << tail_threshold;
    throw CutoffTooSmall(os.str(), tail);
  }
  return v.head(idx(cutoff)) / std::sqrt(kept);
}

CVector displaced_squeezed_coherent(cplx beta, const analytic::MediatorState& med,
                                    std::size_t cutoff, double tail_threshold) {
  return OscillatorPrep(med.alpha0).squeeze(med.xi).displace(beta).build(cutoff, tail_threshold);
}

const char* frame_name(Frame f) { return f == Frame::Lab ? "lab" : "squeezed"; }

Frame parse_frame(const std::string& name) {
  if (name == "lab") return Frame::Lab;
  if (name == "squeezed") return Frame::Squeezed;
  throw Error(ErrorCode::InvalidArgument, "unknown frame '" + name + "'");
}

TruncatedState prepare_initial(const analytic::MediatorState& med, std::size_t cutoff,
                               double tail_threshold, Frame frame, double frame_s) {
  OscillatorPrep prep(med.alpha0);
  prep.squeeze(med.xi);
  if (frame == Frame::Lab && frame_s != 0.0) prep.squeeze(cplx(-frame_s, 0.0));
  double tail = 0.0;
  const CVector osc = prep.build(cutoff, tail_threshold, &tail);

  const double h = 1.0 / std::sqrt(2.0);
  CVector spin(4);
  spin.setConstant(cplx(h * h, 0.0));
  CVector psi(idx(4 * cutoff));
  for (Eigen::Index s = 0; s < 4; ++s) psi.segment(s * idx(cutoff), idx(cutoff)) = spin(s) * osc;
  return TruncatedState(std::move(psi), cutoff, tail);
}

// ---------------------------------------------------------------------------
// Propagation

Propagator::Propagator(const TruncatedOperator& h) : cutoff_(h.cutoff) {
  const CMatrix& m = h.matrix;
  if (m.rows() != m.cols() || static_cast<std::size_t>(m.rows()) != 4 * h.cutoff) {
    throw Error(ErrorCode::DimensionMismatch, "Hamiltonian must be 4N x 4N");
  }
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw Error(ErrorCode::NonHermitianInput, "Hamiltonian is not Hermitian");
  }

  const auto n = idx(h.cutoff);
  bool blocky = true;
  for (Eigen::Index bi = 0; bi < 4 && blocky; ++bi) {
    for (Eigen::Index bj = 0; bj < 4 && blocky; ++bj) {
      if (bi != bj && !m.block(bi * n, bj * n, n, n).isZero(0.0)) blocky = false;
    }
  }

  auto decompose = [&](Eigen::Index offset, Eigen::Index size) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m.block(offset, offset, size, size));
    if (es.info() != Eigen::Success) {
      throw Error(ErrorCode::EigenFailure, "Hamiltonian eigendecomposition failed");
    }
    blocks_.push_back(Block{offset, es.eigenvalues(), es.eigenvectors()});
  };
  if (blocky) {
    for (Eigen::Index b = 0; b < 4; ++b) decompose(b * n, n);
  } else {
    decompose(0, m.rows());
  }
}

TruncatedState Propagator::evolve(const TruncatedState& state, double t) const {
  if (state.cutoff() != cutoff_) {
    throw Error(ErrorCode::DimensionMismatch, "state and Hamiltonian cutoffs differ");
  }
  if (state.is_pure()) {
    CVector out(state.vector().size());
    for (const auto& b : blocks_) {
      const auto size = b.energies.size();
      CVector c = b.vectors.adjoint() * state.vector().segment(b.offset, size);
      for (Eigen::Index k = 0; k < size; ++k) c(k) *= std::exp(cplx(0.0, -b.energies(k) * t));
      out.segment(b.offset, size) = b.vectors * c;
    }
    return TruncatedState(std::move(out), cutoff_, state.tail_mass());
  }
  const auto dim = idx(4 * cutoff_);
  CMatrix u = CMatrix::Zero(dim, dim);
  for (const auto& b : blocks_) {
    const auto size = b.energies.size();
    CVector phases(size);
    for (Eigen::Index k = 0; k < size; ++k) phases(k) = std::exp(cplx(0.0, -b.energies(k) * t));
    u.block(b.offset, b.offset, size, size) =
        b.vectors * phases.asDiagonal() * b.vectors.adjoint();
  }
  return TruncatedState(CMatrix(u * state.density() * u.adjoint()), cutoff_, state.tail_mass());
}

TruncatedState evolve(const TruncatedState& state, const TruncatedOperator& h, double t) {
  return Propagator(h).evolve(state, t);
}

double expectation(const TruncatedState& state, const TruncatedOperator& op) {
  if (state.is_pure()) return state.vector().dot(op.matrix * state.vector()).real();
  return (state.density() * op.matrix).trace().real();
}

// ---------------------------------------------------------------------------
// Entanglement of the oracle state

Matrix4c tp_qubit_state(const TruncatedState& state, const analytic::Dephasing& deph, double t) {
  const auto dims = system_dims(state.cutoff());
  CMatrix rho = state.is_pure() ? negativity::partial_trace_pure(state.vector(), dims, {kTp, kQubit})
                                : negativity::partial_trace(state.density(), dims, {kTp, kQubit});
  const double qb = std::exp(-deph.qubit * t);
  const double tp = std::exp(-deph.tp * t);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if ((i & 1) != (j & 1)) rho(i, j) *= qb;
      if ((i >> 1) != (j >> 1)) rho(i, j) *= tp;
    }
  }
  return rho;
}

double en_tp_qubit(const TruncatedState& state, const analytic::Dephasing& deph, double t) {
  const CMatrix rho = tp_qubit_state(state, deph, t);
  return negativity::log_negativity_of_transpose(negativity::partial_transpose(rho, {2, 2}, 1));
}

CutEntanglement en_all_cuts(const TruncatedState& state, const analytic::Dephasing& deph,
                            double t) {
  CutEntanglement e;
  e.tp_qubit = en_tp_qubit(state, deph, t);
  const auto dims = system_dims(state.cutoff());
  if (state.is_pure()) {
    e.tp_mediator = negativity::en_bipartition(state.vector(), dims, {{kTp}, {kMediator}});
    e.qubit_mediator = negativity::en_bipartition(state.vector(), dims, {{kQubit}, {kMediator}});
  } else {
    const CMatrix rho = state.density();
    e.tp_mediator = negativity::en_bipartition(rho, dims, {{kTp}, {kMediator}});
    e.qubit_mediator = negativity::en_bipartition(rho, dims, {{kQubit}, {kMediator}});
  }
  return e;
}

// ---------------------------------------------------------------------------
// Oracle runs

namespace {

struct OracleSetup {
  TruncatedOperator h;
  TruncatedState initial;
};

OracleSetup make_oracle(const OracleConfig& cfg, std::size_t cutoff) {
  const units::SqueezedFrame frame = units::derive_squeezed_frame(cfg.model);
  const analytic::MediatorState med = analytic::resolve(cfg.init, frame);
  TruncatedOperator h = cfg.frame == Frame::Lab
                            ? build_hamiltonian_lab(cfg.model, cutoff)
                            : build_hamiltonian_squeezed(frame, cfg.model.omega_a,
                                                         cfg.model.omega_b, cutoff);
  TruncatedState psi0 = prepare_initial(med, cutoff, cfg.tail_threshold, cfg.frame, frame.s);
  return {std::move(h), std::move(psi0)};
}

}  // namespace

std::vector<double> oracle_en_series(const OracleConfig& cfg, std::size_t cutoff,
                                     std::span<const double> t_grid, double* tail_out) {
  const OracleSetup setup = make_oracle(cfg, cutoff);
  const Propagator prop(setup.h);
  std::vector<double> en;
  en.reserve(t_grid.size());
  double tail = setup.initial.tail_mass();
  for (double t : t_grid) {
    const TruncatedState st = prop.evolve(setup.initial, t);
    tail = std::max(tail, st.top_level_population());
    en.push_back(en_tp_qubit(st, cfg.dephasing, t));
  }
  if (tail_out) *tail_out = tail;
  return en;
}

OracleSeries oracle_cut_series(const OracleConfig& cfg, std::size_t cutoff,
                               std::span<const double> t_grid, unsigned threads) {
  const OracleSetup setup = make_oracle(cfg, cutoff);
  const Propagator prop(setup.h);
  OracleSeries out;
  out.cutoff = cutoff;
  out.t.assign(t_grid.begin(), t_grid.end());
  out.en.resize(t_grid.size());
  std::vector<double> tails(t_grid.size(), 0.0);
  parallel_for(t_grid.size(), threads, [&](std::size_t i) {
    const TruncatedState st = prop.evolve(setup.initial, t_grid[i]);
    tails[i] = st.top_level_population();
    out.en[i] = en_all_cuts(st, cfg.dephasing, t_grid[i]);
  });
  out.tail = setup.initial.tail_mass();
  for (double p : tails) out.tail = std::max(out.tail, p);
  return out;
}

ConvergenceReport converge_cutoff(const OracleConfig& cfg, std::span<const double> t_grid) {
  if (cfg.n_start < 2) throw Error(ErrorCode::InvalidArgument, "n_start must be >= 2");
  ConvergenceReport report;

  struct Level {
    std::size_t n;
    std::vector<double> en;
    double tail;
  };
  auto evaluate = [&](std::size_t n) -> std::optional<Level> {
    double tail = 0.0;
    try {
      auto en = oracle_en_series(cfg, n, t_grid, &tail);
      return Level{n, std::move(en), tail};
    } catch (const CutoffTooSmall& e) {
      report.history.push_back(
          {n, std::numeric_limits<double>::quiet_NaN(), e.tail_mass(), e.what()});
      return std::nullopt;
    }
  };

  std::optional<Level> current;
  for (std::size_t n = cfg.n_start; n <= cfg.n_max; n *= 2) {
    if (!current || current->n != n) current = evaluate(n);
    if (!current) continue;
    std::optional<Level> doubled = evaluate(2 * n);
    if (!doubled) {
      current.reset();
      continue;
    }
    double dev = 0.0;
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
      dev = std::max(dev, std::fabs(current->en[i] - doubled->en[i]));
    }
    report.history.push_back({n, dev, current->tail, ""});
    if (dev < cfg.tolerance && current->tail < cfg.tail_threshold) {
      report.cutoff = n;
      report.max_deviation = dev;
      report.tail = current->tail;
      return report;
    }
    current = std::move(doubled);
  }
  std::ostringstream os;
  os << "Fock cutoff did not converge up to N = " << cfg.n_max << " (" << frame_name(cfg.frame)
     << " frame)";
  if (!report.history.empty()) {
    const auto& last = report.history.back();
    os << "; last step N = " << last.cutoff << ", deviation " << last.max_deviation << ", tail "
       << last.tail;
  }
  throw Error(ErrorCode::NoConvergence, os.str());
}

}  // namespace gie::fock
