#include "gie/analytic.hpp"

#include <algorithm>
#include <cmath>

#include "gie/errors.hpp"
#include "gie/negativity.hpp"

namespace gie::analytic {

namespace {

constexpr double kTwoPi = 2.0 * units::kPi;

BranchState evaluate(const units::SqueezedFrame& frame, const MediatorInit& init, double t,
                     double cycles) {
  if (!(t >= 0.0)) throw Error(ErrorCode::InvalidArgument, "time must be >= 0");
  BranchState st;
  st.t = t;
  st.frame = frame;
  st.init = resolve(init, frame);

  const double w = frame.omega_s;
  // Whole periods are removed before the trig calls so decoupling times land
  // exactly on alpha_t = 0. exp(-i x) - 1 = -2 sin^2(x/2) - i sin x.
  const double frac = cycles - std::round(cycles);
  const double sn = std::sin(kTwoPi * frac);
  const double half = std::sin(units::kPi * frac);
  st.alpha_t = cplx(-2.0 * half * half, -sn) / w;

  st.phi = (2.0 * frame.g_a_s * frame.g_b_s / w) * (t - sn / w);

  const cplx a_conj = std::conj(st.alpha_t);
  const double phi_12 = std::imag((frame.g_a_s * a_conj) * std::conj(frame.g_b_s * a_conj));
  const double phi_34 = std::imag((-frame.g_a_s * a_conj) * std::conj(frame.g_b_s * a_conj));
  st.Phi = {phi_12, phi_12, phi_34, phi_34};

  for (int k = 0; k < 4; ++k) {
    const auto [sa, sb] = branch_spins(static_cast<Branch>(k));
    const double lambda = frame.g_a_s * sa + frame.g_b_s * sb;
    st.alpha_k[k] = -lambda * a_conj;
    st.coefficient[k] = std::exp(cplx(0.0, st.phi * sa * sb + st.Phi[k]));
  }
  return st;
}

// Basis index (R0, R1, L0, L1) to branch index (R0, L1, R1, L0).
constexpr std::array<int, 4> kBranchOfBasis{0, 2, 3, 1};

}  // namespace

cplx MediatorInit::xi(const units::SqueezedFrame& frame) const {
  return std::polar(xi_mag.value_or(frame.s), theta);
}

MediatorState resolve(const MediatorInit& init, const units::SqueezedFrame& frame) {
  return MediatorState{init.alpha0, init.xi(frame)};
}

std::pair<int, int> branch_spins(Branch b) {
  switch (b) {
    case Branch::R0: return {-1, -1};
    case Branch::L1: return {1, 1};
    case Branch::R1: return {-1, 1};
    case Branch::L0: return {1, -1};
  }
  throw Error(ErrorCode::InvalidArgument, "unknown branch");
}

BranchState branch_state(const units::SqueezedFrame& frame, const MediatorInit& init, double t) {
  return evaluate(frame, init, t, t / frame.t_period);
}

BranchState branch_state_at_cycles(const units::SqueezedFrame& frame, const MediatorInit& init,
                                   double cycles) {
  return evaluate(frame, init, cycles * frame.t_period, cycles);
}

cplx displaced_overlap(cplx a_i, cplx a_j, const MediatorState& init) {
  // D(a_i)^dagger D(a_j) = exp(i Im(a_j conj(a_i))) D(a_j - a_i)
  const cplx prefactor = std::exp(cplx(0.0, std::imag(a_j * std::conj(a_i))));
  const cplx beta = a_j - a_i;
  // S(xi)^dagger D(beta) S(xi) = D(beta cosh r + conj(beta) e^{i theta} sinh r)
  const double r = std::abs(init.xi);
  const cplx phase = r > 0.0 ? init.xi / r : cplx(1.0, 0.0);
  const cplx beta_sq = beta * std::cosh(r) + std::conj(beta) * phase * std::sinh(r);
  const cplx& a0 = init.alpha0;
  const cplx exponent =
      -0.5 * std::norm(beta_sq) + beta_sq * std::conj(a0) - std::conj(beta_sq) * a0;
  return prefactor * std::exp(exponent);
}

HermitianMatrix4::HermitianMatrix4(const Matrix4c& m) : m_(m) {
  constexpr double tol = 1e-12;
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tol) {
    throw Error(ErrorCode::NonHermitianInput, "4x4 partial transpose is not Hermitian");
  }
  for (int i = 0; i < 4; ++i) {
    if (std::abs(m(i, i) - cplx(0.25, 0.0)) > tol) {
      throw Error(ErrorCode::InvalidArgument, "diagonal entries must equal 1/4");
    }
    for (int j = 0; j < 4; ++j) {
      if (i != j && std::abs(m(i, j)) > 0.25 + tol) {
        throw Error(ErrorCode::InvalidArgument, "off-diagonal magnitude exceeds 1/4");
      }
    }
  }
}

HermitianMatrix4 partial_transpose_matrix(const BranchState& st, const Dephasing& deph) {
  if (!(deph.qubit >= 0.0) || !(deph.tp >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "dephasing rates must be >= 0");
  }
  const auto& a = st.alpha_k;
  const auto& P = st.Phi;
  const double phi = st.phi;
  auto ov = [&](int i, int j) { return displaced_overlap(a[i], a[j], st.init); };
  auto ph = [](double x) { return std::exp(cplx(0.0, x)); };
  const double qb = std::exp(-deph.qubit * st.t);
  const double tp = std::exp(-deph.tp * st.t);

  // Branch indices: 0 = R0, 1 = L1, 2 = R1, 3 = L0.
  Matrix4c m = Matrix4c::Zero();
  m(0, 1) = ph(-2.0 * phi + P[2] - P[0]) * ov(0, 2) * qb;
  m(0, 2) = ph(2.0 * phi + P[0] - P[3]) * ov(3, 0) * tp;
  m(0, 3) = ph(P[2] - P[3]) * ov(3, 2) * qb * tp;
  m(1, 2) = ph(P[0] - P[1]) * ov(1, 0) * qb * tp;
  m(1, 3) = ph(-2.0 * phi + P[2] - P[1]) * ov(1, 2) * tp;
  m(2, 3) = ph(2.0 * phi + P[1] - P[3]) * ov(3, 1) * qb;
  for (int i = 0; i < 4; ++i) {
    m(i, i) = 1.0;
    for (int j = i + 1; j < 4; ++j) m(j, i) = std::conj(m(i, j));
  }
  return HermitianMatrix4(0.25 * m);
}

HermitianMatrix4 partial_transpose_matrix(const units::SqueezedFrame& frame,
                                          const MediatorInit& init, double t,
                                          const Dephasing& dephasing) {
  return partial_transpose_matrix(branch_state(frame, init, t), dephasing);
}

Matrix4c reduced_density_matrix(const BranchState& st, const Dephasing& deph) {
  Matrix4c rho;
  const double qb = std::exp(-deph.qubit * st.t);
  const double tp = std::exp(-deph.tp * st.t);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const int bi = kBranchOfBasis[i];
      const int bj = kBranchOfBasis[j];
      cplx v = 0.25 * st.coefficient[bi] * std::conj(st.coefficient[bj]) *
               displaced_overlap(st.alpha_k[bj], st.alpha_k[bi], st.init);
      if ((i & 1) != (j & 1)) v *= qb;
      if ((i >> 1) != (j >> 1)) v *= tp;
      rho(i, j) = v;
    }
  }
  return rho;
}

double en_at_decoupling(double g_eff, double t_n) {
  return std::max(0.0, std::log2(1.0 + std::fabs(std::sin(2.0 * g_eff * t_n))));
}

double en_at(const units::SqueezedFrame& frame, const MediatorInit& init, double t,
             const Dephasing& dephasing) {
  const auto pt = partial_transpose_matrix(frame, init, t, dephasing);
  return negativity::log_negativity_of_transpose(pt.matrix());
}

std::vector<TimePoint> en_timeseries(const units::SqueezedFrame& frame, const MediatorInit& init,
                                     std::span<const double> t_grid, const Dephasing& dephasing) {
  std::vector<TimePoint> out;
  out.reserve(t_grid.size());
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (i > 0 && t_grid[i] < t_grid[i - 1]) {
      throw Error(ErrorCode::InvalidArgument, "time grid must be non-decreasing");
    }
    out.push_back({t_grid[i], en_at(frame, init, t_grid[i], dephasing)});
  }
  return out;
}

}  // namespace gie::analytic
