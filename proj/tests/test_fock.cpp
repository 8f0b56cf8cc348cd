#include "doctest.h"

#include <cmath>

#include "gie/analytic.hpp"
#include "gie/errors.hpp"
#include "gie/fock.hpp"
#include "reference_oracle.hpp"

using namespace gie;
using namespace gie::fock;

TEST_CASE("truncated operators have the expected matrix elements") {
  const CMatrix a = annihilation(6);
  for (int n = 1; n < 6; ++n) CHECK(a(n - 1, n).real() == doctest::Approx(std::sqrt(double(n))));
  const CMatrix comm = a * a.adjoint() - a.adjoint() * a;
  for (int n = 0; n < 5; ++n) CHECK(comm(n, n).real() == doctest::Approx(1.0));
  CHECK(system_dims(7) == negativity::Dims{2, 2, 7});
}

TEST_CASE("prepared oscillator states match dense exponentials") {
  const int m = 120, n = 40;
  const cplx alpha0(0.3, -0.4), xi = std::polar(0.6, 0.9), beta(-0.5, 0.2);
  const reference::Vec ref = (reference::displacement(beta, m) * reference::squeeze(xi, m) *
                              reference::coherent(alpha0, m)).head(n);
  const CVector got = OscillatorPrep(alpha0).squeeze(xi).displace(beta).build(n, 1e-10);
  CHECK((got - ref.normalized()).norm() < 1e-9);
}

TEST_CASE("too small a cutoff reports the lost probability") {
  try {
    OscillatorPrep(cplx(3.0, 0.0)).build(4, 1e-8);
    FAIL("expected CutoffTooSmall");
  } catch (const CutoffTooSmall& e) {
    CHECK(e.tail_mass() > 0.5);
    CHECK(e.code() == ErrorCode::CutoffTooSmall);
  }
}

TEST_CASE("propagator is unitary and detects the spin blocks") {
  const auto mp = units::ModelParams::dimensionless(0.05, 0.5, 0.1, 0.2, 0.3);
  const TruncatedOperator h = build_hamiltonian_lab(mp, 24);
  CHECK((h.matrix - h.matrix.adjoint()).norm() < 1e-14);
  const Propagator u(h);
  CHECK(u.block_diagonal());
  const TruncatedState psi0 = prepare_initial({{0.5, 0.0}, {0.0, 0.0}}, 24, 1e-8, Frame::Lab, 0.0);
  for (double t : {0.3, 2.0, 7.5}) {
    const TruncatedState psi = u.evolve(psi0, t);
    CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
  // Energy is conserved.
  const double e0 = expectation(psi0, h);
  CHECK(expectation(u.evolve(psi0, 4.0), h) == doctest::Approx(e0).epsilon(1e-10));
}

TEST_CASE("mixed and pure evolution agree") {
  const units::SqueezedFrame f =
      units::derive_squeezed_frame(units::ModelParams::dimensionless(0.1, 0.6, 0.05));
  const TruncatedOperator h = build_hamiltonian_squeezed(f, 0.0, 0.0, 30);
  const TruncatedState pure = prepare_initial({{1.0, 0.0}, {0.0, 0.0}}, 30);
  const TruncatedState mixed(pure.density(), 30, pure.tail_mass());
  const TruncatedState a = evolve(pure, h, 1.3), b = evolve(mixed, h, 1.3);
  CHECK((a.density() - b.density()).norm() < 1e-12);
}

TEST_CASE("squeezed-frame oracle follows the independent branch solver") {
  const units::SqueezedFrame f =
      units::derive_squeezed_frame(units::ModelParams::dimensionless(0.05, 0.7, 0.12));
  const int n = 64;
  const TruncatedOperator h = build_hamiltonian_squeezed(f, 0.0, 0.0, n);
  const analytic::MediatorState med = analytic::resolve({}, f);
  const TruncatedState psi0 = prepare_initial(med, n, 1e-10);
  const reference::Vec med_ref =
      (reference::squeeze(med.xi, 160) * reference::coherent(med.alpha0, 160)).head(n).normalized();
  for (double t : {0.4, 3.1, f.t_period}) {
    const Matrix4c got = tp_qubit_state(evolve(psi0, h, t));
    const reference::Mat4 ref =
        reference::reduced_state(f.omega_s, 0.0, f.g_a_s, f.g_b_s, med_ref, t);
    CHECK((got - ref).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("lab and squeezed frames give the same entanglement") {
  fock::OracleConfig cfg;
  cfg.model = units::ModelParams::dimensionless(1.0 / 48.0, 1.0, 0.125);
  const units::SqueezedFrame f = units::derive_squeezed_frame(cfg.model);
  const std::vector<double> grid{0.25 * f.t_period, 0.5 * f.t_period, f.t_period};
  cfg.frame = Frame::Squeezed;
  const auto sq = oracle_en_series(cfg, 64, grid);
  cfg.frame = Frame::Lab;
  const auto lab = oracle_en_series(cfg, 128, grid);
  for (std::size_t k = 0; k < grid.size(); ++k) CHECK(sq[k] == doctest::Approx(lab[k]).epsilon(1e-6));
}

TEST_CASE("cutoff convergence doubles until the tolerance is met") {
  fock::OracleConfig cfg;
  cfg.model = units::ModelParams::dimensionless(1.0 / 48.0, 1.0, 0.0);
  const std::vector<double> grid{1.0, 3.0, 2.0 * units::kPi};
  const ConvergenceReport rep = converge_cutoff(cfg, grid);
  CHECK(rep.cutoff <= 64);
  CHECK(rep.max_deviation < cfg.tolerance);
  CHECK(rep.tail < cfg.tail_threshold);
  REQUIRE(rep.history.size() >= 2);
  for (std::size_t k = 1; k < rep.history.size(); ++k) {
    CHECK(rep.history[k].cutoff == 2 * rep.history[k - 1].cutoff);
  }

  cfg.n_max = 8;
  CHECK_THROWS_AS(converge_cutoff(cfg, grid), Error);
}

TEST_CASE("mediator disentangles at the decoupling time") {
  fock::OracleConfig cfg;
  cfg.model = units::ModelParams::dimensionless(1.0 / 48.0, 1.0, 0.0);
  const std::vector<double> grid{units::kPi, 2.0 * units::kPi};
  const OracleSeries s = oracle_cut_series(cfg, 32, grid, 2);
  CHECK(s.en[0].tp_mediator > 1e-2);
  CHECK(s.en[1].tp_mediator < 1e-6);
  CHECK(s.en[1].qubit_mediator < 1e-6);
  CHECK(s.en[1].tp_qubit ==
        doctest::Approx(reference::en_decoupled(2.0 / 48.0, 2.0 * units::kPi)).epsilon(1e-6));
}

TEST_CASE("non-Hermitian Hamiltonians are rejected") {
  TruncatedOperator h{CMatrix::Zero(8, 8), 2};
  h.matrix(0, 1) = 1.0;
  CHECK_THROWS_AS(Propagator{h}, Error);
}
