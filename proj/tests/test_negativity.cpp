#include "doctest.h"

#include <cmath>
#include <random>

#include "gie/errors.hpp"
#include "gie/negativity.hpp"

using namespace gie;
using namespace gie::negativity;

namespace {

CVector random_state(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> g;
  CVector v(n);
  for (Eigen::Index k = 0; k < n; ++k) v(k) = cplx(g(rng), g(rng));
  return v.normalized();
}

// Sum of the two largest Schmidt coefficients squared, from the SVD.
double schmidt_en(const CVector& psi, Eigen::Index da, Eigen::Index db) {
  CMatrix m(da, db);
  for (Eigen::Index i = 0; i < da; ++i)
    for (Eigen::Index j = 0; j < db; ++j) m(i, j) = psi(i * db + j);
  const Eigen::VectorXd sv = Eigen::JacobiSVD<CMatrix>(m).singularValues();
  const double s = sv.sum();
  return 2.0 * std::log2(s);
}

}  // namespace

TEST_CASE("Bell state has one ebit, product state none") {
  CVector bell = CVector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  const CMatrix rho = bell * bell.adjoint();
  CHECK(log_negativity({rho, {2, 2}}, 1) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(log_negativity({rho, {2, 2}}, 0) == doctest::Approx(1.0).epsilon(1e-14));

  CVector prod = CVector::Zero(4);
  prod(0) = 1.0;
  CHECK(log_negativity({prod * prod.adjoint(), {2, 2}}, 1) == 0.0);
}

TEST_CASE("pure-state negativity equals the Schmidt formula") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const CVector psi = random_state(rng, 2 * 3);
    const CMatrix rho = psi * psi.adjoint();
    CHECK(log_negativity({rho, {2, 3}}, 1) == doctest::Approx(schmidt_en(psi, 2, 3)).epsilon(1e-10));
    CHECK(en_bipartition(psi, {2, 3}, {{0}, {1}}) ==
          doctest::Approx(schmidt_en(psi, 2, 3)).epsilon(1e-10));
  }
}

TEST_CASE("partial transpose is an involution and preserves trace") {
  std::mt19937_64 rng(11);
  const Dims dims{2, 3, 2};
  const CVector psi = random_state(rng, 12);
  const CMatrix rho = psi * psi.adjoint();
  for (std::size_t sub = 0; sub < 3; ++sub) {
    const CMatrix pt = partial_transpose(rho, dims, sub);
    CHECK((partial_transpose(pt, dims, sub) - rho).norm() < 1e-14);
    CHECK(std::abs(pt.trace() - rho.trace()) < 1e-14);
  }
  const CMatrix all = partial_transpose(rho, dims, std::vector<std::size_t>{0, 1, 2});
  CHECK((all - rho.transpose()).norm() < 1e-14);
}

TEST_CASE("partial trace of a pure state matches the density-matrix route") {
  std::mt19937_64 rng(17);
  const Dims dims{2, 2, 5};
  const CVector psi = random_state(rng, 20);
  const CMatrix rho = psi * psi.adjoint();
  for (const std::vector<std::size_t>& keep :
       {std::vector<std::size_t>{0, 1}, std::vector<std::size_t>{0, 2}, std::vector<std::size_t>{2}}) {
    const CMatrix a = partial_trace(rho, dims, keep);
    const CMatrix b = partial_trace_pure(psi, dims, keep);
    CHECK((a - b).norm() < 1e-13);
    CHECK(std::abs(a.trace() - 1.0) < 1e-13);
  }
}

TEST_CASE("tripartite cuts agree between vector and matrix inputs") {
  std::mt19937_64 rng(23);
  const Dims dims{2, 2, 4};
  const CVector psi = random_state(rng, 16);
  const CMatrix rho = psi * psi.adjoint();
  for (const Partition& p : {Partition{{0}, {1}}, Partition{{0}, {2}}, Partition{{1}, {2}},
                             Partition{{0}, {}}}) {
    CHECK(en_bipartition(psi, dims, p) == doctest::Approx(en_bipartition(rho, dims, p)).epsilon(1e-12));
  }
}

TEST_CASE("negativity is non-negative and bounded by log2 of the smaller side") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 30; ++trial) {
    const CVector a = random_state(rng, 6), b = random_state(rng, 6);
    const CMatrix rho = 0.5 * (a * a.adjoint() + b * b.adjoint());
    const double en = log_negativity({rho, {2, 3}}, 0);
    CHECK(en >= 0.0);
    CHECK(en <= 1.0 + 1e-12);
  }
}

TEST_CASE("malformed inputs are rejected") {
  CMatrix rho = CMatrix::Identity(4, 4) * 0.25;
  CHECK_THROWS_AS(log_negativity({rho, {2, 3}}, 0), Error);
  rho(0, 1) = cplx(0.0, 0.3);
  try {
    log_negativity({rho, {2, 2}}, 0);
    FAIL("expected NonHermitianInput");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonHermitianInput);
  }
  CHECK_THROWS_AS(partial_transpose(CMatrix::Identity(4, 4), {2, 2}, 2), Error);
}
