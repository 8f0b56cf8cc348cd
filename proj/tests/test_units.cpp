#include "doctest.h"

#include <cmath>

#include "gie/errors.hpp"
#include "gie/units.hpp"

using namespace gie;
using namespace gie::units;

namespace {

PhysicalSetup lab_setup() {
  PhysicalSetup s;
  s.m_a = 5.0286e-18;
  s.m_c = 2.8634e-14;
  s.d = 180e-6;
  s.d0 = 500e-9;
  s.omega_c = 2.0 * kPi * 2000.0;
  s.omega_b = 2.0 * kPi * 2.87e9;
  s.Q1 = 1e-15;
  s.Q2 = -27.5e-9;
  s.delta = 1e-8;
  s.B_grad = 1e4;
  s.gamma_e = 2.0 * kPi * 28e9;
  s.r_a = 70e-9;
  s.r_c = 1.25e-6;
  return s;
}

}  // namespace

TEST_CASE("laboratory couplings follow the expanded potentials") {
  const PhysicalSetup s = lab_setup();
  const ModelParams mp = derive_model_params(s);
  const Constants& c = kCodata2018;

  const double wt = std::sqrt(s.omega_c * s.omega_c - 2.0 * c.G * s.m_a / std::pow(s.d, 3));
  const double ga = c.G * s.m_a * s.d0 / std::pow(s.d, 3) * std::sqrt(s.m_c / (2.0 * wt * c.hbar));
  const double gb = s.B_grad.value() * s.gamma_e.value() * std::sqrt(c.hbar / (2.0 * s.m_c * s.omega_c));

  CHECK(mp.omega_tilde == doctest::Approx(wt).epsilon(1e-14));
  CHECK(mp.g_a < 0.0);
  CHECK(-mp.g_a == doctest::Approx(ga).epsilon(1e-12));
  CHECK(mp.g_b == doctest::Approx(gb).epsilon(1e-12));
  CHECK(mp.delta == 1e-8);
  CHECK(mp.F() == doctest::Approx(0.25 * (wt - 1e-8)).epsilon(1e-15));
}

TEST_CASE("squeezed frame keeps delta exactly near the instability") {
  const ModelParams mp = derive_model_params(lab_setup());
  const SqueezedFrame f = derive_squeezed_frame(mp);
  CHECK(f.s == doctest::Approx(0.25 * std::log(mp.omega_tilde / 1e-8)).epsilon(1e-14));
  CHECK(f.omega_s == doctest::Approx(std::sqrt(mp.omega_tilde * 1e-8)).epsilon(1e-14));
  CHECK(f.g_eff == doctest::Approx(2.0 * f.g_a_s * f.g_b_s / f.omega_s).epsilon(1e-14));
  CHECK(f.decoupling_time(3) == doctest::Approx(3.0 * 2.0 * kPi / f.omega_s));
}

TEST_CASE("squeezing parameter and drive are inverse") {
  for (double s : {0.0, 0.01, 0.3, 1.0, 3.0}) {
    const double F = drive_for_squeezing(1.0, s);
    CHECK(squeezing_parameter(1.0, 1.0 - 4.0 * F) == doctest::Approx(s).epsilon(1e-10));
  }
  const SqueezedFrame f0 = derive_squeezed_frame(ModelParams::dimensionless(0.1, 1.0, 0.0));
  CHECK(f0.s == 0.0);
  CHECK(f0.omega_s == 1.0);
  CHECK(f0.g_b_s == 1.0);
}

TEST_CASE("couplings scale as exp(s) and omega_s as exp(-2s)") {
  for (double F : {0.05, 0.1, 0.2, 0.24}) {
    const SqueezedFrame f = derive_squeezed_frame(ModelParams::dimensionless(0.02, 0.7, F));
    CHECK(f.g_a_s / 0.02 == doctest::Approx(std::exp(f.s)));
    CHECK(f.g_b_s / 0.7 == doctest::Approx(std::exp(f.s)));
    CHECK(f.omega_s == doctest::Approx(std::exp(-2.0 * f.s)));
  }
}

TEST_CASE("unstable drive is rejected") {
  CHECK_THROWS_AS(squeezing_parameter(1.0, 0.0), Error);
  try {
    derive_squeezed_frame(ModelParams::dimensionless(0.1, 1.0, 0.25));
    FAIL("expected UnstableFrame");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnstableFrame);
  }
  PhysicalSetup s = lab_setup();
  s.delta.reset();
  s.F = 0.3 * s.omega_c;
  try {
    derive_model_params(s);
    FAIL("expected UnstableFrame");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnstableFrame);
  }
}

TEST_CASE("setup validation names the missing piece") {
  PhysicalSetup s = lab_setup();
  s.delta.reset();
  s.r0 = 1e-3;
  s.Q2.reset();
  try {
    s.validate();
    FAIL("expected InvalidSetup");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidSetup);
    CHECK(std::string(e.what()).find("Q2") != std::string::npos);
  }

  PhysicalSetup t = lab_setup();
  t.d0 = 2.0 * t.d;
  CHECK_THROWS_AS(t.validate(), Error);

  PhysicalSetup u = lab_setup();
  u.chi = 1.0;
  CHECK_THROWS_AS(u.coupling_chi(), Error);
  u.chi = u.B_grad.value() * u.gamma_e.value();
  CHECK(u.coupling_chi() == doctest::Approx(*u.chi));

}

TEST_CASE("Coulomb drive from charges is consistent with the back-solved separation") {
  PhysicalSetup s = lab_setup();
  const ModelParams target = derive_model_params(s);
  // Back-solve r0 from F = k Q1 |Q2| / (2 m_c omega_c r0^3), then feed it back.
  const Constants& c = kCodata2018;
  const double r0 = std::cbrt(c.k_e * s.Q1.value() * std::fabs(s.Q2.value()) /
                              (2.0 * s.m_c * s.omega_c * target.F()));
  s.delta.reset();
  s.r0 = r0;
  const ModelParams mp = derive_model_params(s);
  CHECK(mp.F() == doctest::Approx(target.F()).epsilon(1e-12));
  CHECK(mp.epsilon == doctest::Approx(target.epsilon).epsilon(1e-9));
}

TEST_CASE("regime report flags a violated expansion") {
  const PhysicalSetup s = lab_setup();
  const SqueezedFrame f = derive_squeezed_frame(derive_model_params(s));
  const RegimeReport ok = regime_report(s, f);
  CHECK(ok.all_passed());
  CHECK(ok.delta_x == doctest::Approx(std::sqrt(kCodata2018.hbar / (s.m_c * f.omega_tilde)) *
                                      std::exp(f.s)));

  RegimeLimits strict;
  strict.casimir_separation = 1.0;
  const RegimeReport bad = regime_report(s, f, strict);
  CHECK_FALSE(bad.all_passed());
  bool found = false;
  for (const auto& c : bad.checks) {
    if (c.name == "casimir_surface_separation_m") {
      found = true;
      CHECK_FALSE(c.passed);
      CHECK(c.margin < 0.0);
    }
  }
  CHECK(found);
}
