#include "gie/units.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gie/errors.hpp"

namespace gie::units {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw Error(ErrorCode::InvalidSetup, std::string(name) + " must be finite and > 0");
  }
}

bool coulomb_active(const PhysicalSetup& s) {
  return s.Q1 && s.Q2 && *s.Q1 != 0.0 && *s.Q2 != 0.0;
}

double charge_product(const PhysicalSetup& s) {
  return coulomb_active(s) ? std::fabs(*s.Q1) * std::fabs(*s.Q2) : 0.0;
}

// Coulomb separation: given, or back-solved from an explicit drive.
std::optional<double> effective_r0(const PhysicalSetup& s, double F, const Constants& c) {
  if (s.r0) return s.r0;
  if (!coulomb_active(s) || !(F > 0.0)) return std::nullopt;
  return std::cbrt(c.k_e * charge_product(s) / (2.0 * s.m_c * s.omega_c * F));
}

}  // namespace

std::vector<std::string> PhysicalSetup::validate() const {
  require_positive(m_a, "m_a");
  require_positive(m_c, "m_c");
  require_positive(d, "d");
  require_positive(d0, "d0");
  require_positive(omega_c, "omega_c");
  require_positive(omega_b, "omega_b");
  if (!(omega_a0 >= 0.0)) throw Error(ErrorCode::InvalidSetup, "omega_a0 must be >= 0");
  if (!(r_a >= 0.0) || !(r_c >= 0.0)) throw Error(ErrorCode::InvalidSetup, "radii must be >= 0");

  if (d0 >= d) {
    throw Error(ErrorCode::InvalidSetup,
                "well separation d0 must be smaller than the separation d");
  }
  std::vector<std::string> warnings;
  if (d0 / d >= 0.1) {
    std::ostringstream os;
    os << "d0/d = " << d0 / d << " is not small; the gravitational expansion is unreliable";
    warnings.push_back(os.str());
  }

  if (Q1 && *Q1 < 0.0) throw Error(ErrorCode::InvalidSetup, "Q1 must be positive");
  if (Q2 && *Q2 > 0.0) throw Error(ErrorCode::InvalidSetup, "Q2 must be negative");
  if (r0) require_positive(*r0, "r0");

  const int drive_sources = (F ? 1 : 0) + (delta ? 1 : 0) + (r0 ? 1 : 0);
  if (F && delta) throw Error(ErrorCode::InvalidSetup, "give either F or delta, not both");
  if (drive_sources > 1) {
    throw Error(ErrorCode::InvalidSetup,
                "r0 fixes the drive through the Coulomb expansion; drop F/delta or r0");
  }
  if (drive_sources == 0) {
    throw Error(ErrorCode::InvalidSetup,
                "two-phonon drive unspecified: provide F, delta, or Q1, Q2 and r0");
  }
  if (r0 && !(Q1 && Q2)) {
    throw Error(ErrorCode::InvalidSetup, std::string("Coulomb drive needs both charges; missing ") +
                                             (Q1 ? "Q2" : "Q1"));
  }
  if (F && !(*F >= 0.0)) throw Error(ErrorCode::InvalidSetup, "F must be >= 0");
  if (delta && !(*delta > 0.0)) throw Error(ErrorCode::InvalidSetup, "delta must be > 0");

  coupling_chi();
  return warnings;
}

double PhysicalSetup::coupling_chi() const {
  std::optional<double> from_gradient;
  if (B_grad || gamma_e) {
    if (!(B_grad && gamma_e)) {
      throw Error(ErrorCode::InvalidSetup, "B_grad and gamma_e must be given together");
    }
    from_gradient = *B_grad * *gamma_e;
  }
  if (chi && from_gradient) {
    const double scale = std::max(std::fabs(*chi), std::fabs(*from_gradient));
    if (std::fabs(*chi - *from_gradient) > 1e-9 * scale) {
      throw Error(ErrorCode::InvalidSetup, "chi disagrees with gamma_e * B_grad");
    }
  }
  if (chi) return *chi;
  if (from_gradient) return *from_gradient;
  throw Error(ErrorCode::InvalidSetup, "qubit coupling unspecified: provide chi or B_grad and gamma_e");
}

ModelParams ModelParams::dimensionless(double g_a, double g_b, double F, double omega_a,
                                       double omega_b, double epsilon) {
  ModelParams mp;
  mp.omega_a = omega_a;
  mp.omega_b = omega_b;
  mp.omega_tilde = 1.0;
  mp.set_F(F);
  mp.epsilon = epsilon;
  mp.g_a = g_a;
  mp.g_b = g_b;
  return mp;
}

ModelParams derive_model_params(const PhysicalSetup& setup, const Constants& c) {
  setup.validate();

  const double grav_shift = 2.0 * c.G * setup.m_a / (setup.d * setup.d * setup.d);
  const double omega_tilde_sq = setup.omega_c * setup.omega_c - grav_shift;
  if (!(omega_tilde_sq > 0.0)) {
    throw Error(ErrorCode::NegativeSquaredFrequency,
                "omega_c^2 <= 2 G m_a / d^3: the mediator frequency is not real");
  }

  ModelParams mp;
  mp.omega_tilde = std::sqrt(omega_tilde_sq);
  mp.omega_a = setup.omega_a0 +
               c.G * setup.m_a * setup.m_c * setup.d0 / (2.0 * c.hbar * setup.d * setup.d);
  mp.omega_b = setup.omega_b;

  if (setup.delta) {
    mp.delta = *setup.delta;
  } else if (setup.F) {
    mp.set_F(*setup.F);
  } else {
    const double r0 = *setup.r0;
    mp.set_F(c.k_e * charge_product(setup) / (2.0 * setup.m_c * setup.omega_c * r0 * r0 * r0));
  }
  if (!(mp.delta > 0.0)) {
    throw Error(ErrorCode::UnstableFrame, "omega_tilde <= 4F: no stable squeezed frame");
  }
  if (mp.F() < 0.0) {
    throw Error(ErrorCode::InvalidSetup, "delta exceeds omega_tilde (negative drive)");
  }

  double force = c.G * setup.m_a * setup.m_c / (setup.d * setup.d);
  if (const auto r0 = effective_r0(setup, mp.F(), c)) {
    force += c.k_e * charge_product(setup) / (*r0 * *r0);
  }
  mp.epsilon = force * std::sqrt(1.0 / (2.0 * c.hbar * setup.m_c * setup.omega_c));

  mp.g_a = -(c.G * setup.m_a * setup.d0 / (setup.d * setup.d * setup.d)) *
           std::sqrt(setup.m_c / (2.0 * mp.omega_tilde * c.hbar));
  mp.g_b = setup.coupling_chi() * std::sqrt(c.hbar / (2.0 * setup.m_c * setup.omega_c));
  return mp;
}

double squeezing_parameter(double omega_tilde, double delta) {
  if (!(omega_tilde > 0.0)) throw Error(ErrorCode::InvalidArgument, "omega_tilde must be > 0");
  if (!(delta > 0.0)) {
    throw Error(ErrorCode::UnstableFrame, "omega_tilde <= 4F: squeezing parameter diverges");
  }
  if (delta > omega_tilde) {
    throw Error(ErrorCode::InvalidArgument, "negative two-phonon drive");
  }
  return 0.25 * std::log(omega_tilde / delta);
}

double drive_for_squeezing(double omega_tilde, double s) {
  if (!(s >= 0.0)) throw Error(ErrorCode::InvalidArgument, "s must be >= 0");
  return 0.25 * omega_tilde * -std::expm1(-4.0 * s);
}

SqueezedFrame derive_squeezed_frame(const ModelParams& mp) {
  SqueezedFrame f;
  f.omega_tilde = mp.omega_tilde;
  f.delta = mp.delta;
  f.F = mp.F();
  f.s = squeezing_parameter(mp.omega_tilde, mp.delta);
  f.omega_s = std::sqrt(mp.omega_tilde * mp.delta);
  const double gain = std::exp(f.s);
  f.g_a_s = mp.g_a * gain;
  f.g_b_s = mp.g_b * gain;
  f.g_eff = 2.0 * f.g_a_s * f.g_b_s / f.omega_s;
  f.t_period = 2.0 * kPi / f.omega_s;
  return f;
}

bool RegimeReport::all_passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return !checks.empty();
}

namespace {

RegimeCheck make_check(std::string name, double value, double limit, bool upper) {
  RegimeCheck c;
  c.name = std::move(name);
  c.value = value;
  c.limit = limit;
  c.upper_bound = upper;
  c.margin = upper ? limit - value : value - limit;
  c.passed = std::isfinite(value) && c.margin > 0.0;
  return c;
}

}  // namespace

RegimeReport regime_report(const PhysicalSetup& setup, const SqueezedFrame& frame,
                           const RegimeLimits& limits, const Constants& c) {
  RegimeReport r;
  r.notes = setup.validate();
  r.delta_x = std::sqrt(c.hbar / (setup.m_c * frame.omega_tilde)) * std::exp(frame.s);

  if (const auto r0 = effective_r0(setup, frame.F, c)) {
    r.checks.push_back(make_check("coulomb_expansion_dx_over_r0", r.delta_x / *r0,
                                  limits.expansion_ratio, true));
  } else {
    r.notes.emplace_back("no Coulomb separation available; coulomb_expansion check omitted");
  }
  r.checks.push_back(make_check("gravity_expansion_offset_over_d",
                                (0.5 * setup.d0 + r.delta_x) / setup.d, limits.expansion_ratio,
                                true));
  const double surface = setup.d - 0.5 * setup.d0 - setup.r_a - setup.r_c;
  r.checks.push_back(
      make_check("casimir_surface_separation_m", surface, limits.casimir_separation, false));
  r.checks.push_back(make_check("stable_frame_delta", frame.delta, 0.0, false));
  return r;
}

}  // namespace gie::units
