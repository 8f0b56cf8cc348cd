#pragma once

// Conversion from laboratory SI parameters to the coefficients of the
// driven hybrid Hamiltonian, its Bogoliubov (squeezed) frame, and the
// validity checks for the expansions that produced them.

#include <optional>
#include <string>
#include <vector>

namespace gie::units {

struct Constants {
  double G;      // m^3 kg^-1 s^-2
  double hbar;   // J s
  double k_e;    // N m^2 C^-2
};

/// CODATA 2018.
inline constexpr Constants kCodata2018{6.67430e-11, 1.054571817e-34, 8.9875517923e9};

inline constexpr double kPi = 3.14159265358979323846;

/// Raw experimental parameters in SI units. Angular frequencies are rad/s.
///
/// The two-phonon drive comes from exactly one source: the Coulomb block
/// (Q1, Q2, r0), an explicit `F`, or an explicit `delta` = omega_tilde - 4F.
/// When F or delta is given together with the charges but no r0, the
/// separation r0 is back-solved from F so the displacement term and the
/// Coulomb-expansion check stay defined.
struct PhysicalSetup {
  double m_a = 0.0;
  double m_c = 0.0;
  double d = 0.0;
  double d0 = 0.0;
  double omega_c = 0.0;
  double omega_b = 0.0;
  double omega_a0 = 0.0;

  std::optional<double> Q1;
  std::optional<double> Q2;
  std::optional<double> r0;
  std::optional<double> F;
  std::optional<double> delta;

  // Qubit coupling: chi directly, or gamma_e * B_grad. Both may be supplied
  // when they agree to 1e-9 relative.
  std::optional<double> chi;
  std::optional<double> B_grad;
  std::optional<double> gamma_e;

  // Body radii, only used for the surface-separation (Casimir) check.
  double r_a = 0.0;
  double r_c = 0.0;

  /// Throws InvalidSetup on a hard violation; returns soft warnings.
  std::vector<std::string> validate() const;

  /// Spin-phonon coefficient chi in rad/(s m).
  double coupling_chi() const;

  bool operator==(const PhysicalSetup&) const = default;
};

/// Coefficients of the expanded lab-frame Hamiltonian, all in rad/s (or in
/// units of omega_tilde for dimensionless models).
///
/// The drive is stored as delta = omega_tilde - 4F rather than F: near the
/// instability delta is many orders of magnitude below omega_tilde and
/// would not survive the subtraction.
struct ModelParams {
  double omega_a = 0.0;
  double omega_b = 0.0;
  double omega_tilde = 1.0;
  double delta = 1.0;
  double epsilon = 0.0;
  double g_a = 0.0;  // signed; negative for the gravitational coupling
  double g_b = 0.0;

  double F() const { return 0.25 * (omega_tilde - delta); }
  void set_F(double F) { delta = omega_tilde - 4.0 * F; }

  /// Model in units of omega_tilde = 1.
  static ModelParams dimensionless(double g_a, double g_b, double F, double omega_a = 0.0,
                                   double omega_b = 0.0, double epsilon = 0.0);

  bool operator==(const ModelParams&) const = default;
};

struct SqueezedFrame {
  double omega_tilde = 1.0;
  double F = 0.0;
  double delta = 1.0;
  double s = 0.0;
  double omega_s = 1.0;
  double g_a_s = 0.0;
  double g_b_s = 0.0;
  double g_eff = 0.0;
  double t_period = 0.0;  // 2 pi / omega_s

  double decoupling_time(int n) const { return n * t_period; }
};

struct RegimeCheck {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double limit = 0.0;
  bool upper_bound = true;  // value must stay below limit when true, above otherwise
  double margin = 0.0;      // signed headroom; positive when the check passes
};

struct RegimeReport {
  double delta_x = 0.0;
  std::vector<RegimeCheck> checks;
  std::vector<std::string> notes;

  bool all_passed() const;
};

struct RegimeLimits {
  double expansion_ratio = 0.1;       // "much smaller than" threshold
  double casimir_separation = 157e-6; // minimum surface separation, m
};

ModelParams derive_model_params(const PhysicalSetup& setup,
                                const Constants& c = kCodata2018);

SqueezedFrame derive_squeezed_frame(const ModelParams& mp);

/// Squeezing parameter s = ln(omega_tilde / delta) / 4; throws UnstableFrame
/// unless delta > 0.
double squeezing_parameter(double omega_tilde, double delta);

/// Drive strength F producing squeezing s at fixed omega_tilde.
double drive_for_squeezing(double omega_tilde, double s);

RegimeReport regime_report(const PhysicalSetup& setup, const SqueezedFrame& frame,
                           const RegimeLimits& limits = {},
                           const Constants& c = kCodata2018);

}  // namespace gie::units
