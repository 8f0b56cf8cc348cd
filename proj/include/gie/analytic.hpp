#pragma once

// Closed-form evolution of the TP-qubit-mediator system in the squeezed
// frame. The mediator Hamiltonian is a driven oscillator whose drive is
// conditioned on the two sigma^z eigenvalues, so every spin branch stays a
// displaced copy of the initial mediator state and the reduced TP-qubit state
// follows from coherent-state overlaps.
//
// Two-qubit basis ordering everywhere in this module:
//   index 0: |R,0>   index 1: |R,1>   index 2: |L,0>   index 3: |L,1>
// with sigma_a^z = |L><L| - |R><R| and sigma_b^z = |1><1| - |0><0|.
// Time and rates may use any consistent unit; presets use 1/omega_tilde.

#include <array>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "gie/linalg.hpp"
#include "gie/units.hpp"

namespace gie::analytic {

/// Initial mediator state S(xi)|alpha0> with xi = xi_mag * exp(i theta).
struct MediatorInit {
  cplx alpha0{1.0, 0.0};
  std::optional<double> xi_mag;  // defaults to the frame's squeezing parameter
  double theta = units::kPi;

  cplx xi(const units::SqueezedFrame& frame) const;

  bool operator==(const MediatorInit&) const = default;
};

/// Mediator state with the squeezing resolved to a number.
struct MediatorState {
  cplx alpha0{1.0, 0.0};
  cplx xi{0.0, 0.0};
};

MediatorState resolve(const MediatorInit& init, const units::SqueezedFrame& frame);

/// Branches in the order the evolved state is usually written:
/// k = 0: |R,0>, k = 1: |L,1>, k = 2: |R,1>, k = 3: |L,0>.
enum class Branch : int { R0 = 0, L1 = 1, R1 = 2, L0 = 3 };

/// sigma_a^z and sigma_b^z eigenvalues of a branch.
std::pair<int, int> branch_spins(Branch b);

struct BranchState {
  double t = 0.0;
  cplx alpha_t{0.0, 0.0};             // (exp(-i omega_s t) - 1) / omega_s
  double phi = 0.0;                   // conditional sigma_a^z sigma_b^z phase
  std::array<double, 4> Phi{};        // per-branch Baker-Campbell-Hausdorff phases
  std::array<cplx, 4> alpha_k{};      // mediator displacement of each branch
  std::array<cplx, 4> coefficient{};  // branch amplitude (without the 1/2)
  units::SqueezedFrame frame;
  MediatorState init;
};

/// Evolved branch data at time t >= 0.
///
/// Branch k evolves as 1/2 * coefficient[k] |A_k B_k> D(alpha_k[k]) |zeta>,
/// which is exp(-i H_s t) up to the local sigma^z phases and the free
/// rotation of the mediator. With lambda_k = g_a_s sigma_a + g_b_s sigma_b:
///   alpha_k = -lambda_k * conj(alpha_t)
///   coefficient = exp(i (phi sigma_a sigma_b + Phi_k)).
BranchState branch_state(const units::SqueezedFrame& frame, const MediatorInit& init, double t);

/// Branch state at t = cycles * t_period; integer cycles are exact
/// decoupling times (alpha_t = 0 identically).
BranchState branch_state_at_cycles(const units::SqueezedFrame& frame, const MediatorInit& init,
                                   double cycles);

/// <zeta| D(a_i)^dagger D(a_j) |zeta> for |zeta> = S(xi)|alpha0>.
cplx displaced_overlap(cplx a_i, cplx a_j, const MediatorState& init);

struct Dephasing {
  double qubit = 0.0;  // gamma on qubit coherences
  double tp = 0.0;     // optional rate on TP coherences

  bool operator==(const Dephasing&) const = default;
};

/// Partially transposed (on the qubit) TP-qubit density matrix, 4x4.
class HermitianMatrix4 {
 public:
  explicit HermitianMatrix4(const Matrix4c& m);

  const Matrix4c& matrix() const { return m_; }
  cplx operator()(int i, int j) const { return m_(i, j); }

 private:
  Matrix4c m_;
};

/// Closed-form partial transpose at time t with the phenomenological
/// dephasing factors exp(-gamma t) applied to the coherences.
HermitianMatrix4 partial_transpose_matrix(const units::SqueezedFrame& frame,
                                          const MediatorInit& init, double t,
                                          const Dephasing& dephasing = {});

/// Same, from an already evaluated branch state.
HermitianMatrix4 partial_transpose_matrix(const BranchState& state,
                                          const Dephasing& dephasing = {});

/// Reduced TP-qubit density matrix (before transposition) built from the
/// branch amplitudes and the mediator overlaps.
Matrix4c reduced_density_matrix(const BranchState& state, const Dephasing& dephasing = {});

/// max{0, log2[1 + |sin(2 g_eff t_n)|]}; valid at decoupling times only.
double en_at_decoupling(double g_eff, double t_n);

struct TimePoint {
  double t;
  double en;
};

std::vector<TimePoint> en_timeseries(const units::SqueezedFrame& frame, const MediatorInit& init,
                                     std::span<const double> t_grid,
                                     const Dephasing& dephasing = {});

double en_at(const units::SqueezedFrame& frame, const MediatorInit& init, double t,
             const Dephasing& dephasing = {});

}  // namespace gie::analytic
