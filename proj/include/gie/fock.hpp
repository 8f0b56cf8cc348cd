#pragma once

// Brute-force numerical backend on the truncated space TP (x) qubit (x)
// oscillator = 2 (x) 2 (x) N. TP basis {|R>, |L>}, qubit basis {|0>, |1>},
// oscillator basis |0>..|N-1>; the oscillator is the least significant
// index. Hamiltonians are time independent, so evolution is exact via one
// eigendecomposition.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gie/analytic.hpp"
#include "gie/linalg.hpp"
#include "gie/negativity.hpp"
#include "gie/units.hpp"

namespace gie::fock {

inline constexpr std::size_t kTp = 0;
inline constexpr std::size_t kQubit = 1;
inline constexpr std::size_t kMediator = 2;

negativity::Dims system_dims(std::size_t cutoff);

/// Lowering operator on |0>..|N-1>: <n-1|a|n> = sqrt(n).
CMatrix annihilation(std::size_t cutoff);

struct TruncatedOperator {
  CMatrix matrix;
  std::size_t cutoff = 0;
};

/// Pure or mixed state on 2 (x) 2 (x) N.
class TruncatedState {
 public:
  TruncatedState(CVector amplitudes, std::size_t cutoff, double tail_mass = 0.0);
  TruncatedState(CMatrix density, std::size_t cutoff, double tail_mass = 0.0);

  bool is_pure() const { return pure_; }
  const CVector& vector() const;
  CMatrix density() const;
  std::size_t cutoff() const { return cutoff_; }
  /// Probability that fell outside the retained levels during preparation.
  double tail_mass() const { return tail_mass_; }
  double norm() const;
  /// Population of oscillator level N-1.
  double top_level_population() const;

 private:
  bool pure_ = true;
  CVector psi_;
  CMatrix rho_;
  std::size_t cutoff_;
  double tail_mass_;
};

/// Lab-frame Hamiltonian, zero-point energy dropped:
/// w_a sa + w_b sb + (w~ - 2F) a^dag a + eps (a + a^dag) - F (a^dag^2 + a^2)
///   + (g_a sa + g_b sb)(a + a^dag).
TruncatedOperator build_hamiltonian_lab(const units::ModelParams& mp, std::size_t cutoff);

/// Squeezed-frame Hamiltonian
/// w_a sa + w_b sb + w_s a_s^dag a_s + (g_a^s sa + g_b^s sb)(a_s + a_s^dag).
TruncatedOperator build_hamiltonian_squeezed(const units::SqueezedFrame& frame, double omega_a,
                                             double omega_b, std::size_t cutoff);

/// Builds an oscillator state by applying exp(generator) steps to a coherent
/// vector in a padded basis and then truncating to `cutoff` levels.
class OscillatorPrep {
 public:
  explicit OscillatorPrep(cplx alpha0);

  /// Applies S(xi) = exp((conj(xi) a^2 - xi a^dag^2) / 2).
  OscillatorPrep& squeeze(cplx xi);
  /// Applies D(beta) = exp(beta a^dag - conj(beta) a).
  OscillatorPrep& displace(cplx beta);

  /// Throws CutoffTooSmall when more than `tail_threshold` of the
  /// probability lies beyond level cutoff - 1. The result is renormalized.
  CVector build(std::size_t cutoff, double tail_threshold, double* tail_out = nullptr) const;

 private:
  struct Step {
    bool squeeze;
    cplx value;
  };
  cplx alpha0_;
  std::vector<Step> steps_;
};

/// D(beta) S(xi) |alpha0> truncated to `cutoff` levels.
CVector displaced_squeezed_coherent(cplx beta, const analytic::MediatorState& med,
                                    std::size_t cutoff, double tail_threshold);

enum class Frame { Squeezed, Lab };

const char* frame_name(Frame f);
Frame parse_frame(const std::string& name);

/// (|L>+|R>)/sqrt2 (x) (|1>+|0>)/sqrt2 (x) mediator.
///
/// In the squeezed frame the mediator is S(xi)|alpha0> in the a_s basis. In
/// the lab frame the same physical state is expressed in the bare a basis:
/// a_s = cosh(s) a - sinh(s) a^dag is implemented by S(-s), so the lab vector
/// is S(-s) S(xi)|alpha0>.
TruncatedState prepare_initial(const analytic::MediatorState& med, std::size_t cutoff,
                               double tail_threshold = 1e-8, Frame frame = Frame::Squeezed,
                               double frame_s = 0.0);

/// Reusable exp(-i H t). Block-diagonal spin structure of H, when present,
/// is detected and each 2x2 spin sector is diagonalized on its own.
class Propagator {
 public:
  explicit Propagator(const TruncatedOperator& h);

  TruncatedState evolve(const TruncatedState& state, double t) const;
  std::size_t cutoff() const { return cutoff_; }
  bool block_diagonal() const { return blocks_.size() > 1; }

 private:
  struct Block {
    Eigen::Index offset;
    Eigen::VectorXd energies;
    CMatrix vectors;
  };
  std::vector<Block> blocks_;
  std::size_t cutoff_;
};

TruncatedState evolve(const TruncatedState& state, const TruncatedOperator& h, double t);

double expectation(const TruncatedState& state, const TruncatedOperator& op);

/// Entanglement across the three cuts used throughout.
struct CutEntanglement {
  double tp_qubit = 0.0;
  double tp_mediator = 0.0;
  double qubit_mediator = 0.0;
};

/// TP-qubit reduced state with the phenomenological dephasing factors on
/// its qubit/TP coherences.
Matrix4c tp_qubit_state(const TruncatedState& state, const analytic::Dephasing& dephasing = {},
                        double t = 0.0);

double en_tp_qubit(const TruncatedState& state, const analytic::Dephasing& dephasing = {},
                   double t = 0.0);
CutEntanglement en_all_cuts(const TruncatedState& state,
                            const analytic::Dephasing& dephasing = {}, double t = 0.0);

/// What the oracle simulates.
struct OracleConfig {
  Frame frame = Frame::Squeezed;
  units::ModelParams model;
  analytic::MediatorInit init;
  analytic::Dephasing dephasing;
  double tail_threshold = 1e-8;
  double tolerance = 1e-4;
  std::size_t n_start = 2;
  std::size_t n_max = 512;
};

struct ConvergenceStep {
  std::size_t cutoff;
  double max_deviation;  // vs the doubled cutoff; NaN when not evaluated
  double tail;
  std::string note;
};

struct ConvergenceReport {
  std::size_t cutoff = 0;
  double max_deviation = 0.0;
  double tail = 0.0;
  std::vector<ConvergenceStep> history;
};

/// Time series of the TP-qubit EN at a fixed cutoff.
std::vector<double> oracle_en_series(const OracleConfig& config, std::size_t cutoff,
                                     std::span<const double> t_grid, double* tail_out = nullptr);

/// Smallest N of the doubling schedule n_start, 2 n_start, ... such that
/// max_t |EN_N - EN_2N| < tolerance and the tail occupation stays below
/// tail_threshold. Throws NoConvergence past n_max.
ConvergenceReport converge_cutoff(const OracleConfig& config, std::span<const double> t_grid);

/// All-cut EN on a time grid at a given cutoff.
struct OracleSeries {
  std::vector<double> t;
  std::vector<CutEntanglement> en;
  std::size_t cutoff = 0;
  double tail = 0.0;
};

OracleSeries oracle_cut_series(const OracleConfig& config, std::size_t cutoff,
                               std::span<const double> t_grid, unsigned threads = 1);

}  // namespace gie::fock
