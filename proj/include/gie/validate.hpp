#pragma once

// Equivalence checks between the closed-form dynamics and the Fock oracle.
// Failures, including NoConvergence, become failed checks; nothing here
// throws for a numerical mismatch.

#include <cstddef>
#include <string>
#include <vector>

#include "gie/config.hpp"
#include "gie/sweep.hpp"
#include "json.hpp"

namespace gie::validation {

enum class Status { Pass, Fail, Skipped };

const char* status_name(Status s);

struct CheckResult {
  std::string name;
  Status status = Status::Fail;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  std::size_t samples = 0;
  std::vector<std::string> notes;
  nlohmann::json details = nlohmann::json::object();

  bool failed() const { return status == Status::Fail; }
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  std::vector<std::string> notes;

  bool all_passed() const;
  const CheckResult* find(const std::string& name) const;
  nlohmann::json to_json() const;
};

/// Squeezing above which lab-frame oracle runs are not attempted.
inline constexpr double kLabFrameMaxSqueezing = 0.5;

/// Random (alpha_i, alpha_j, alpha0, xi) tuples with |xi| <= 1: closed-form
/// overlap vs the inner product of truncated Fock vectors. `flip_phase`
/// corrupts the closed-form phase factor (negative control).
CheckResult check_overlap_oracle(unsigned seed, std::size_t samples, bool flip_phase = false,
                                 double tolerance = 1e-8, double tail = 1e-10);

/// Random squeezed-frame models with s <= max_s: closed-form 4x4 partial
/// transpose vs the oracle's, entrywise.
CheckResult check_pt_matrix_oracle(unsigned seed, std::size_t samples, double max_s = 0.5,
                                   double tolerance = 1e-6);

/// TP-qubit EN(t) over two mediator periods, closed form vs converged oracle.
CheckResult check_en_timeseries(const sweep::ModelPoint& point, const sweep::OracleSettings& oracle,
                                std::size_t points, unsigned threads, double tolerance = 1e-3);

/// |alpha_k(t_n)| for n = 1..4 and the mediator cuts of the oracle at t_1, t_2.
CheckResult check_decoupling(const sweep::ModelPoint& point, const sweep::OracleSettings& oracle,
                             double alpha_tolerance = 1e-12, double en_tolerance = 1e-3);

/// Lab-frame oracle at F = 0 with epsilon in {0, 0.1, 1} omega_tilde over
/// t in [0, 4 pi / omega_tilde].
CheckResult check_epsilon_irrelevance(const sweep::ModelPoint& point,
                                      const sweep::OracleSettings& oracle, std::size_t points,
                                      unsigned threads, double tolerance = 1e-3);

/// Lab-frame vs squeezed-frame oracle for the same model.
CheckResult check_frame_equivalence(const sweep::ModelPoint& point,
                                    const sweep::OracleSettings& oracle, std::size_t points,
                                    unsigned threads, double tolerance = 1e-3);

ValidationReport run_validation(const io::RunConfig& cfg, unsigned threads = 1);

}  // namespace gie::validation
