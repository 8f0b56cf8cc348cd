#pragma once

// Partial transposition and logarithmic negativity on finite-dimensional
// multipartite states. Subsystems are ordered as listed in `dims`, the first
// factor being the most significant index (row-major Kronecker ordering).

#include <cstddef>
#include <vector>

#include "gie/linalg.hpp"

namespace gie::negativity {

using Dims = std::vector<std::size_t>;

/// Asymmetry below which a matrix is symmetrized instead of rejected.
inline constexpr double kHermitianTolerance = 1e-10;

/// Negative EN rounding residue below this magnitude is clamped to zero.
inline constexpr double kClampTolerance = 1e-12;

struct DensityMatrix {
  CMatrix data;
  Dims dims;
  double tolerance = 1e-10;

  /// Throws DimensionMismatch, NonHermitianInput or InvalidArgument.
  void validate() const;
};

std::size_t total_dimension(const Dims& dims);

/// Transposes the bra/ket indices of each listed factor.
CMatrix partial_transpose(const CMatrix& rho, const Dims& dims,
                          const std::vector<std::size_t>& subsystems);
CMatrix partial_transpose(const CMatrix& rho, const Dims& dims, std::size_t subsystem);

/// Reduced state on `keep` (ascending order of the original factors).
CMatrix partial_trace(const CMatrix& rho, const Dims& dims, const std::vector<std::size_t>& keep);
CMatrix partial_trace_pure(const CVector& psi, const Dims& dims,
                           const std::vector<std::size_t>& keep);

/// max(0, log2 ||X||_1) for an already partially transposed Hermitian X.
double log_negativity_of_transpose(const CMatrix& transposed);

double log_negativity(const DensityMatrix& rho, std::size_t subsystem);

/// A cut between two disjoint groups of factors. An empty `side_b` means
/// the complement of `side_a`; factors in neither group are traced out.
struct Partition {
  std::vector<std::size_t> side_a;
  std::vector<std::size_t> side_b;
};

double en_bipartition(const CVector& psi, const Dims& dims, const Partition& partition);
double en_bipartition(const CMatrix& rho, const Dims& dims, const Partition& partition);

}  // namespace gie::negativity
