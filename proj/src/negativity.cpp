#include "gie/negativity.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gie/errors.hpp"

namespace gie::negativity {

namespace {

std::vector<std::size_t> strides_of(const Dims& dims) {
  std::vector<std::size_t> strides(dims.size(), 1);
  for (std::size_t k = dims.size(); k-- > 1;) strides[k - 1] = strides[k] * dims[k];
  return strides;
}

void check_square(const CMatrix& m, const Dims& dims) {
  const auto n = static_cast<Eigen::Index>(total_dimension(dims));
  if (m.rows() != m.cols() || m.rows() != n) {
    throw Error(ErrorCode::DimensionMismatch,
                "matrix is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                    " but dims multiply to " + std::to_string(n));
  }
}

void check_subsystems(const std::vector<std::size_t>& subs, const Dims& dims) {
  for (auto k : subs) {
    if (k >= dims.size()) {
      throw Error(ErrorCode::DimensionMismatch,
                  "subsystem index " + std::to_string(k) + " out of range");
    }
  }
}

double asymmetry(const CMatrix& m) { return (m - m.adjoint()).cwiseAbs().maxCoeff(); }

}  // namespace

std::size_t total_dimension(const Dims& dims) {
  std::size_t n = 1;
  for (auto d : dims) {
    if (d == 0) throw Error(ErrorCode::DimensionMismatch, "zero subsystem dimension");
    n *= d;
  }
  return n;
}

void DensityMatrix::validate() const {
  check_square(data, dims);
  if (asymmetry(data) > tolerance) {
    throw Error(ErrorCode::NonHermitianInput, "density matrix is not Hermitian");
  }
  const double tr = data.trace().real();
  if (std::fabs(tr - 1.0) > tolerance) {
    throw Error(ErrorCode::InvalidArgument, "density matrix trace " + std::to_string(tr) + " != 1");
  }
  const CMatrix herm = 0.5 * (data + data.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(herm, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::EigenFailure, "eigensolver failed");
  if (es.eigenvalues().minCoeff() < -tolerance) {
    throw Error(ErrorCode::InvalidArgument, "density matrix has a negative eigenvalue");
  }
}

CMatrix partial_transpose(const CMatrix& rho, const Dims& dims,
                          const std::vector<std::size_t>& subsystems) {
  check_square(rho, dims);
  check_subsystems(subsystems, dims);
  const auto strides = strides_of(dims);
  const auto n = rho.rows();
  CMatrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      auto ii = static_cast<std::size_t>(i);
      auto jj = static_cast<std::size_t>(j);
      for (auto k : subsystems) {
        const std::size_t di = (static_cast<std::size_t>(i) / strides[k]) % dims[k];
        const std::size_t dj = (static_cast<std::size_t>(j) / strides[k]) % dims[k];
        ii = ii - di * strides[k] + dj * strides[k];
        jj = jj - dj * strides[k] + di * strides[k];
      }
      out(static_cast<Eigen::Index>(ii), static_cast<Eigen::Index>(jj)) = rho(i, j);
    }
  }
  return out;
}

CMatrix partial_transpose(const CMatrix& rho, const Dims& dims, std::size_t subsystem) {
  return partial_transpose(rho, dims, std::vector<std::size_t>{subsystem});
}

namespace {

struct Split {
  std::vector<std::size_t> kept_index;    // full index -> kept multi-index
  std::vector<std::size_t> traced_index;  // full index -> traced multi-index
  std::size_t kept_dim = 1;
  std::size_t traced_dim = 1;
};

Split split_indices(const Dims& dims, const std::vector<std::size_t>& keep) {
  check_subsystems(keep, dims);
  std::vector<bool> is_kept(dims.size(), false);
  for (auto k : keep) {
    if (is_kept[k]) throw Error(ErrorCode::DimensionMismatch, "subsystem listed twice");
    is_kept[k] = true;
  }
  Split s;
  const auto strides = strides_of(dims);
  const std::size_t n = total_dimension(dims);
  for (std::size_t k = 0; k < dims.size(); ++k) (is_kept[k] ? s.kept_dim : s.traced_dim) *= dims[k];
  s.kept_index.resize(n);
  s.traced_index.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t kept = 0, traced = 0;
    for (std::size_t k = 0; k < dims.size(); ++k) {
      const std::size_t digit = (i / strides[k]) % dims[k];
      if (is_kept[k]) {
        kept = kept * dims[k] + digit;
      } else {
        traced = traced * dims[k] + digit;
      }
    }
    s.kept_index[i] = kept;
    s.traced_index[i] = traced;
  }
  return s;
}

}  // namespace

CMatrix partial_trace(const CMatrix& rho, const Dims& dims, const std::vector<std::size_t>& keep) {
  check_square(rho, dims);
  const Split s = split_indices(dims, keep);
  const auto n = static_cast<std::size_t>(rho.rows());
  CMatrix out = CMatrix::Zero(static_cast<Eigen::Index>(s.kept_dim),
                              static_cast<Eigen::Index>(s.kept_dim));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (s.traced_index[i] != s.traced_index[j]) continue;
      out(static_cast<Eigen::Index>(s.kept_index[i]), static_cast<Eigen::Index>(s.kept_index[j])) +=
          rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  return out;
}

CMatrix partial_trace_pure(const CVector& psi, const Dims& dims,
                           const std::vector<std::size_t>& keep) {
  if (static_cast<std::size_t>(psi.size()) != total_dimension(dims)) {
    throw Error(ErrorCode::DimensionMismatch, "state vector length does not match dims");
  }
  const Split s = split_indices(dims, keep);
  CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(s.kept_dim),
                            static_cast<Eigen::Index>(s.traced_dim));
  for (std::size_t i = 0; i < s.kept_index.size(); ++i) {
    m(static_cast<Eigen::Index>(s.kept_index[i]), static_cast<Eigen::Index>(s.traced_index[i])) =
        psi(static_cast<Eigen::Index>(i));
  }
  return m * m.adjoint();
}

double log_negativity_of_transpose(const CMatrix& transposed) {
  if (transposed.rows() != transposed.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "partial transpose must be square");
  }
  if (asymmetry(transposed) > kHermitianTolerance) {
    throw Error(ErrorCode::NonHermitianInput, "partial transpose is not Hermitian");
  }
  const CMatrix herm = 0.5 * (transposed + transposed.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(herm, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::EigenFailure, "eigensolver failed");
  const double trace_norm = es.eigenvalues().cwiseAbs().sum();
  const double en = std::log2(trace_norm);
  if (!std::isfinite(en)) throw Error(ErrorCode::InvalidArgument, "trace norm is not finite");
  if (en < 0.0 && en > -kClampTolerance) return 0.0;
  return std::max(0.0, en);
}

double log_negativity(const DensityMatrix& rho, std::size_t subsystem) {
  check_subsystems({subsystem}, rho.dims);
  rho.validate();
  return log_negativity_of_transpose(partial_transpose(rho.data, rho.dims, subsystem));
}

namespace {

struct ReducedCut {
  std::vector<std::size_t> keep;
  Dims dims;
  std::vector<std::size_t> transpose;  // indices into the reduced dims
};

ReducedCut resolve_cut(const Dims& dims, const Partition& p) {
  check_subsystems(p.side_a, dims);
  check_subsystems(p.side_b, dims);
  if (p.side_a.empty()) throw Error(ErrorCode::DimensionMismatch, "empty side of the cut");
  std::vector<std::size_t> b = p.side_b;
  if (b.empty()) {
    for (std::size_t k = 0; k < dims.size(); ++k) {
      if (std::find(p.side_a.begin(), p.side_a.end(), k) == p.side_a.end()) b.push_back(k);
    }
  }
  if (b.empty()) throw Error(ErrorCode::DimensionMismatch, "empty side of the cut");
  for (auto k : b) {
    if (std::find(p.side_a.begin(), p.side_a.end(), k) != p.side_a.end()) {
      throw Error(ErrorCode::DimensionMismatch, "the two sides of the cut overlap");
    }
  }
  ReducedCut cut;
  cut.keep = p.side_a;
  cut.keep.insert(cut.keep.end(), b.begin(), b.end());
  std::sort(cut.keep.begin(), cut.keep.end());
  for (std::size_t r = 0; r < cut.keep.size(); ++r) {
    cut.dims.push_back(dims[cut.keep[r]]);
    if (std::find(b.begin(), b.end(), cut.keep[r]) != b.end()) cut.transpose.push_back(r);
  }
  return cut;
}

}  // namespace

double en_bipartition(const CVector& psi, const Dims& dims, const Partition& partition) {
  const ReducedCut cut = resolve_cut(dims, partition);
  const CMatrix reduced = partial_trace_pure(psi, dims, cut.keep);
  return log_negativity_of_transpose(partial_transpose(reduced, cut.dims, cut.transpose));
}

double en_bipartition(const CMatrix& rho, const Dims& dims, const Partition& partition) {
  const ReducedCut cut = resolve_cut(dims, partition);
  const CMatrix reduced = cut.keep.size() == dims.size() ? rho : partial_trace(rho, dims, cut.keep);
  return log_negativity_of_transpose(partial_transpose(reduced, cut.dims, cut.transpose));
}

}  // namespace gie::negativity
