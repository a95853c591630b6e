#include "locc/qmat.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "locc/error.hpp"

namespace locc {

namespace {

std::vector<int> strides_of(const Dims& dims) {
  std::vector<int> strides(dims.size(), 1);
  for (int k = static_cast<int>(dims.size()) - 2; k >= 0; --k) {
    strides[k] = strides[k + 1] * dims[k + 1];
  }
  return strides;
}

void check_dims(const Dims& dims, Eigen::Index n) {
  if (dims.empty()) throw DimensionError("empty subsystem dimension list");
  for (int d : dims) {
    if (d < 1) throw DimensionError("subsystem dimensions must be positive");
  }
  if (total_dim(dims) != n) {
    std::ostringstream os;
    os << "subsystem dimensions multiply to " << total_dim(dims) << " but matrix has dimension " << n;
    throw DimensionError(os.str());
  }
}

// Offsets into the full index space for every joint value of the listed
// subsystems, enumerated in row-major order of those subsystems.
std::vector<int> subsystem_offsets(const Dims& dims, const std::vector<int>& strides,
                                   const std::vector<int>& which) {
  std::vector<int> offsets{0};
  for (int s : which) {
    std::vector<int> next;
    next.reserve(offsets.size() * dims[s]);
    for (int base : offsets) {
      for (int v = 0; v < dims[s]; ++v) next.push_back(base + v * strides[s]);
    }
    offsets = std::move(next);
  }
  return offsets;
}

std::vector<int> validated_subset(std::span<const int> keep, std::size_t n) {
  std::vector<int> out(keep.begin(), keep.end());
  std::vector<bool> seen(n, false);
  for (int k : out) {
    if (k < 0 || static_cast<std::size_t>(k) >= n) {
      throw DimensionError("subsystem index " + std::to_string(k) + " out of range");
    }
    if (seen[k]) throw DimensionError("subsystem index " + std::to_string(k) + " repeated");
    seen[k] = true;
  }
  return out;
}

// Maps each input basis index to its position after permuting subsystems.
std::vector<int> permutation_map(const Dims& dims, std::span<const int> perm) {
  if (perm.size() != dims.size()) throw DimensionError("permutation length does not match subsystem count");
  auto p = validated_subset(perm, dims.size());
  Dims out_dims(dims.size());
  for (std::size_t k = 0; k < p.size(); ++k) out_dims[k] = dims[p[k]];
  const auto in_strides = strides_of(dims);
  const auto out_strides = strides_of(out_dims);
  const int n = total_dim(dims);
  std::vector<int> map(n);
  for (int i = 0; i < n; ++i) {
    int out = 0;
    for (std::size_t k = 0; k < p.size(); ++k) {
      const int digit = (i / in_strides[p[k]]) % dims[p[k]];
      out += digit * out_strides[k];
    }
    map[i] = out;
  }
  return map;
}

}  // namespace

int total_dim(const Dims& dims) {
  return std::accumulate(dims.begin(), dims.end(), 1, std::multiplies<>());
}

double max_hermitian_deviation(const CMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const CMatrix& m, double tol) { return max_hermitian_deviation(m) <= tol; }

CMatrix hermitian_part(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

// DensityMatrix

DensityMatrix::DensityMatrix(CMatrix mat, Dims dims, bool validate) : mat_(std::move(mat)), dims_(std::move(dims)) {
  if (mat_.rows() != mat_.cols()) throw DimensionError("density matrix must be square");
  check_dims(dims_, mat_.rows());
  if (validate) {
    const double dev = max_hermitian_deviation(mat_);
    if (dev > kHermitianTol) {
      throw InvalidStateError("density matrix is not Hermitian (deviation " + std::to_string(dev) + ")");
    }
    const Complex tr = mat_.trace();
    if (std::abs(tr - Complex(1.0, 0.0)) > kTraceTol) {
      throw InvalidStateError("density matrix trace is " + std::to_string(tr.real()) + ", expected 1");
    }
  }
  mat_ = hermitian_part(mat_);
  if (validate) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(mat_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -kNegativeEigTol) {
      throw InvalidStateError("density matrix has negative eigenvalue " + std::to_string(es.eigenvalues().minCoeff()));
    }
  }
}

DensityMatrix::DensityMatrix(CMatrix mat, Dims dims) : DensityMatrix(std::move(mat), std::move(dims), true) {}

DensityMatrix::DensityMatrix(CMatrix mat) : DensityMatrix(mat, Dims{static_cast<int>(mat.rows())}, true) {}

DensityMatrix DensityMatrix::from_vector(const CVector& psi, Dims dims) {
  const double norm = psi.norm();
  if (std::abs(norm - 1.0) > kTraceTol) {
    throw InvalidStateError("state vector is not normalised (norm " + std::to_string(norm) + ")");
  }
  return DensityMatrix(psi * psi.adjoint(), std::move(dims), false);
}

DensityMatrix DensityMatrix::unchecked(CMatrix mat, Dims dims) {
  return DensityMatrix(std::move(mat), std::move(dims), false);
}

double DensityMatrix::purity() const { return (mat_ * mat_).trace().real(); }

// Spectrum

CMatrix Spectrum::reconstruct() const {
  return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
}

Spectrum hermitian_eig(const CMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("hermitian_eig: matrix must be square");
  const double dev = max_hermitian_deviation(m);
  if (dev > kHermitianTol) {
    throw InvalidStateError("hermitian_eig: matrix is not Hermitian (deviation " + std::to_string(dev) + ")");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(m));
  // Eigen returns ascending order.
  Spectrum s;
  s.eigenvalues = es.eigenvalues().reverse();
  s.eigenvectors = es.eigenvectors().rowwise().reverse();
  return s;
}

RVector clean_state_spectrum(const RVector& eigenvalues) {
  RVector out = eigenvalues;
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    if (out[i] < -kNegativeEigTol) {
      throw InvalidStateError("eigenvalue " + std::to_string(out[i]) + " below tolerance");
    }
    out[i] = std::clamp(out[i], 0.0, 1.0 + 1e-9);
  }
  return out;
}

// Products and reshuffles

CMatrix tensor(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CVector tensor(const CVector& a, const CVector& b) {
  CVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a[i] * b;
  return out;
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  Dims dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  return DensityMatrix::unchecked(tensor(a.mat(), b.mat()), std::move(dims));
}

CMatrix partial_trace(const CMatrix& m, const Dims& dims, std::span<const int> keep) {
  check_dims(dims, m.rows());
  if (keep.empty()) throw DimensionError("partial_trace: keep set is empty");
  auto kept = validated_subset(keep, dims.size());
  std::sort(kept.begin(), kept.end());
  std::vector<int> traced;
  for (int k = 0; k < static_cast<int>(dims.size()); ++k) {
    if (std::find(kept.begin(), kept.end(), k) == kept.end()) traced.push_back(k);
  }
  const auto strides = strides_of(dims);
  const auto kept_off = subsystem_offsets(dims, strides, kept);
  const auto traced_off = subsystem_offsets(dims, strides, traced);
  const auto dk = static_cast<Eigen::Index>(kept_off.size());
  CMatrix out = CMatrix::Zero(dk, dk);
  for (Eigen::Index r = 0; r < dk; ++r) {
    for (Eigen::Index c = 0; c < dk; ++c) {
      Complex acc = 0.0;
      for (int t : traced_off) acc += m(kept_off[r] + t, kept_off[c] + t);
      out(r, c) = acc;
    }
  }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep) {
  CMatrix reduced = partial_trace(rho.mat(), rho.dims(), keep);
  std::vector<int> kept(keep.begin(), keep.end());
  std::sort(kept.begin(), kept.end());
  Dims dims;
  for (int k : kept) dims.push_back(rho.dims()[k]);
  return DensityMatrix::unchecked(std::move(reduced), std::move(dims));
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::initializer_list<int> keep) {
  return partial_trace(rho, std::span<const int>(keep.begin(), keep.size()));
}

CMatrix permute_subsystems(const CMatrix& m, const Dims& dims, std::span<const int> perm) {
  check_dims(dims, m.rows());
  const auto map = permutation_map(dims, perm);
  const auto n = static_cast<Eigen::Index>(map.size());
  CMatrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) out(map[i], map[j]) = m(i, j);
  }
  return out;
}

DensityMatrix permute_subsystems(const DensityMatrix& rho, std::span<const int> perm) {
  CMatrix out = permute_subsystems(rho.mat(), rho.dims(), perm);
  Dims dims;
  for (int p : perm) dims.push_back(rho.dims()[p]);
  return DensityMatrix::unchecked(std::move(out), std::move(dims));
}

CVector permute_subsystems(const CVector& psi, const Dims& dims, std::span<const int> perm) {
  check_dims(dims, psi.size());
  const auto map = permutation_map(dims, perm);
  CVector out(psi.size());
  for (Eigen::Index i = 0; i < psi.size(); ++i) out[map[i]] = psi[i];
  return out;
}

CMatrix partial_transpose(const CMatrix& m, const Dims& dims, std::span<const int> subsystems) {
  check_dims(dims, m.rows());
  auto which = validated_subset(subsystems, dims.size());
  const auto strides = strides_of(dims);
  const auto n = m.rows();
  CMatrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      Eigen::Index ti = i, tj = j;
      for (int s : which) {
        const int di = static_cast<int>((i / strides[s]) % dims[s]);
        const int dj = static_cast<int>((j / strides[s]) % dims[s]);
        ti += (dj - di) * strides[s];
        tj += (di - dj) * strides[s];
      }
      out(ti, tj) = m(i, j);
    }
  }
  return out;
}

// Entropies

double entropy_bits(std::span<const double> probs) {
  double h = 0.0;
  for (double p : probs) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

double entropy_bits(const RVector& probs) {
  return entropy_bits(std::span<const double>(probs.data(), static_cast<std::size_t>(probs.size())));
}

double von_neumann_entropy(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho.mat(), Eigen::EigenvaluesOnly);
  return std::max(0.0, entropy_bits(clean_state_spectrum(es.eigenvalues())));
}

double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw DimensionError("relative_entropy: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(sigma.mat());
  const RVector lambda = es.eigenvalues();
  const CMatrix& v = es.eigenvectors();
  // Diagonal of rho in sigma's eigenbasis.
  const RVector weights = (v.adjoint() * rho.mat() * v).diagonal().real();
  // Eigenvalues this close to zero are treated as the kernel of sigma.
  const double kernel_cut = 1e-14 * std::max(1.0, lambda.cwiseAbs().maxCoeff());
  double kernel_weight = 0.0;
  double cross = 0.0;
  for (Eigen::Index k = 0; k < lambda.size(); ++k) {
    if (lambda[k] <= kernel_cut) {
      kernel_weight += std::max(0.0, weights[k]);
    } else {
      cross += weights[k] * std::log2(lambda[k]);
    }
  }
  if (kernel_weight > 1e-9) return kInfiniteRelativeEntropy;
  return std::max(0.0, -von_neumann_entropy(rho) - cross);
}

CMatrix matrix_log2(const CMatrix& m, double floor) {
  Spectrum s = hermitian_eig(m);
  RVector logs = s.eigenvalues.unaryExpr([floor](double x) { return std::log2(std::max(x, floor)); });
  return s.eigenvectors * logs.cast<Complex>().asDiagonal() * s.eigenvectors.adjoint();
}

DensityMatrix conjugate(const DensityMatrix& rho) {
  return DensityMatrix::unchecked(rho.mat().conjugate(), rho.dims());
}

double trace_norm_hermitian(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

}  // namespace locc
