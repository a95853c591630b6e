#pragma once

// Dense complex linear algebra and quantum-state primitives. Every quantity
// measured in information units is in bits (log base 2).

#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace locc {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using Dims = std::vector<int>;

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kNegativeEigTol = 1e-9;
inline constexpr double kReconstructionTol = 1e-8;

/// Returned by relative_entropy when supp(rho) is not inside supp(sigma).
inline constexpr double kInfiniteRelativeEntropy = std::numeric_limits<double>::infinity();

/// Product of all entries of `dims`.
int total_dim(const Dims& dims);

double max_hermitian_deviation(const CMatrix& m);
bool is_hermitian(const CMatrix& m, double tol = kHermitianTol);

/// (M + M^dagger) / 2
CMatrix hermitian_part(const CMatrix& m);

/// Hermitian, PSD, unit-trace matrix with subsystem dimension metadata.
class DensityMatrix {
 public:
  /// Validates Hermiticity, trace and positivity; throws InvalidStateError or
  /// DimensionError. Numerical asymmetry below kHermitianTol is symmetrised.
  DensityMatrix(CMatrix mat, Dims dims);

  /// Single-subsystem state.
  explicit DensityMatrix(CMatrix mat);

  /// |psi><psi|, psi must be normalised within kTraceTol.
  static DensityMatrix from_vector(const CVector& psi, Dims dims);

  /// Skips the positivity check. For results of operations that preserve
  /// positivity by construction (Kraus updates, partial traces, mixtures).
  static DensityMatrix unchecked(CMatrix mat, Dims dims);

  const CMatrix& mat() const noexcept { return mat_; }
  const Dims& dims() const noexcept { return dims_; }
  int dim() const noexcept { return static_cast<int>(mat_.rows()); }
  std::size_t num_subsystems() const noexcept { return dims_.size(); }

  /// tr(rho^2)
  double purity() const;

 private:
  DensityMatrix(CMatrix mat, Dims dims, bool validate);

  CMatrix mat_;
  Dims dims_;
};

/// Eigen-decomposition of a Hermitian matrix, eigenvalues descending.
struct Spectrum {
  RVector eigenvalues;
  CMatrix eigenvectors;  // columns

  CMatrix reconstruct() const;
};

CMatrix tensor(const CMatrix& a, const CMatrix& b);
CVector tensor(const CVector& a, const CVector& b);
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

/// Trace out every subsystem not listed in `keep`. Kept subsystems retain
/// their original relative order. Works on arbitrary (not necessarily
/// normalised) operators.
CMatrix partial_trace(const CMatrix& m, const Dims& dims, std::span<const int> keep);
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep);
DensityMatrix partial_trace(const DensityMatrix& rho, std::initializer_list<int> keep);

/// Reorder subsystems: subsystem `perm[k]` of the input becomes subsystem k of
/// the output.
CMatrix permute_subsystems(const CMatrix& m, const Dims& dims, std::span<const int> perm);
DensityMatrix permute_subsystems(const DensityMatrix& rho, std::span<const int> perm);
CVector permute_subsystems(const CVector& psi, const Dims& dims, std::span<const int> perm);

/// Transpose the listed subsystems.
CMatrix partial_transpose(const CMatrix& m, const Dims& dims, std::span<const int> subsystems);

/// Throws InvalidStateError if `m` is not Hermitian within kHermitianTol.
Spectrum hermitian_eig(const CMatrix& m);

/// Eigenvalues of a density matrix: values in [-kNegativeEigTol, 0) are set to
/// zero, anything more negative throws, and the top end is clipped at 1+1e-9.
RVector clean_state_spectrum(const RVector& eigenvalues);

/// -sum p log2 p over the entries of `probs`, with 0 log 0 = 0.
double entropy_bits(std::span<const double> probs);
double entropy_bits(const RVector& probs);

double von_neumann_entropy(const DensityMatrix& rho);

/// S(rho|sigma) = tr(rho log2 rho - rho log2 sigma), or
/// kInfiniteRelativeEntropy when tr(rho P_ker(sigma)) > 1e-9.
double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma);

/// log2 of a positive definite Hermitian matrix; eigenvalues below `floor` are
/// raised to `floor`.
CMatrix matrix_log2(const CMatrix& m, double floor = 1e-300);

/// Entrywise complex conjugate in the computational basis.
DensityMatrix conjugate(const DensityMatrix& rho);

/// Sum of absolute eigenvalues of a Hermitian matrix.
double trace_norm_hermitian(const CMatrix& m);

}  // namespace locc
