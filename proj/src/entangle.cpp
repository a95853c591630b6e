#include "locc/entangle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "locc/error.hpp"

namespace locc {

const char* to_string(EntanglementMeasure m) {
  switch (m) {
    case EntanglementMeasure::PureEntropy:
      return "pure_entropy";
    case EntanglementMeasure::EoF2q:
      return "eof_2q";
    case EntanglementMeasure::Negativity:
      return "negativity";
    case EntanglementMeasure::Ree:
      return "ree";
  }
  return "?";
}

EntanglementMeasure measure_from_string(const std::string& s) {
  if (s == "pure_entropy") return EntanglementMeasure::PureEntropy;
  if (s == "eof_2q") return EntanglementMeasure::EoF2q;
  if (s == "negativity") return EntanglementMeasure::Negativity;
  if (s == "ree") return EntanglementMeasure::Ree;
  throw InputError("measure", "unknown entanglement measure \"" + s + "\"");
}

DensityMatrix group_cut(const DensityMatrix& rho, const Bipartition& cut) {
  const int n = static_cast<int>(rho.num_subsystems());
  std::vector<bool> left(n, false);
  for (int k : cut.left) {
    if (k < 0 || k >= n) throw DimensionError("cut index " + std::to_string(k) + " out of range");
    if (left[k]) throw DimensionError("cut index " + std::to_string(k) + " repeated");
    left[k] = true;
  }
  std::vector<int> perm;
  int dl = 1, dr = 1;
  for (int k = 0; k < n; ++k) {
    if (left[k]) {
      perm.push_back(k);
      dl *= rho.dims()[k];
    }
  }
  for (int k = 0; k < n; ++k) {
    if (!left[k]) {
      perm.push_back(k);
      dr *= rho.dims()[k];
    }
  }
  if (static_cast<int>(cut.left.size()) == n || cut.left.empty()) {
    throw DimensionError("cut must leave both sides nonempty");
  }
  return DensityMatrix::unchecked(permute_subsystems(rho.mat(), rho.dims(), perm), Dims{dl, dr});
}

double pure_entanglement_entropy(const CVector& psi, const Dims& dims, const Bipartition& cut) {
  return von_neumann_entropy(partial_trace(group_cut(DensityMatrix::from_vector(psi, dims), cut), {0}));
}

namespace {

void require_two_qubits(const DensityMatrix& rho) {
  if (rho.dims() != Dims{2, 2}) throw DimensionError("two-qubit measure needs dims {2, 2}");
}

CMatrix psd_sqrt(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(m));
  const RVector roots = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * roots.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

double concurrence_2q(const DensityMatrix& rho) {
  require_two_qubits(rho);
  CMatrix yy = CMatrix::Zero(4, 4);
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  // The square roots of eig(sqrt(rho) rho~ sqrt(rho)) are the singular values
  // of sqrt(rho) Y sqrt(rho)*, which avoids taking roots of rounding noise.
  const CMatrix root = psd_sqrt(rho.mat());
  Eigen::JacobiSVD<CMatrix> svd(root * yy * root.conjugate());
  RVector l = svd.singularValues();
  std::sort(l.data(), l.data() + l.size(), std::greater<>());
  return std::clamp(l[0] - l[1] - l[2] - l[3], 0.0, 1.0);
}

double eof_from_concurrence(double c) {
  const double x = (1.0 + std::sqrt(std::max(0.0, 1.0 - c * c))) / 2.0;
  return binary_entropy(x);
}

double eof_2q(const DensityMatrix& rho) { return eof_from_concurrence(concurrence_2q(rho)); }

double negativity(const DensityMatrix& rho, const Bipartition& cut) {
  const DensityMatrix g = group_cut(rho, cut);
  const int right = 1;
  const CMatrix pt = partial_transpose(g.mat(), g.dims(), std::span<const int>(&right, 1));
  return std::max(0.0, (trace_norm_hermitian(pt) - 1.0) / 2.0);
}

double ree_bell_diagonal(std::span<const double> lambdas) {
  if (lambdas.size() != 4) throw InvalidStateError("Bell-diagonal state needs 4 weights");
  const std::vector<double> copy(lambdas.begin(), lambdas.end());
  shannon_entropy(copy);  // validates the distribution
  const double top = *std::max_element(lambdas.begin(), lambdas.end());
  return top <= 0.5 ? 0.0 : 1.0 - binary_entropy(top);
}

// REE over the PPT states: log-barrier Newton method.

namespace {

// Real coordinates of a Hermitian matrix in an orthonormal basis for the
// trace inner product: diagonal entries, then sqrt(2) Re and sqrt(2) Im of
// the upper triangle.
class HermitianCoords {
 public:
  explicit HermitianCoords(int n) : n_(n) {}
  int size() const { return n_ * n_; }

  Eigen::VectorXd to(const CMatrix& h) const {
    Eigen::VectorXd v(size());
    int k = 0;
    for (int i = 0; i < n_; ++i) v[k++] = h(i, i).real();
    for (int i = 0; i < n_; ++i) {
      for (int j = i + 1; j < n_; ++j) {
        v[k++] = std::numbers::sqrt2 * h(i, j).real();
        v[k++] = std::numbers::sqrt2 * h(i, j).imag();
      }
    }
    return v;
  }

  CMatrix from(const Eigen::VectorXd& v) const {
    CMatrix h(n_, n_);
    int k = 0;
    for (int i = 0; i < n_; ++i) h(i, i) = v[k++];
    for (int i = 0; i < n_; ++i) {
      for (int j = i + 1; j < n_; ++j) {
        const Complex z(v[k] / std::numbers::sqrt2, v[k + 1] / std::numbers::sqrt2);
        k += 2;
        h(i, j) = z;
        h(j, i) = std::conj(z);
      }
    }
    return h;
  }

  CMatrix basis(int k) const {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(size());
    e[k] = 1.0;
    return from(e);
  }

 private:
  int n_;
};

// First divided difference of ln.
double dd1(double a, double b) {
  const double d = a - b;
  if (std::abs(d) <= 1e-9 * std::max(a, b)) return 2.0 / (a + b);
  return (std::log(a) - std::log(b)) / d;
}

// Second divided difference of ln.
double dd2(double a, double b, double c) {
  // Sort so that the widest gap is between a and c.
  double v[3] = {a, b, c};
  std::sort(v, v + 3);
  a = v[0], b = v[1], c = v[2];
  const double d = c - a;
  if (d <= 1e-6 * c) {
    const double m = (a + b + c) / 3.0;
    return -0.5 / (m * m);
  }
  return (dd1(c, b) - dd1(b, a)) / d;
}

class PptBarrier {
 public:
  PptBarrier(const DensityMatrix& rho)
      : rho_(rho.mat()), dims_(rho.dims()), n_(rho.dim()), coords_(n_), s_rho_(von_neumann_entropy(rho)) {}

  CMatrix transpose_right(const CMatrix& m) const {
    const int right = 1;
    return partial_transpose(m, dims_, std::span<const int>(&right, 1));
  }

  struct Point {
    CMatrix sigma;
    RVector lambda;
    CMatrix vectors;
    CMatrix rho_eig;  // rho in the eigenbasis of sigma
    CMatrix inv, inv_pt;
    double cross;     // -tr(rho ln sigma)
    double logdet;    // ln det sigma + ln det sigma^T_B
  };

  // Empty when sigma or sigma^T_B is not positive definite.
  std::optional<Point> evaluate(const CMatrix& sigma) const {
    const CMatrix h = hermitian_part(sigma);
    const CMatrix pt = hermitian_part(transpose_right(h));
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
    Eigen::SelfAdjointEigenSolver<CMatrix> ep(pt);
    if (es.eigenvalues().minCoeff() <= 0.0 || ep.eigenvalues().minCoeff() <= 0.0) return std::nullopt;
    Point p;
    p.sigma = h;
    p.lambda = es.eigenvalues();
    p.vectors = es.eigenvectors();
    p.rho_eig = p.vectors.adjoint() * rho_ * p.vectors;
    p.cross = 0.0;
    for (int k = 0; k < n_; ++k) p.cross -= p.rho_eig(k, k).real() * std::log(p.lambda[k]);
    p.logdet = p.lambda.array().log().sum() + ep.eigenvalues().array().log().sum();
    const RVector inv_l = p.lambda.cwiseInverse();
    const RVector inv_p = ep.eigenvalues().cwiseInverse();
    p.inv = p.vectors * inv_l.cast<Complex>().asDiagonal() * p.vectors.adjoint();
    p.inv_pt = ep.eigenvectors() * inv_p.cast<Complex>().asDiagonal() * ep.eigenvectors().adjoint();
    return p;
  }

  double barrier_value(const Point& p, double mu) const { return p.cross - mu * p.logdet; }

  // REE objective in bits.
  double value_bits(const Point& p) const { return -s_rho_ + p.cross / std::numbers::ln2; }

  Eigen::VectorXd gradient(const Point& p, double mu) const {
    CMatrix g(n_, n_);
    for (int i = 0; i < n_; ++i) {
      for (int j = 0; j < n_; ++j) g(i, j) = -p.rho_eig(i, j) * dd1(p.lambda[i], p.lambda[j]);
    }
    const CMatrix full = p.vectors * g * p.vectors.adjoint() - mu * (p.inv + transpose_right(p.inv_pt));
    return coords_.to(full);
  }

  Eigen::MatrixXd hessian(const Point& p, double mu) const {
    const int m = coords_.size();
    // Second divided differences, reused for every direction.
    std::vector<double> f2(static_cast<std::size_t>(n_) * n_ * n_);
    for (int a = 0; a < n_; ++a) {
      for (int b = 0; b < n_; ++b) {
        for (int c = 0; c < n_; ++c) f2[(a * n_ + b) * n_ + c] = dd2(p.lambda[a], p.lambda[b], p.lambda[c]);
      }
    }
    Eigen::MatrixXd hess(m, m);
    for (int k = 0; k < m; ++k) {
      const CMatrix x = coords_.basis(k);
      const CMatrix xe = p.vectors.adjoint() * x * p.vectors;
      CMatrix z(n_, n_);
      for (int a = 0; a < n_; ++a) {
        for (int b = 0; b < n_; ++b) {
          Complex acc = 0.0;
          for (int c = 0; c < n_; ++c) {
            acc += f2[(a * n_ + b) * n_ + c] * (p.rho_eig(a, c) * xe(c, b) + xe(a, c) * p.rho_eig(c, b));
          }
          z(a, b) = -acc;
        }
      }
      const CMatrix col = p.vectors * z * p.vectors.adjoint() + mu * p.inv * x * p.inv +
                          mu * transpose_right(p.inv_pt * transpose_right(x) * p.inv_pt);
      hess.col(k) = coords_.to(col);
    }
    return 0.5 * (hess + hess.transpose());
  }

  const HermitianCoords& coords() const { return coords_; }
  int dim() const { return n_; }

 private:
  CMatrix rho_;
  Dims dims_;
  int n_;
  HermitianCoords coords_;
  double s_rho_;
};

}  // namespace

EntanglementReport ree(const DensityMatrix& rho, const Bipartition& cut, const ReeOptions& opts) {
  const DensityMatrix grouped = group_cut(rho, cut);
  const int dl = grouped.dims()[0], dr = grouped.dims()[1];
  if (dl * dr > 36) throw DimensionError("ree supports at most 36 dimensions, got " + std::to_string(dl * dr));

  const PptBarrier problem(grouped);
  const int n = problem.dim();
  const int m = problem.coords().size();
  const double nu = 2.0 * n;  // barrier parameter
  const Eigen::VectorXd trace_row = problem.coords().to(CMatrix::Identity(n, n));

  auto current = *problem.evaluate(CMatrix::Identity(n, n) / n);
  ReeConvergence conv;
  double mu = opts.mu_initial;
  Eigen::MatrixXd kkt(m + 1, m + 1);
  Eigen::VectorXd rhs(m + 1);

  while (conv.iterations < opts.max_iterations) {
    // Centering: damped Newton steps on the barrier objective with tr fixed.
    for (int inner = 0; inner < 100 && conv.iterations < opts.max_iterations; ++inner) {
      ++conv.iterations;
      const Eigen::VectorXd g = problem.gradient(current, mu);
      kkt.topLeftCorner(m, m) = problem.hessian(current, mu);
      kkt.block(0, m, m, 1) = trace_row;
      kkt.block(m, 0, 1, m) = trace_row.transpose();
      kkt(m, m) = 0.0;
      rhs.head(m) = -g;
      rhs[m] = 0.0;
      const Eigen::VectorXd step = kkt.partialPivLu().solve(rhs).head(m);
      const double decrement = -g.dot(step);
      if (!(decrement > 1e-14)) break;

      const CMatrix dir = problem.coords().from(step);
      const double f0 = problem.barrier_value(current, mu);
      double t = 1.0;
      std::optional<PptBarrier::Point> next;
      while (t > 1e-12) {
        next = problem.evaluate(current.sigma + t * dir);
        if (next && problem.barrier_value(*next, mu) <= f0 - 0.25 * t * decrement) break;
        next.reset();
        t *= 0.5;
      }
      if (!next) break;
      current = std::move(*next);
      if (decrement < 1e-11) break;
    }
    if (opts.record_history) conv.history.push_back(problem.value_bits(current));
    conv.gap_bound = nu * mu / std::numbers::ln2;
    const double value = std::abs(problem.value_bits(current));
    if (conv.gap_bound <= std::max(opts.rel_tol * value, opts.abs_tol)) {
      conv.converged = true;
      break;
    }
    mu *= opts.mu_factor;
  }

  EntanglementReport r{EntanglementMeasure::Ree,
                       std::max(0.0, problem.value_bits(current)),
                       cut,
                       (std::min(dl, dr) <= 2 && dl * dr <= 6) ? "ree-exact" : "ree-ppt-relaxation",
                       std::move(conv),
                       current.sigma};
  return r;
}

double entanglement(const DensityMatrix& rho, EntanglementMeasure measure, const Bipartition& cut,
                    const ReeOptions& opts) {
  switch (measure) {
    case EntanglementMeasure::PureEntropy: {
      if (std::abs(rho.purity() - 1.0) > 1e-8) throw InvalidStateError("pure_entropy needs a pure state");
      return von_neumann_entropy(partial_trace(group_cut(rho, cut), {0}));
    }
    case EntanglementMeasure::EoF2q:
      return eof_2q(group_cut(rho, cut));
    case EntanglementMeasure::Negativity:
      return negativity(rho, cut);
    case EntanglementMeasure::Ree:
      return ree(rho, cut, opts).value;
  }
  return 0.0;
}

double average_entanglement(const Ensemble& e, EntanglementMeasure measure, const ReeOptions& opts) {
  if (e.dims().size() < 2) throw DimensionError("average_entanglement needs a multipartite ensemble");
  if (measure == EntanglementMeasure::EoF2q && e.dims() != Dims{2, 2}) {
    throw DimensionError("eof_2q needs a 2x2 ensemble");
  }
  double total = 0.0;
  for (const auto& it : e.items()) total += it.prob * entanglement(it.state, measure, {}, opts);
  return total;
}

EntanglementMeasure default_measure(const Ensemble& e) {
  if (e.all_pure()) return EntanglementMeasure::PureEntropy;
  if (e.dims() == Dims{2, 2}) return EntanglementMeasure::EoF2q;
  return EntanglementMeasure::Ree;
}

}  // namespace locc
