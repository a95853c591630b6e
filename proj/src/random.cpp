#include "locc/random.hpp"

#include <cmath>
#include <numbers>

namespace locc {

std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(splitmix64_mix(seed) ^ splitmix64_mix(stream + 0x632BE59BD9B4E019ULL)) {}

std::uint64_t CounterRng::next_u64() {
  ++counter_;
  return splitmix64_mix(key_ + counter_ * 0x9E3779B97F4A7C15ULL);
}

double CounterRng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double CounterRng::normal() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

int CounterRng::uniform_int(int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<int>(next_u64() % span);
}

CMatrix random_ginibre(int rows, int cols, CounterRng& rng) {
  CMatrix g(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) g(i, j) = Complex(rng.normal(), rng.normal());
  }
  return g;
}

CMatrix random_unitary(int d, CounterRng& rng) {
  Eigen::HouseholderQR<CMatrix> qr(random_ginibre(d, d, rng));
  CMatrix q = qr.householderQ() * CMatrix::Identity(d, d);
  const CMatrix r = qr.matrixQR();
  // Fix column phases so the distribution is Haar.
  for (int j = 0; j < d; ++j) {
    const Complex diag = r(j, j);
    if (std::abs(diag) > 0) q.col(j) *= diag / std::abs(diag);
  }
  return q;
}

CVector random_pure_state(int d, CounterRng& rng) {
  CVector v = random_ginibre(d, 1, rng).col(0);
  return v / v.norm();
}

CMatrix random_density(int d, int rank, CounterRng& rng) {
  const CMatrix g = random_ginibre(d, rank, rng);
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return hermitian_part(rho);
}

std::vector<double> random_probabilities(int n, CounterRng& rng) {
  std::vector<double> p(n);
  double total = 0.0;
  for (auto& x : p) {
    x = -std::log(1.0 - rng.uniform());
    total += x;
  }
  for (auto& x : p) x /= total;
  return p;
}

Instrument random_instrument(int d, int outcomes, Party party, CounterRng& rng) {
  Eigen::HouseholderQR<CMatrix> qr(random_ginibre(d * outcomes, d, rng));
  const CMatrix w = qr.householderQ() * CMatrix::Identity(d * outcomes, d);
  std::vector<CMatrix> kraus;
  for (int y = 0; y < outcomes; ++y) kraus.push_back(w.block(y * d, 0, d, d));
  return Instrument(std::move(kraus), party);
}

Ensemble random_ensemble(const Dims& dims, int count, CounterRng& rng) {
  const int d = total_dim(dims);
  const auto probs = random_probabilities(count, rng);
  std::vector<EnsembleItem> items;
  for (int i = 0; i < count; ++i) {
    if (rng.uniform() < 0.5) {
      items.push_back({probs[i], DensityMatrix::from_vector(random_pure_state(d, rng), dims), "", true});
    } else {
      const int rank = rng.uniform_int(1, d);
      items.push_back({probs[i], DensityMatrix(random_density(d, rank, rng), dims), "", rank == 1});
    }
  }
  return Ensemble(std::move(items), dims);
}

}  // namespace locc
