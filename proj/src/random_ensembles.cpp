#include "resetgeo/random_ensembles.hpp"

#include <algorithm>
#include <cmath>

namespace resetgeo {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed ^ (index * 0x9e3779b97f4a7c15ULL);
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::uniform() {
  return (gen_() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double mag = std::sqrt(-2.0 * std::log(u1));
  spare_ = mag * std::sin(2.0 * M_PI * u2);
  have_spare_ = true;
  return mag * std::cos(2.0 * M_PI * u2);
}

int Rng::uniform_int(int lo, int hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(gen_() % span);
}

Vector dirichlet(Rng& rng, int d) {
  Vector p(d);
  double sum = 0.0;
  for (int i = 0; i < d; ++i) {
    double u = rng.uniform();
    while (u <= 0.0) u = rng.uniform();
    p(i) = -std::log(u);
    sum += p(i);
  }
  return p / sum;
}

StochasticMap random_map(Rng& rng, int d) {
  Matrix T(d, d);
  for (int n = 0; n < d; ++n) T.col(n) = dirichlet(rng, d);
  return validate_map(T);
}

StochasticMap random_positive_map(Rng& rng, int d, double ridge) {
  const StochasticMap base = random_map(rng, d);
  Matrix T = (1.0 - ridge) * base.entries + ridge * Matrix::Constant(d, d, 1.0 / d);
  return validate_map(T);
}

RowSumVector random_interior_rowsums(Rng& rng, int d, double ridge) {
  Vector p = dirichlet(rng, d);
  p = (1.0 - ridge) * p + ridge * Vector::Constant(d, 1.0 / d);
  return RowSumVector{d, p};
}

TransitionRateMatrix random_rate_matrix(Rng& rng, int d, double gamma) {
  Matrix W = Matrix::Zero(d, d);
  for (int n = 0; n < d; ++n) {
    for (int m = 0; m < d; ++m) {
      if (m != n) W(m, n) = rng.uniform();
    }
  }
  for (int n = 0; n < d; ++n) W(n, n) = -W.col(n).sum();
  const double rate = -W.diagonal().minCoeff();
  double target = gamma * rng.uniform();
  while (target <= 0.0) target = gamma * rng.uniform();
  if (rate > 0.0) W *= target / rate;
  return validate_rates(W);
}

UndesiredSet random_undesired_set(Rng& rng, int d) {
  const int size = rng.uniform_int(1, d - 1);
  std::vector<int> idx(d);
  for (int i = 0; i < d; ++i) idx[i] = i;
  // partial Fisher-Yates, enough for the first `size` slots
  for (int i = 0; i < size; ++i) {
    std::swap(idx[i], idx[rng.uniform_int(i, d - 1)]);
  }
  idx.resize(size);
  return make_undesired_set(d, idx);
}

KrausChannel random_kraus_channel(Rng& rng, int d, int n_kraus) {
  // Stack n_kraus Gaussian d x d blocks, thin-QR the (n_kraus*d) x d stack; the
  // blocks of Q then satisfy sum K^dag K = I.
  CMatrix stack(n_kraus * d, d);
  for (int i = 0; i < n_kraus * d; ++i) {
    for (int j = 0; j < d; ++j) stack(i, j) = std::complex<double>(rng.gaussian(), rng.gaussian());
  }
  Eigen::HouseholderQR<CMatrix> qr(stack);
  const CMatrix q = qr.householderQ() * CMatrix::Identity(n_kraus * d, d);
  std::vector<CMatrix> kraus;
  kraus.reserve(n_kraus);
  for (int k = 0; k < n_kraus; ++k) kraus.push_back(q.block(k * d, 0, d, d));
  return validate_channel(d, std::move(kraus));
}

KrausChannel random_diagonal_kraus_channel(Rng& rng, int d) {
  return channel_from_map(random_map(rng, d));
}

CMatrix random_unitary(Rng& rng, int n) {
  CMatrix g(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) g(i, j) = std::complex<double>(rng.gaussian(), rng.gaussian());
  }
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
  const CMatrix r = q.adjoint() * g;
  // fix the phase gauge so the distribution is Haar rather than QR-convention
  for (int j = 0; j < n; ++j) {
    const std::complex<double> rj = r(j, j);
    const double mag = std::abs(rj);
    if (mag > 0.0) q.col(j) *= rj / mag;
  }
  return q;
}

ProjectorQ random_projector(Rng& rng, int d) {
  const int rank = d == 2 ? 1 : rng.uniform_int(1, d - 1);
  const CMatrix u = random_unitary(rng, d);
  CMatrix pi = CMatrix::Zero(d, d);
  for (int k = 0; k < rank; ++k) pi += u.col(k) * u.col(k).adjoint();
  return validate_projector(d, 0.5 * (pi + pi.adjoint()));
}

DensityOperator random_gibbs_state(Rng& rng, int d, double gamma) {
  CMatrix h(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) h(i, j) = std::complex<double>(rng.gaussian(), rng.gaussian());
  }
  h = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  Vector lam = es.eigenvalues();
  const double spread = lam.maxCoeff() - lam.minCoeff();
  if (spread > 0.0) lam *= gamma * rng.uniform() / spread;
  Vector w(d);
  for (int i = 0; i < d; ++i) w(i) = std::exp(-lam(i));
  w /= w.sum();
  return DensityOperator{d, es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint()};
}

}  // namespace resetgeo
