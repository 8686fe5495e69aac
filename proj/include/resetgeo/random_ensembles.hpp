#pragma once

// Deterministic random ensembles for property suites and sweeps. All draws go
// through explicit transforms of mt19937_64 output so results are identical
// across platforms and runs; per-item seeding (mix_seed) keeps parallel sweeps
// independent of execution order.

#include <cstdint>
#include <random>

#include "resetgeo/core_maps.hpp"
#include "resetgeo/quantum_geometry.hpp"

namespace resetgeo {

// splitmix64 of seed ^ golden-ratio-scrambled index
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform();   // [0, 1), 53-bit
  double gaussian();  // Box-Muller, deterministic pair caching
  int uniform_int(int lo, int hi);  // inclusive

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Flat Dirichlet via normalized exponentials.
Vector dirichlet(Rng& rng, int d);

// Columns drawn from a flat Dirichlet.
StochasticMap random_map(Rng& rng, int d);

// Dirichlet columns mixed with the uniform map: entries >= ridge/d.
StochasticMap random_positive_map(Rng& rng, int d, double ridge);

RowSumVector random_interior_rowsums(Rng& rng, int d, double ridge);

// Nonnegative off-diagonals scaled so the escape rate is uniform in
// (0, gamma].
TransitionRateMatrix random_rate_matrix(Rng& rng, int d, double gamma);

UndesiredSet random_undesired_set(Rng& rng, int d);

// n_kraus Kraus operators from a stacked complex Gaussian thin-QR, so
// sum K^dag K = I exactly (up to orthogonalization roundoff).
KrausChannel random_kraus_channel(Rng& rng, int d, int n_kraus);

// Channel that is classical in the computational basis: K_{mn} = sqrt(T_{mn}) |m><n|
// for a random stochastic T.
KrausChannel random_diagonal_kraus_channel(Rng& rng, int d);

// Rank uniform in 1..d-1, subspace from a Gaussian QR.
ProjectorQ random_projector(Rng& rng, int d);

CMatrix random_unitary(Rng& rng, int n);

// Gibbs state of a random Hamiltonian rescaled so the spectral spread is at
// most gamma (hence lambda_min >= e^{-gamma}/d).
DensityOperator random_gibbs_state(Rng& rng, int d, double gamma);

}  // namespace resetgeo
