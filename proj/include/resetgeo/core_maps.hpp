#pragma once

// Column-stochastic maps, rate generators, protocol sequences, and reset errors.
// Convention everywhere: T is column-stochastic (each column sums to 1), so T*p
// maps probability vectors to probability vectors and the row-sum vector is
// r = T*1/d, the image of the uniform distribution.

#include <Eigen/Dense>
#include <vector>

#include "resetgeo/error.hpp"

namespace resetgeo {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kEntryTol = 1e-12;   // negative-entry rejection threshold
inline constexpr double kColSumTol = 1e-9;   // column normalization tolerance

struct StochasticMap {
  int dim = 0;
  Matrix entries;  // entries(m, n) = T_{mn}, column n sums to 1
};

struct ProbabilityVector {
  int dim = 0;
  Vector p;
};

struct RowSumVector {
  int dim = 0;
  Vector r;  // r_n = (T*1)_n / d
};

struct TransitionRateMatrix {
  int dim = 0;
  Matrix entries;  // nonnegative off-diagonal, columns sum to 0
};

struct UndesiredSet {
  int dim = 0;
  std::vector<int> indices;  // 0-based, sorted, nonempty, proper subset
};

struct Protocol {
  TransitionRateMatrix rates;
  double duration = 1.0;
};

struct ProtocolSequence {
  int dim = 0;
  std::vector<Protocol> protocols;  // applied in order, protocols[0] first
};

StochasticMap validate_map(const Matrix& raw);
ProbabilityVector validate_probability(const Vector& raw);
TransitionRateMatrix validate_rates(const Matrix& raw);
UndesiredSet make_undesired_set(int dim, std::vector<int> indices);

RowSumVector row_sums(const StochasticMap& T);
ProbabilityVector apply_map(const StochasticMap& T, const ProbabilityVector& p);
StochasticMap map_from_rates(const TransitionRateMatrix& W, double tau);
StochasticMap map_from_protocols(const ProtocolSequence& seq);
double escape_rate(const TransitionRateMatrix& W);
double reset_error(const StochasticMap& T, const UndesiredSet& u);

StochasticMap identity_map(int dim);
StochasticMap uniform_map(int dim);

// Generator of the two-level reset: W = [[0, w], [0, -w]], so e^{W tau} drains
// state 2 into state 1 with error e^{-w tau}.
TransitionRateMatrix two_level_generator(double w);
StochasticMap two_level_map(double wtau);

}  // namespace resetgeo
