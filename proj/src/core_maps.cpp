#include "resetgeo/core_maps.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>

namespace resetgeo {

StochasticMap validate_map(const Matrix& raw) {
  if (raw.rows() != raw.cols()) {
    throw Error(ErrorCode::NonSquare, "map must be square, got " + std::to_string(raw.rows()) +
                                          "x" + std::to_string(raw.cols()));
  }
  const int d = static_cast<int>(raw.rows());
  if (d < 2) throw Error(ErrorCode::NonSquare, "map dimension must be at least 2");
  if (!raw.allFinite()) throw Error(ErrorCode::NegativeEntry, "non-finite entry");

  Matrix entries = raw;
  for (int n = 0; n < d; ++n) {
    for (int m = 0; m < d; ++m) {
      const double x = entries(m, n);
      if (x < -kEntryTol) {
        throw Error(ErrorCode::NegativeEntry, "entry (" + std::to_string(m) + "," +
                                                  std::to_string(n) + ") = " + std::to_string(x));
      }
      // within tolerance of the unit interval: clamp; exact values untouched
      if (x < 0.0) entries(m, n) = 0.0;
      if (x > 1.0 && x <= 1.0 + kEntryTol) entries(m, n) = 1.0;
    }
    const double colsum = entries.col(n).sum();
    if (std::abs(colsum - 1.0) > kColSumTol) {
      throw Error(ErrorCode::ColumnSumViolation,
                  "column " + std::to_string(n) + " sums to " + std::to_string(colsum));
    }
  }
  return StochasticMap{d, std::move(entries)};
}

ProbabilityVector validate_probability(const Vector& raw) {
  const int d = static_cast<int>(raw.size());
  if (d < 1 || !raw.allFinite()) throw Error(ErrorCode::NegativeEntry, "invalid probability vector");
  Vector p = raw;
  for (int n = 0; n < d; ++n) {
    if (p(n) < -kEntryTol) {
      throw Error(ErrorCode::NegativeEntry, "p(" + std::to_string(n) + ") = " + std::to_string(p(n)));
    }
    if (p(n) < 0.0) p(n) = 0.0;
  }
  if (std::abs(p.sum() - 1.0) > kColSumTol) {
    throw Error(ErrorCode::ColumnSumViolation, "probabilities sum to " + std::to_string(p.sum()));
  }
  return ProbabilityVector{d, std::move(p)};
}

TransitionRateMatrix validate_rates(const Matrix& raw) {
  if (raw.rows() != raw.cols()) throw Error(ErrorCode::NonSquare, "rate matrix must be square");
  const int d = static_cast<int>(raw.rows());
  if (d < 2) throw Error(ErrorCode::NonSquare, "rate matrix dimension must be at least 2");
  if (!raw.allFinite()) throw Error(ErrorCode::NegativeEntry, "non-finite rate");
  for (int n = 0; n < d; ++n) {
    for (int m = 0; m < d; ++m) {
      if (m != n && raw(m, n) < -kEntryTol) {
        throw Error(ErrorCode::NegativeEntry, "off-diagonal rate (" + std::to_string(m) + "," +
                                                  std::to_string(n) + ") negative");
      }
    }
    if (std::abs(raw.col(n).sum()) > kColSumTol) {
      throw Error(ErrorCode::ColumnSumViolation,
                  "rate column " + std::to_string(n) + " sums to " + std::to_string(raw.col(n).sum()));
    }
  }
  return TransitionRateMatrix{d, raw};
}

UndesiredSet make_undesired_set(int dim, std::vector<int> indices) {
  if (indices.empty()) throw Error(ErrorCode::OutOfRange, "undesired set must be nonempty");
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  if (indices.front() < 0 || indices.back() >= dim) {
    throw Error(ErrorCode::OutOfRange, "undesired index out of range for dim " + std::to_string(dim));
  }
  if (static_cast<int>(indices.size()) >= dim) {
    throw Error(ErrorCode::OutOfRange, "undesired set must be a proper subset");
  }
  return UndesiredSet{dim, std::move(indices)};
}

RowSumVector row_sums(const StochasticMap& T) {
  Vector r = T.entries.rowwise().sum() / static_cast<double>(T.dim);
  return RowSumVector{T.dim, std::move(r)};
}

ProbabilityVector apply_map(const StochasticMap& T, const ProbabilityVector& p) {
  if (T.dim != p.dim) throw Error(ErrorCode::DimMismatch, "map and vector dims differ");
  return ProbabilityVector{T.dim, T.entries * p.p};
}

StochasticMap map_from_rates(const TransitionRateMatrix& W, double tau) {
  if (tau < 0.0) throw Error(ErrorCode::OutOfRange, "negative duration");
  if (tau == 0.0) return identity_map(W.dim);
  Matrix e = (W.entries * tau).exp();
  if (!e.allFinite()) throw Error(ErrorCode::ExpDivergence, "matrix exponential overflowed");
  return validate_map(e);
}

StochasticMap map_from_protocols(const ProtocolSequence& seq) {
  if (seq.protocols.empty()) return identity_map(seq.dim);
  if (seq.protocols.front().rates.dim != seq.dim) {
    throw Error(ErrorCode::DimMismatch, "protocol dim differs from sequence dim");
  }
  StochasticMap acc = map_from_rates(seq.protocols.front().rates, seq.protocols.front().duration);
  for (std::size_t k = 1; k < seq.protocols.size(); ++k) {
    const auto& pr = seq.protocols[k];
    if (pr.rates.dim != acc.dim) throw Error(ErrorCode::DimMismatch, "protocol dims differ");
    StochasticMap step = map_from_rates(pr.rates, pr.duration);
    acc = validate_map(step.entries * acc.entries);  // later protocols act on the left
  }
  return acc;
}

double escape_rate(const TransitionRateMatrix& W) {
  return std::max(0.0, -W.entries.diagonal().minCoeff());
}

double reset_error(const StochasticMap& T, const UndesiredSet& u) {
  if (T.dim != u.dim) throw Error(ErrorCode::DimMismatch, "map and undesired set dims differ");
  double eps = 0.0;
  for (int m : u.indices) eps += T.entries.row(m).sum();
  return eps;
}

StochasticMap identity_map(int dim) { return StochasticMap{dim, Matrix::Identity(dim, dim)}; }

StochasticMap uniform_map(int dim) {
  return StochasticMap{dim, Matrix::Constant(dim, dim, 1.0 / dim)};
}

TransitionRateMatrix two_level_generator(double w) {
  if (w < 0.0) throw Error(ErrorCode::NonpositiveRate, "two-level rate must be nonnegative");
  Matrix W(2, 2);
  W << 0.0, w, 0.0, -w;
  return TransitionRateMatrix{2, std::move(W)};
}

StochasticMap two_level_map(double wtau) {
  // closed form of e^{W tau}: [[1, 1-e^{-wtau}], [0, e^{-wtau}]]
  if (wtau < 0.0) throw Error(ErrorCode::OutOfRange, "wtau must be nonnegative");
  const double q = std::exp(-wtau);
  Matrix T(2, 2);
  T << 1.0, 1.0 - q, 0.0, q;
  return StochasticMap{2, std::move(T)};
}

}  // namespace resetgeo
