#include "resetgeo/classical_geometry.hpp"

#include <cmath>
#include <limits>

namespace resetgeo {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double atanh_clamped(double x) {
  const double limit = 1.0 - 1e-15;
  if (x > limit) x = limit;
  if (x < -limit) x = -limit;
  return 0.5 * std::log((1.0 + x) / (1.0 - x));
}

double metric_eval(const MetricSample& s, double floor) {
  const int d = s.r.dim;
  if (s.x_tangent.size() != d || s.y_tangent.size() != d) {
    throw Error(ErrorCode::DimMismatch, "tangent dimension mismatch");
  }
  double g = 0.0;
  for (int n = 0; n < d; ++n) {
    const double rn = s.r.r(n);
    if (rn < floor) throw Error(ErrorCode::BoundaryPoint, "base point touches the simplex boundary");
    g += s.x_tangent(n) * s.y_tangent(n) / (rn * rn);
  }
  return g;
}

double ell_of_rowsums(const RowSumVector& r, double floor) {
  const double logd = std::log(static_cast<double>(r.dim));
  double sum = 0.0;
  for (int n = 0; n < r.dim; ++n) {
    if (r.r(n) < floor) return kInf;
    const double x = logd + std::log(r.r(n));
    sum += x * x;
  }
  return std::sqrt(sum);
}

double ell(const StochasticMap& T, double floor) { return ell_of_rowsums(row_sums(T), floor); }

ComplexityBracket complexity_bracket(const StochasticMap& T, double floor) {
  ComplexityBracket b;
  b.ell = ell(T, floor);
  b.diverged = std::isinf(b.ell);
  b.lower = b.ell;
  b.upper = (std::sqrt(static_cast<double>(T.dim)) + 1.0) * b.ell;
  return b;
}

double shannon_entropy(const ProbabilityVector& p) {
  double s = 0.0;
  for (int n = 0; n < p.dim; ++n) {
    const double x = p.p(n);
    if (x > 0.0) s -= x * std::log(x);
  }
  return s;
}

double entropic_bound(const StochasticMap& T) {
  const int d = T.dim;
  const RowSumVector r = row_sums(T);
  ProbabilityVector out{d, r.r};  // T * (1/d) has entries r_n
  const double s_out = shannon_entropy(out);
  if (s_out <= 0.0) return kInf;
  return std::log(std::log(static_cast<double>(d))) - std::log(s_out);
}

TradeoffMargin tradeoff_margin(const StochasticMap& T, const UndesiredSet& u, double floor) {
  TradeoffMargin m;
  m.epsilon = reset_error(T, u);
  const double l = ell(T, floor);
  const double usize = static_cast<double>(u.indices.size());
  if (std::isinf(l)) {
    // limit form: perfect or near-perfect reset, the product diverges
    m.margin = kInf;
    m.margin_sharp = kInf;
    m.holds = true;
    return m;
  }
  m.margin = m.epsilon * std::exp(l);
  m.margin_sharp = m.epsilon * std::exp(l / std::sqrt(usize)) / usize;
  m.holds = m.margin >= 1.0 - 1e-12;
  return m;
}

double protocol_lower_bound(double c_est, int d, double gamma) {
  if (gamma <= 0.0) throw Error(ErrorCode::NonpositiveRate, "gamma must be positive");
  if (c_est < 0.0) throw Error(ErrorCode::OutOfRange, "length estimate must be nonnegative");
  const double sd = std::sqrt(static_cast<double>(d));
  return c_est / ((d + sd) * (std::log(static_cast<double>(d)) + gamma));
}

double alpha_length(const StochasticMap& T, const AlphaMetricParams& params, double floor) {
  if (params.alpha <= 0.0) throw Error(ErrorCode::OutOfRange, "alpha must be positive");
  if (params.alpha == 2.0) throw Error(ErrorCode::AlphaTwo, "alpha = 2 is the log metric; use ell");
  const double ap = params.alpha_prime();
  const RowSumVector r = row_sums(T);
  const double base = std::pow(1.0 / T.dim, ap);
  double sum = 0.0;
  for (int n = 0; n < T.dim; ++n) {
    if (ap < 0.0 && r.r(n) < floor) return kInf;  // negative power of a true zero
    const double x = std::pow(r.r(n), ap) - base;
    sum += x * x;
  }
  return std::sqrt(sum) / std::abs(ap);
}

double two_level_complexity(double wtau) {
  if (wtau < 0.0) throw Error(ErrorCode::OutOfRange, "wtau must be nonnegative");
  const double t = -std::expm1(-wtau);  // 1 - e^{-wtau}
  const double f = t / std::sqrt(1.0 + t * t);
  const double s2 = std::sqrt(2.0);
  return 2.0 * atanh_clamped(s2 * f) - s2 * atanh_clamped(f);
}

}  // namespace resetgeo
