#pragma once

// The log-barrier Hessian metric on row-sum vectors, the unconstrained length
// ell, the complexity bracket [ell, (sqrt(d)+1) ell], the entropic bound, the
// complexity-error trade-off margins, protocol-count bound, the alpha-metric
// family, and the analytic two-level complexity.

#include "resetgeo/core_maps.hpp"

namespace resetgeo {

// Row sums below this floor count as a true zero: lengths diverge instead of
// producing NaN. Values at or above the floor stay finite.
inline constexpr double kProbabilityFloor = 1e-300;

struct MetricSample {
  RowSumVector r;       // interior base point
  Vector x_tangent;     // tangent row-sum vectors, entries sum to 0
  Vector y_tangent;
};

struct ComplexityBracket {
  double ell = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool diverged = false;
};

struct TradeoffMargin {
  double epsilon = 0.0;       // reset error
  double margin = 0.0;        // epsilon * e^ell
  double margin_sharp = 0.0;  // epsilon * e^{ell/sqrt|u|} / |u|, stronger for |u| > 1
  bool holds = false;
};

struct AlphaMetricParams {
  double alpha = 1.0;
  double alpha_prime() const { return 1.0 - alpha / 2.0; }
};

double metric_eval(const MetricSample& s, double floor = kProbabilityFloor);

// ell = sqrt(sum_n (ln d + ln r_n)^2); +infinity when any r_n < floor.
double ell(const StochasticMap& T, double floor = kProbabilityFloor);
double ell_of_rowsums(const RowSumVector& r, double floor = kProbabilityFloor);

ComplexityBracket complexity_bracket(const StochasticMap& T, double floor = kProbabilityFloor);

// ln S(1/d) - ln S(T*1/d) in nats; +infinity marker when the output entropy is 0.
double entropic_bound(const StochasticMap& T);

TradeoffMargin tradeoff_margin(const StochasticMap& T, const UndesiredSet& u,
                               double floor = kProbabilityFloor);

// N_min = C_est / ((d + sqrt(d)) ln(d e^gamma))
double protocol_lower_bound(double c_est, int d, double gamma);

double alpha_length(const StochasticMap& T, const AlphaMetricParams& params,
                    double floor = kProbabilityFloor);

// C(wtau) = 2 atanh(sqrt(2) f) - sqrt(2) atanh(f), f = t/sqrt(1+t^2), t = 1-e^{-wtau}.
double two_level_complexity(double wtau);

double shannon_entropy(const ProbabilityVector& p);

// atanh via 0.5 ln((1+x)/(1-x)) with |x| clamped to 1 - 1e-15.
double atanh_clamped(double x);

}  // namespace resetgeo
