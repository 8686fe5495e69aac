#pragma once

// Generalized Sinkhorn scaling (two-sided diagonal scaling onto prescribed
// marginals), the explicit constrained path through interpolation bases, the
// log-linear schedule, path-length quadrature, and a discrete geodesic upper
// estimator over schedule knots.

#include <vector>

#include "resetgeo/classical_geometry.hpp"
#include "resetgeo/core_maps.hpp"

namespace resetgeo {

struct SinkhornSolution {
  Vector u;  // log row scalings
  Vector v;  // log column scalings, gauge sum(v) = 0
  double residual = 0.0;  // max marginal violation
  int iterations = 0;
  bool converged = false;
};

struct MapPath {
  std::vector<double> t;             // 0 = t_0 < ... < t_K = 1
  std::vector<RowSumVector> r;       // per-sample row sums
  std::vector<StochasticMap> maps;   // optional: empty when only row sums are tracked
  std::vector<double> segment_speed; // ||Delta ln r|| / Delta t per segment
};

struct GeodesicEstimate {
  double length = 0.0;
  int iterations = 0;
  bool converged = false;
  double initial_length = 0.0;  // log-linear seed path length
};

// Minimizes F(u,v) = sum_{mn} e^{u_m + v_n} A_{mn} - d sum_m r_m u_m - sum_n v_n
// by damped Newton with alternating-scaling warm start. The scaled map
// diag(e^u) A diag(e^v) has row sums d*r_target and unit column sums.
SinkhornSolution sinkhorn_solve(const StochasticMap& A, const RowSumVector& r_target,
                                double tol = 1e-11, int max_newton_iter = 200);

// Same solve started from the supplied log scalings. The minimizer is unique on
// the gauge slice sum(v) = 0, so any start reproduces the same (u, v).
SinkhornSolution sinkhorn_solve(const StochasticMap& A, const RowSumVector& r_target,
                                const Vector& u0, const Vector& v0, double tol = 1e-11,
                                int max_newton_iter = 200);

StochasticMap scaled_map(const StochasticMap& A, const SinkhornSolution& s);

// A_t = a sin(pi t) 11^T/d + (1 - a sin(pi t)) ((1-t) I + t T); strictly positive
// for t in (0,1), equal to the identity at t=0 and to T at t=1.
StochasticMap interpolation_base(const StochasticMap& T, double t, double a);

// K+1 interior row-sum vectors along ln r_n(t) = (1-t) ln(1/d) + t ln r_n^T + c_t.
std::vector<RowSumVector> log_linear_schedule(const StochasticMap& T, int K,
                                              double floor = kProbabilityFloor);

// Realizes the schedule with stochastic maps: endpoints are the identity and T,
// interior samples solve sinkhorn on interpolation bases. Throws NoConvergence
// (with the failing sample index) if any solve misses the tolerance.
MapPath constrained_path(const StochasticMap& T, const std::vector<RowSumVector>& schedule,
                         double a = 0.5, double tol = 1e-11, bool parallel = true);

// Log-space chord quadrature: sum_k ||ln r(t_{k+1}) - ln r(t_k)||_2, exact on
// piecewise log-linear segments.
double path_length(const std::vector<RowSumVector>& samples, double floor = kProbabilityFloor);
double path_length(const MapPath& path, double floor = kProbabilityFloor);

// Gradient descent over interior schedule knots (softmax-parameterized, so all
// iterates stay interior) starting from the log-linear schedule. The result is
// never below ell (triangle inequality) and never above the seed path length.
GeodesicEstimate geodesic_upper_estimate(const StochasticMap& T, int K = 64, int iters = 500,
                                         double floor = kProbabilityFloor);

}  // namespace resetgeo
