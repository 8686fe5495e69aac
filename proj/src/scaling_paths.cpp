#include "resetgeo/scaling_paths.hpp"

#include <cmath>
#include <limits>

#include "resetgeo/parallel.hpp"

namespace resetgeo {

namespace {

double log_sum_exp(const Vector& x) {
  const double m = x.maxCoeff();
  return m + std::log((x.array() - m).exp().sum());
}

void apply_gauge(Vector& u, Vector& v) {
  const double s = v.mean();
  v.array() -= s;
  u.array() += s;
}

double marginal_residual(const Matrix& M, const Vector& r) {
  const int d = static_cast<int>(r.size());
  const Vector row = M.rowwise().sum();
  const Vector col = M.colwise().sum();
  double res = 0.0;
  for (int i = 0; i < d; ++i) {
    res = std::max(res, std::abs(row(i) / d - r(i)));
    res = std::max(res, std::abs(col(i) - 1.0));
  }
  return res;
}

}  // namespace

SinkhornSolution sinkhorn_solve(const StochasticMap& A, const RowSumVector& r_target,
                                double tol, int max_newton_iter) {
  const Vector zero = Vector::Zero(A.dim);
  return sinkhorn_solve(A, r_target, zero, zero, tol, max_newton_iter);
}

SinkhornSolution sinkhorn_solve(const StochasticMap& A, const RowSumVector& r_target,
                                const Vector& u0, const Vector& v0, double tol,
                                int max_newton_iter) {
  const int d = A.dim;
  if (r_target.dim != d) throw Error(ErrorCode::DimMismatch, "target dimension mismatch");
  if (u0.size() != d || v0.size() != d) {
    throw Error(ErrorCode::DimMismatch, "initial scaling dimension mismatch");
  }
  if (A.entries.minCoeff() <= 0.0) {
    throw Error(ErrorCode::NotStrictlyPositive, "scaling needs a strictly positive matrix");
  }
  if (r_target.r.minCoeff() <= 0.0) {
    throw Error(ErrorCode::NotStrictlyPositive, "target row sums must be strictly positive");
  }

  const Matrix& a = A.entries;
  const Vector& r = r_target.r;
  Vector u = u0, v = v0;
  SinkhornSolution sol;

  auto sweep = [&]() {
    // exact coordinate minimization: rows to d*r, then columns to 1
    for (int m = 0; m < d; ++m) {
      double s = 0.0;
      for (int n = 0; n < d; ++n) s += a(m, n) * std::exp(v(n));
      u(m) = std::log(d * r(m)) - std::log(s);
    }
    for (int n = 0; n < d; ++n) {
      double s = 0.0;
      for (int m = 0; m < d; ++m) s += a(m, n) * std::exp(u(m));
      v(n) = -std::log(s);
    }
  };

  // alternating warm start gets within Newton's basin cheaply
  for (int i = 0; i < 8; ++i) sweep();
  apply_gauge(u, v);

  Matrix M(d, d);
  auto rebuild = [&]() {
    for (int n = 0; n < d; ++n)
      for (int m = 0; m < d; ++m) M(m, n) = std::exp(u(m) + v(n)) * a(m, n);
  };

  int iter = 0;
  for (; iter < max_newton_iter; ++iter) {
    rebuild();
    sol.residual = marginal_residual(M, r);
    if (sol.residual <= tol) break;

    const Vector row = M.rowwise().sum();
    const Vector col = M.colwise().sum();
    Vector g(2 * d);
    g.head(d) = row - d * r;
    g.tail(d) = col - Vector::Ones(d);

    Matrix H = Matrix::Zero(2 * d, 2 * d);
    H.topLeftCorner(d, d) = row.asDiagonal();
    H.bottomRightCorner(d, d) = col.asDiagonal();
    H.topRightCorner(d, d) = M;
    H.bottomLeftCorner(d, d) = M.transpose();
    // the Hessian is singular along (1, -1); pin that direction
    Vector nullv(2 * d);
    nullv.head(d).setConstant(1.0);
    nullv.tail(d).setConstant(-1.0);
    nullv /= nullv.norm();
    H += (H.trace() / (2 * d)) * (nullv * nullv.transpose());

    Vector delta = H.ldlt().solve(-g);
    // backtrack on the marginal residual: it is the gated quantity and shrinks
    // quadratically once Newton engages, so full steps win near the optimum
    double step = 1.0;
    bool accepted = false;
    Matrix Mt(d, d);
    for (int bt = 0; bt < 60; ++bt) {
      Vector ut = u + step * delta.head(d);
      Vector vt = v + step * delta.tail(d);
      for (int n = 0; n < d; ++n)
        for (int m = 0; m < d; ++m) Mt(m, n) = std::exp(ut(m) + vt(n)) * a(m, n);
      if (marginal_residual(Mt, r) <= (1.0 - 1e-4 * step) * sol.residual) {
        u = ut;
        v = vt;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) sweep();  // fallback keeps progress when Newton stalls
    apply_gauge(u, v);
  }

  rebuild();
  apply_gauge(u, v);
  sol.u = u;
  sol.v = v;
  sol.iterations = iter;
  sol.residual = marginal_residual(M, r);
  sol.converged = sol.residual <= tol;
  return sol;
}

StochasticMap scaled_map(const StochasticMap& A, const SinkhornSolution& s) {
  Matrix M = s.u.array().exp().matrix().asDiagonal() * A.entries *
             s.v.array().exp().matrix().asDiagonal();
  return validate_map(M);
}

StochasticMap interpolation_base(const StochasticMap& T, double t, double a) {
  if (t < 0.0 || t > 1.0) throw Error(ErrorCode::OutOfRange, "t must lie in [0, 1]");
  if (a <= 0.0 || a >= 1.0) throw Error(ErrorCode::OutOfRange, "mixing weight must lie in (0, 1)");
  const int d = T.dim;
  const double w = a * std::sin(M_PI * t);
  Matrix base = (w / d) * Matrix::Ones(d, d) +
                (1.0 - w) * ((1.0 - t) * Matrix::Identity(d, d) + t * T.entries);
  return validate_map(base);
}

std::vector<RowSumVector> log_linear_schedule(const StochasticMap& T, int K, double floor) {
  if (K < 1) throw Error(ErrorCode::OutOfRange, "schedule needs at least one segment");
  const int d = T.dim;
  const RowSumVector rT = row_sums(T);
  if (rT.r.minCoeff() < floor) {
    throw Error(ErrorCode::BoundaryTarget, "target row sums touch the simplex boundary");
  }
  const Vector x0 = Vector::Constant(d, -std::log(static_cast<double>(d)));
  const Vector x1 = rT.r.array().log().matrix();

  std::vector<RowSumVector> schedule;
  schedule.reserve(K + 1);
  schedule.push_back(RowSumVector{d, Vector::Constant(d, 1.0 / d)});
  for (int k = 1; k < K; ++k) {
    const double t = static_cast<double>(k) / K;
    Vector x = (1.0 - t) * x0 + t * x1;
    const double c = log_sum_exp(x);  // c_t restores normalization
    Vector rk = (x.array() - c).exp().matrix();
    schedule.push_back(RowSumVector{d, std::move(rk)});
  }
  schedule.push_back(rT);
  return schedule;
}

MapPath constrained_path(const StochasticMap& T, const std::vector<RowSumVector>& schedule,
                         double a, double tol, bool parallel) {
  const int K = static_cast<int>(schedule.size()) - 1;
  if (K < 1) throw Error(ErrorCode::OutOfRange, "schedule needs at least two samples");
  const int d = T.dim;
  const RowSumVector rT = row_sums(T);
  if ((schedule.front().r - Vector::Constant(d, 1.0 / d)).cwiseAbs().maxCoeff() > 1e-7) {
    throw Error(ErrorCode::InvalidArgument, "schedule must start at the uniform vector");
  }
  if ((schedule.back().r - rT.r).cwiseAbs().maxCoeff() > 1e-7) {
    throw Error(ErrorCode::InvalidArgument, "schedule must end at the target row sums");
  }
  for (int k = 1; k < K; ++k) {
    if (schedule[k].r.minCoeff() <= 0.0) {
      throw Error(ErrorCode::BoundarySample, "interior schedule sample touches the boundary");
    }
  }

  MapPath path;
  path.t.resize(K + 1);
  path.r = schedule;
  path.maps.resize(K + 1);
  for (int k = 0; k <= K; ++k) path.t[k] = static_cast<double>(k) / K;
  path.maps[0] = identity_map(d);
  path.maps[K] = T;

  std::vector<int> failed(std::max(0, K - 1), 0);
  std::vector<double> residuals(std::max(0, K - 1), 0.0);
  parallel_for(K - 1, [&](int i) {
    const int k = i + 1;
    const StochasticMap base = interpolation_base(T, path.t[k], a);
    const SinkhornSolution sol = sinkhorn_solve(base, schedule[k], tol);
    residuals[i] = sol.residual;
    if (!sol.converged) {
      failed[i] = 1;
      return;
    }
    path.maps[k] = scaled_map(base, sol);
  }, !parallel);

  for (int i = 0; i < K - 1; ++i) {
    if (failed[i]) {
      throw Error(ErrorCode::NoConvergence, "sample " + std::to_string(i + 1) + " residual " +
                                                std::to_string(residuals[i]));
    }
  }

  path.segment_speed.resize(K);
  for (int k = 0; k < K; ++k) {
    const Vector dx = schedule[k + 1].r.array().log() - schedule[k].r.array().log();
    path.segment_speed[k] = dx.norm() / (path.t[k + 1] - path.t[k]);
  }
  return path;
}

double path_length(const std::vector<RowSumVector>& samples, double floor) {
  if (samples.empty()) return 0.0;
  for (const auto& s : samples) {
    if (s.r.minCoeff() < floor) {
      throw Error(ErrorCode::BoundarySample, "path sample touches the simplex boundary");
    }
  }
  double len = 0.0;
  for (std::size_t k = 0; k + 1 < samples.size(); ++k) {
    const Vector dx = samples[k + 1].r.array().log() - samples[k].r.array().log();
    len += dx.norm();
  }
  return len;
}

double path_length(const MapPath& path, double floor) { return path_length(path.r, floor); }

namespace {

// objective and gradient for the knot optimizer; xs holds ln r at every sample,
// zs the free interior coordinates (x = z - logsumexp(z))
struct KnotWork {
  int d = 0;
  int K = 0;
  Vector x_first, x_last;
  std::vector<Vector> xs;  // K+1 log-prob samples
  std::vector<Vector> ps;  // softmax of interior knots

  void set(const std::vector<Vector>& zs) {
    for (int k = 1; k < K; ++k) {
      const Vector& z = zs[k - 1];
      const double c = log_sum_exp(z);
      xs[k] = z.array() - c;
      ps[k - 1] = xs[k].array().exp();
    }
  }

  double length() const {
    double len = 0.0;
    for (int k = 0; k < K; ++k) len += std::sqrt((xs[k + 1] - xs[k]).squaredNorm() + 1e-300);
    return len;
  }

  void gradient(std::vector<Vector>& grad) const {
    for (int k = 1; k < K; ++k) {
      const Vector back = xs[k] - xs[k - 1];
      const Vector fwd = xs[k + 1] - xs[k];
      const Vector gx = back / std::sqrt(back.squaredNorm() + 1e-300) -
                        fwd / std::sqrt(fwd.squaredNorm() + 1e-300);
      const double total = gx.sum();
      grad[k - 1] = gx - total * ps[k - 1];
    }
  }
};

}  // namespace

GeodesicEstimate geodesic_upper_estimate(const StochasticMap& T, int K, int iters, double floor) {
  if (K < 2) K = 2;
  const int d = T.dim;
  const RowSumVector rT = row_sums(T);
  if (rT.r.minCoeff() < floor) {
    throw Error(ErrorCode::BoundaryTarget, "target row sums touch the simplex boundary");
  }

  const auto seed = log_linear_schedule(T, K, floor);
  KnotWork w;
  w.d = d;
  w.K = K;
  w.xs.resize(K + 1);
  w.ps.resize(K - 1);
  w.xs[0] = Vector::Constant(d, -std::log(static_cast<double>(d)));
  w.xs[K] = rT.r.array().log().matrix();

  std::vector<Vector> z(K - 1);
  for (int k = 1; k < K; ++k) z[k - 1] = seed[k].r.array().log().matrix();
  w.set(z);

  GeodesicEstimate est;
  est.initial_length = w.length();
  double len = est.initial_length;

  std::vector<Vector> grad(K - 1), grad_prev(K - 1), z_prev(K - 1), cand(K - 1);
  double step = 0.0;
  int it = 0;
  for (; it < iters; ++it) {
    w.gradient(grad);
    double gnorm2 = 0.0, gmax = 0.0;
    for (const auto& g : grad) {
      gnorm2 += g.squaredNorm();
      gmax = std::max(gmax, g.cwiseAbs().maxCoeff());
    }
    if (gmax < 1e-12) {
      est.converged = true;
      break;
    }

    if (it == 0) {
      step = 0.01 / std::sqrt(gnorm2);
    } else {
      // Barzilai-Borwein spectral step from the last accepted move
      double ss = 0.0, sy = 0.0;
      for (int k = 0; k < K - 1; ++k) {
        const Vector s = z[k] - z_prev[k];
        const Vector y = grad[k] - grad_prev[k];
        ss += s.squaredNorm();
        sy += s.dot(y);
      }
      step = (sy > 1e-300) ? ss / sy : step * 2.0;
      step = std::min(std::max(step, 1e-12), 1e3);
    }

    bool accepted = false;
    double cand_len = 0.0;
    for (int bt = 0; bt < 50; ++bt) {
      for (int k = 0; k < K - 1; ++k) cand[k] = z[k] - step * grad[k];
      w.set(cand);
      cand_len = w.length();
      if (cand_len <= len - 1e-4 * step * gnorm2) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      w.set(z);  // restore state for the caller-visible samples
      est.converged = true;
      break;
    }
    z_prev = z;
    grad_prev = grad;
    z = cand;
    const double drop = len - cand_len;
    len = cand_len;
    if (drop < 1e-14 * (1.0 + len)) {
      est.converged = true;
      ++it;
      break;
    }
  }

  est.length = len;
  est.iterations = it;
  return est;
}

}  // namespace resetgeo
