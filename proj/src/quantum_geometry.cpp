#include "resetgeo/quantum_geometry.hpp"

#include <cmath>
#include <limits>

namespace resetgeo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEigenFloor = 1e-14;

CMatrix symmetrized(const CMatrix& a) { return 0.5 * (a + a.adjoint()); }

// eigendecomposition of the Hermitian part with a spectral transform
template <class F>
CMatrix herm_apply(const CMatrix& a, F&& f) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(symmetrized(a));
  Vector lam = es.eigenvalues();
  for (int i = 0; i < lam.size(); ++i) lam(i) = f(lam(i));
  return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
}

Vector herm_eigenvalues(const CMatrix& a) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(symmetrized(a));
  return es.eigenvalues();
}

}  // namespace

CMatrix herm_log(const CMatrix& a) {
  return herm_apply(a, [](double x) { return std::log(std::max(x, kEigenFloor)); });
}

CMatrix herm_exp(const CMatrix& a) {
  return herm_apply(a, [](double x) { return std::exp(x); });
}

CMatrix herm_sqrt_inv(const CMatrix& a) {
  return herm_apply(a, [](double x) { return 1.0 / std::sqrt(std::max(x, kEigenFloor)); });
}

CMatrix partial_trace_1(const CMatrix& m, int d) {
  CMatrix out = CMatrix::Zero(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int k = 0; k < d; ++k) out(a, b) += m(k * d + a, k * d + b);
  return out;
}

CMatrix partial_trace_2(const CMatrix& m, int d) {
  CMatrix out = CMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) out(i, j) += m(i * d + k, j * d + k);
  return out;
}

KrausChannel validate_channel(int dim, std::vector<CMatrix> kraus) {
  if (dim < 2) throw Error(ErrorCode::OutOfRange, "channel dimension must be at least 2");
  if (kraus.empty()) throw Error(ErrorCode::TracePreservationViolation, "empty Kraus list");
  CMatrix sum = CMatrix::Zero(dim, dim);
  for (const auto& k : kraus) {
    if (k.rows() != dim || k.cols() != dim) {
      throw Error(ErrorCode::DimMismatch, "Kraus operator dimension mismatch");
    }
    if (!k.allFinite()) throw Error(ErrorCode::ParseError, "non-finite Kraus entry");
    sum += k.adjoint() * k;
  }
  if ((sum - CMatrix::Identity(dim, dim)).cwiseAbs().maxCoeff() > 1e-9) {
    throw Error(ErrorCode::TracePreservationViolation, "sum K^dag K deviates from identity");
  }
  return KrausChannel{dim, std::move(kraus)};
}

ProjectorQ validate_projector(int dim, const CMatrix& pi) {
  if (pi.rows() != dim || pi.cols() != dim) {
    throw Error(ErrorCode::DimMismatch, "projector dimension mismatch");
  }
  if ((pi - pi.adjoint()).cwiseAbs().maxCoeff() > 1e-9) {
    throw Error(ErrorCode::InvalidArgument, "projector must be Hermitian");
  }
  if ((pi * pi - pi).cwiseAbs().maxCoeff() > 1e-9) {
    throw Error(ErrorCode::InvalidArgument, "projector must be idempotent");
  }
  return ProjectorQ{dim, pi};
}

ChoiMatrix choi_from_kraus(const KrausChannel& ch) {
  const int d = ch.dim;
  CMatrix m = CMatrix::Zero(d * d, d * d);
  for (const auto& k : ch.kraus) {
    CVector vec(d * d);  // vec[(i, a)] = K(a, i), i.e. sum_i |i> (x) K|i>
    for (int i = 0; i < d; ++i)
      for (int a = 0; a < d; ++a) vec(i * d + a) = k(a, i);
    m += vec * vec.adjoint();
  }
  if ((partial_trace_2(m, d) - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-9) {
    throw Error(ErrorCode::TracePreservationViolation, "Choi input marginal deviates from identity");
  }
  return ChoiMatrix{d, std::move(m)};
}

DensityOperator reduced_output(const KrausChannel& ch) {
  const int d = ch.dim;
  CMatrix phi = CMatrix::Zero(d, d);
  for (const auto& k : ch.kraus) phi += k * k.adjoint();
  phi /= static_cast<double>(d);
  return DensityOperator{d, symmetrized(phi)};
}

DensityOperator apply_channel(const KrausChannel& ch, const DensityOperator& rho) {
  if (ch.dim != rho.dim) throw Error(ErrorCode::DimMismatch, "channel and state dims differ");
  CMatrix out = CMatrix::Zero(ch.dim, ch.dim);
  for (const auto& k : ch.kraus) out += k * rho.rho * k.adjoint();
  return DensityOperator{ch.dim, std::move(out)};
}

DensityOperator apply_choi(const ChoiMatrix& choi, const DensityOperator& rho) {
  if (choi.dim != rho.dim) throw Error(ErrorCode::DimMismatch, "Choi and state dims differ");
  const int d = choi.dim;
  CMatrix out = CMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) out += rho.rho(i, j) * choi.m.block(i * d, j * d, d, d);
  return DensityOperator{d, std::move(out)};
}

double quantum_error(const KrausChannel& ch, const ProjectorQ& pi) {
  if (ch.dim != pi.dim) throw Error(ErrorCode::DimMismatch, "channel and projector dims differ");
  const DensityOperator phi = reduced_output(ch);
  return ch.dim * (pi.pi * phi.rho).trace().real();
}

double spd_distance(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols()) {
    throw Error(ErrorCode::DimMismatch, "distance needs equal square matrices");
  }
  if (herm_eigenvalues(a).minCoeff() <= 1e-12 || herm_eigenvalues(b).minCoeff() <= 1e-12) {
    throw Error(ErrorCode::SingularInput, "matrices must be strictly positive definite");
  }
  const CMatrix s = herm_sqrt_inv(a);
  const Vector lam = herm_eigenvalues(s * b * s);
  double sum = 0.0;
  for (int i = 0; i < lam.size(); ++i) {
    const double x = std::log(lam(i));
    sum += x * x;
  }
  return std::sqrt(sum);
}

double quantum_ell_of_phi(const CMatrix& phi, double floor) {
  const int d = static_cast<int>(phi.rows());
  const Vector lam = herm_eigenvalues(phi);
  double sum = 0.0;
  for (int i = 0; i < d; ++i) {
    if (lam(i) < floor) return kInf;
    const double x = std::log(static_cast<double>(d)) + std::log(lam(i));
    sum += x * x;
  }
  return std::sqrt(sum);
}

double quantum_ell(const KrausChannel& ch, double floor) {
  return quantum_ell_of_phi(reduced_output(ch).rho, floor);
}

ComplexityBracket quantum_bracket(const KrausChannel& ch, double floor) {
  ComplexityBracket b;
  b.ell = quantum_ell(ch, floor);
  b.diverged = std::isinf(b.ell);
  b.lower = b.ell;
  b.upper = (std::sqrt(static_cast<double>(ch.dim)) + 1.0) * b.ell;
  return b;
}

QuantumTradeoff quantum_tradeoff(const KrausChannel& ch, const ProjectorQ& pi, double floor) {
  QuantumTradeoff t;
  t.epsilon = quantum_error(ch, pi);
  const double l = quantum_ell(ch, floor);
  if (std::isinf(l)) {
    t.margin = kInf;
    t.holds = true;  // limit form: divergent length dominates any error
    return t;
  }
  t.margin = t.epsilon * std::exp(l);
  t.holds = t.margin >= 1.0 - 1e-12;
  return t;
}

double von_neumann_entropy(const CMatrix& rho) {
  const Vector lam = herm_eigenvalues(rho);
  double s = 0.0;
  for (int i = 0; i < lam.size(); ++i) {
    if (lam(i) > 0.0) s -= lam(i) * std::log(lam(i));
  }
  return s;
}

double quantum_entropy_bound(const KrausChannel& ch) {
  const double s_out = von_neumann_entropy(reduced_output(ch).rho);
  if (s_out <= 0.0) return kInf;
  return std::log(std::log(static_cast<double>(ch.dim))) - std::log(s_out);
}

double lindblad_protocol_bound(double ell_value, int d, double gamma) {
  if (gamma <= 0.0) throw Error(ErrorCode::NonpositiveRate, "gamma must be positive");
  if (ell_value < 0.0) throw Error(ErrorCode::OutOfRange, "length must be nonnegative");
  return ell_value / (std::sqrt(static_cast<double>(d)) * (std::log(static_cast<double>(d)) + gamma));
}

double dilation_protocol_bound(double lambda1, int d, double gamma) {
  if (gamma <= 0.0) throw Error(ErrorCode::NonpositiveRate, "gamma must be positive");
  if (lambda1 <= 0.0 || lambda1 > 1.0 / d + 1e-12) {
    throw Error(ErrorCode::OutOfRange, "smallest output eigenvalue must lie in (0, 1/d]");
  }
  if (lambda1 >= 1.0 / d) return 0.0;
  return -std::log(d * lambda1) / (std::log(static_cast<double>(d)) + gamma);
}

double dilation_eigen_floor(int d, double gamma, double n_protocols) {
  return (1.0 / d) * std::exp(-n_protocols * (gamma + std::log(static_cast<double>(d))));
}

KrausChannel swap_channel(double kappa) {
  if (kappa < 0.0 || kappa > 1.0) throw Error(ErrorCode::OutOfRange, "kappa must lie in [0, 1]");
  const double p[2] = {1.0 - kappa, kappa};
  std::vector<CMatrix> kraus;
  for (int m = 0; m < 2; ++m) {
    for (int n = 0; n < 2; ++n) {
      CMatrix k = CMatrix::Zero(2, 2);
      k(m, n) = std::sqrt(p[m]);
      kraus.push_back(std::move(k));
    }
  }
  return KrausChannel{2, std::move(kraus)};
}

double swap_complexity(double kappa) {
  if (kappa < 0.0 || kappa > 1.0) throw Error(ErrorCode::OutOfRange, "kappa must lie in [0, 1]");
  const double purity = std::abs(2.0 * kappa - 1.0);
  const double f = purity / std::sqrt(1.0 + purity * purity);
  const double s2 = std::sqrt(2.0);
  return 2.0 * atanh_clamped(s2 * f) - s2 * atanh_clamped(f);
}

double bloch_path_length(const std::vector<BlochVector>& path) {
  for (const auto& a : path) {
    if (a.norm() >= 1.0 - 1e-12) {
      throw Error(ErrorCode::BoundaryBlochVector, "Bloch sample touches the sphere");
    }
  }
  double len = 0.0;
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    const BlochVector mid = 0.5 * (path[k] + path[k + 1]);
    const BlochVector da = path[k + 1] - path[k];
    const double w = 1.0 - mid.squaredNorm();
    const double radial = mid.dot(da);
    const double g = 2.0 * da.squaredNorm() / w + 4.0 * radial * radial / (w * w);
    len += std::sqrt(g);
  }
  return len;
}

StochasticMap classical_reduction(const KrausChannel& ch) {
  return classical_reduction(ch, CMatrix::Identity(ch.dim, ch.dim));
}

StochasticMap classical_reduction(const KrausChannel& ch, const CMatrix& basis) {
  const int d = ch.dim;
  if (basis.rows() != d || basis.cols() != d) {
    throw Error(ErrorCode::DimMismatch, "basis dimension mismatch");
  }
  if ((basis.adjoint() * basis - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-9) {
    throw Error(ErrorCode::InvalidArgument, "basis must be orthonormal");
  }
  Matrix T(d, d);
  for (int n = 0; n < d; ++n) {
    const CMatrix input = basis.col(n) * basis.col(n).adjoint();
    CMatrix out = CMatrix::Zero(d, d);
    for (const auto& k : ch.kraus) out += k * input * k.adjoint();
    for (int m = 0; m < d; ++m) {
      T(m, n) = (basis.col(m).adjoint() * out * basis.col(m)).value().real();
    }
  }
  return validate_map(T);
}

KrausChannel channel_from_map(const StochasticMap& T) {
  const int d = T.dim;
  std::vector<CMatrix> kraus;
  for (int m = 0; m < d; ++m) {
    for (int n = 0; n < d; ++n) {
      if (T.entries(m, n) <= 0.0) continue;
      CMatrix k = CMatrix::Zero(d, d);
      k(m, n) = std::sqrt(T.entries(m, n));
      kraus.push_back(std::move(k));
    }
  }
  return validate_channel(d, std::move(kraus));
}

namespace {

CMatrix kron_left(const CMatrix& u, int d) {  // U (x) I
  CMatrix out = CMatrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k)
      for (int j = 0; j < d; ++j) out(i * d + j, k * d + j) = u(i, k);
  return out;
}

CMatrix kron_right(const CMatrix& v, int d) {  // I (x) V
  CMatrix out = CMatrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int l = 0; l < d; ++l) out(i * d + j, i * d + l) = v(j, l);
  return out;
}

}  // namespace

QuantumScaleSolution quantum_scale_solve(const CMatrix& a, const DensityOperator& phi_target,
                                         double tol, int max_iter) {
  const int d = phi_target.dim;
  if (d != 2) throw Error(ErrorCode::DimTooLarge, "scaling solver is capped at d = 2");
  if (a.rows() != d * d || a.cols() != d * d) {
    throw Error(ErrorCode::DimMismatch, "matrix must be d^2 x d^2");
  }
  if (herm_eigenvalues(a).minCoeff() <= 1e-12) {
    throw Error(ErrorCode::NotStrictlyPositive, "matrix must be strictly positive definite");
  }
  if (herm_eigenvalues(phi_target.rho).minCoeff() <= 1e-12) {
    throw Error(ErrorCode::NotStrictlyPositive, "target state must be strictly positive");
  }

  const CMatrix log_a = herm_log(a);
  const CMatrix identity = CMatrix::Identity(d, d);
  const CMatrix& phi = phi_target.rho;

  CMatrix u = CMatrix::Zero(d, d), v = CMatrix::Zero(d, d);
  CMatrix eh;

  auto gauge = [&]() {
    const std::complex<double> c = v.trace() / static_cast<double>(d);
    v -= c * identity;
    u += c * identity;
  };

  auto rebuild = [&](const CMatrix& uu, const CMatrix& vv) {
    return herm_exp(log_a + kron_left(uu, d) + kron_right(vv, d));
  };

  auto objective = [&](const CMatrix& uu, const CMatrix& vv, const CMatrix& expd) {
    return expd.trace().real() - uu.trace().real() - d * (vv * phi).trace().real();
  };

  QuantumScaleSolution sol;
  eh = rebuild(u, v);
  double f = objective(u, v, eh);

  CMatrix gu, gv, gu_prev, gv_prev, u_prev, v_prev;
  double step = 0.1;
  int it = 0;
  for (; it < max_iter; ++it) {
    gu = symmetrized(partial_trace_2(eh, d) - identity);
    gv = symmetrized(partial_trace_1(eh, d) - static_cast<double>(d) * phi);
    sol.residual = std::max(gu.cwiseAbs().maxCoeff(), gv.cwiseAbs().maxCoeff());
    if (sol.residual <= tol) {
      sol.converged = true;
      break;
    }

    if (it > 0) {
      const CMatrix su = u - u_prev, sv = v - v_prev;
      const CMatrix yu = gu - gu_prev, yv = gv - gv_prev;
      const double ss = su.squaredNorm() + sv.squaredNorm();
      const double sy = (su.cwiseProduct(yu.conjugate()).sum() +
                         sv.cwiseProduct(yv.conjugate()).sum())
                            .real();
      if (sy > 1e-300) step = ss / sy;
      step = std::min(std::max(step, 1e-10), 1e4);
    }

    const double g2 = gu.squaredNorm() + gv.squaredNorm();
    u_prev = u;
    v_prev = v;
    gu_prev = gu;
    gv_prev = gv;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      CMatrix ut = u - step * gu;
      CMatrix vt = v - step * gv;
      CMatrix et = rebuild(ut, vt);
      const double ft = objective(ut, vt, et);
      if (ft <= f - 1e-4 * step * g2) {
        u = ut;
        v = vt;
        eh = et;
        f = ft;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    gauge();
    eh = rebuild(u, v);
    f = objective(u, v, eh);
  }

  gauge();
  eh = rebuild(u, v);
  gu = partial_trace_2(eh, d) - identity;
  gv = partial_trace_1(eh, d) - static_cast<double>(d) * phi;
  sol.residual = std::max(gu.cwiseAbs().maxCoeff(), gv.cwiseAbs().maxCoeff());
  sol.converged = sol.residual <= tol;
  sol.u = u;
  sol.v = v;
  sol.m = eh;
  sol.iterations = it;
  return sol;
}

std::vector<CMatrix> log_euclidean_density_path(const CMatrix& phi1, int K) {
  const int d = static_cast<int>(phi1.rows());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(symmetrized(phi1));
  const Vector lam = es.eigenvalues();
  const CMatrix& vecs = es.eigenvectors();
  std::vector<CMatrix> path;
  path.reserve(K + 1);
  for (int k = 0; k <= K; ++k) {
    const double t = static_cast<double>(k) / K;
    Vector lt(d);
    for (int i = 0; i < d; ++i) {
      // exp((1-t) ln(1/d) + t ln lambda_i)
      lt(i) = std::exp((t - 1.0) * std::log(static_cast<double>(d)) +
                       t * std::log(std::max(lam(i), kEigenFloor)));
    }
    path.push_back(vecs * lt.asDiagonal() * vecs.adjoint());
  }
  return path;
}

double density_path_length(const std::vector<CMatrix>& phis) {
  double len = 0.0;
  for (std::size_t k = 0; k + 1 < phis.size(); ++k) len += spd_distance(phis[k], phis[k + 1]);
  return len;
}

}  // namespace resetgeo
