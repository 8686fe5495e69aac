#pragma once

// Quantum channels as Kraus lists, Choi matrices, the reduced output state
// phi = Lambda(1/d), the affine-invariant SPD distance, the quantum length and
// bracket, error/trade-off, entropic and protocol bounds, swap-channel
// analytics on the Bloch ball, and the d=2 quantum scaling solver.

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "resetgeo/classical_geometry.hpp"
#include "resetgeo/core_maps.hpp"

namespace resetgeo {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using BlochVector = Eigen::Vector3d;

struct DensityOperator {
  int dim = 0;
  CMatrix rho;
};

struct KrausChannel {
  int dim = 0;
  std::vector<CMatrix> kraus;  // sum_j K_j^dag K_j = I
};

struct ChoiMatrix {
  int dim = 0;     // system dimension d; matrix is d^2 x d^2
  CMatrix m;       // M = sum_{mn} |m><n| (x) Lambda(|m><n|); tr over slot 2 = I
};

struct ProjectorQ {
  int dim = 0;
  CMatrix pi;  // Hermitian idempotent
};

struct QuantumTradeoff {
  double epsilon = 0.0;  // d tr(Pi phi)
  double margin = 0.0;   // epsilon * e^ell
  bool holds = false;
};

struct QuantumScaleSolution {
  CMatrix u;  // Hermitian, d x d
  CMatrix v;  // Hermitian, d x d, gauge tr v = 0
  CMatrix m;  // exp(ln A + U (x) I + I (x) V)
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

KrausChannel validate_channel(int dim, std::vector<CMatrix> kraus);
ProjectorQ validate_projector(int dim, const CMatrix& pi);

ChoiMatrix choi_from_kraus(const KrausChannel& ch);
DensityOperator reduced_output(const KrausChannel& ch);
DensityOperator apply_channel(const KrausChannel& ch, const DensityOperator& rho);
DensityOperator apply_choi(const ChoiMatrix& choi, const DensityOperator& rho);

// epsilon = tr[Pi Lambda(1)] = d tr[Pi phi]; dominates tr[Pi Lambda(rho)] over
// all input states.
double quantum_error(const KrausChannel& ch, const ProjectorQ& pi);

// ||ln(A^{-1/2} B A^{-1/2})||_F; throws SingularInput below eigenvalue 1e-12.
double spd_distance(const CMatrix& a, const CMatrix& b);

// ell = ||ln d + ln phi||_F = spd_distance(I/d, phi); +infinity marker when an
// eigenvalue of phi falls below the floor.
double quantum_ell(const KrausChannel& ch, double floor = kProbabilityFloor);
double quantum_ell_of_phi(const CMatrix& phi, double floor = kProbabilityFloor);

ComplexityBracket quantum_bracket(const KrausChannel& ch, double floor = kProbabilityFloor);

QuantumTradeoff quantum_tradeoff(const KrausChannel& ch, const ProjectorQ& pi,
                                 double floor = kProbabilityFloor);

// ln S(I/d) - ln S(phi), von Neumann entropies in nats; +infinity marker at
// zero output entropy.
double quantum_entropy_bound(const KrausChannel& ch);

double von_neumann_entropy(const CMatrix& rho);

// N_min = ell / (sqrt(d) ln(d e^gamma)) for unit-time Lindblad protocols with
// dissipator norm at most gamma.
double lindblad_protocol_bound(double ell_value, int d, double gamma);

// N_min = ln(1/(d lambda1)) / ln(d e^gamma) for dilation protocols with Gibbs
// bandwidth gamma; companion floor lambda1(phi_N) >= (1/d)(e^{-gamma}/d)^N.
double dilation_protocol_bound(double lambda1, int d, double gamma);
double dilation_eigen_floor(int d, double gamma, double n_protocols);

// Lambda(rho) = rho_E = (1-kappa)|0><0| + kappa|1><1| for every input.
KrausChannel swap_channel(double kappa);

// Closed form in the environment purity p = |2 kappa - 1|:
// C = 2 atanh(sqrt(2) p / sqrt(1+p^2)) - sqrt(2) atanh(p / sqrt(1+p^2)).
double swap_complexity(double kappa);

// Midpoint quadrature of sqrt(2||da||^2/(1-||a||^2) + 4(a.da)^2/(1-||a||^2)^2).
double bloch_path_length(const std::vector<BlochVector>& path);

// T_{mn} = <m| Lambda(|n><n|) |m> in the given orthonormal basis (columns of
// `basis`, identity by default).
StochasticMap classical_reduction(const KrausChannel& ch);
StochasticMap classical_reduction(const KrausChannel& ch, const CMatrix& basis);

// Builds a stochastic-map channel K_{mn} = sqrt(T_{mn}) |m><n|.
KrausChannel channel_from_map(const StochasticMap& T);

// Minimizes F(U,V) = tr e^{ln A + U(x)I + I(x)V} - tr U - d tr(V phi) on d=2
// (4x4 exponentials); the stationary point is the scaled Choi matrix with
// tr_2 M = I and tr_1 M = d phi_target. DimTooLarge beyond d=2.
QuantumScaleSolution quantum_scale_solve(const CMatrix& a, const DensityOperator& phi_target,
                                         double tol = 1e-7, int max_iter = 20000);

// Hermitian matrix functions via eigendecomposition (eigenvalue floor 1e-14).
CMatrix herm_log(const CMatrix& a);
CMatrix herm_exp(const CMatrix& a);
CMatrix herm_sqrt_inv(const CMatrix& a);
CMatrix partial_trace_1(const CMatrix& m, int d);  // trace out slot 1 (input copy)
CMatrix partial_trace_2(const CMatrix& m, int d);  // trace out slot 2 (output)

// Log-Euclidean path exp((1-t) ln(I/d) + t ln phi1): through I/d it coincides
// with the affine-invariant geodesic, so its chord sum equals quantum ell.
std::vector<CMatrix> log_euclidean_density_path(const CMatrix& phi1, int K);
double density_path_length(const std::vector<CMatrix>& phis);

}  // namespace resetgeo
