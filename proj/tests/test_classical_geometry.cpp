#include <cmath>
#include <limits>

#include "doctest.h"
#include "resetgeo/classical_geometry.hpp"
#include "resetgeo/random_ensembles.hpp"

using namespace resetgeo;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

StochasticMap column_constant(const Vector& q) {
  const int d = static_cast<int>(q.size());
  Matrix m(d, d);
  for (int n = 0; n < d; ++n) m.col(n) = q;
  return validate_map(m);
}

StochasticMap random_permutation_mixture(Rng& rng, int d, int terms) {
  Matrix m = Matrix::Zero(d, d);
  Vector w(terms);
  for (int k = 0; k < terms; ++k) w(k) = rng.uniform() + 1e-3;
  w /= w.sum();
  for (int k = 0; k < terms; ++k) {
    std::vector<int> perm(d);
    for (int i = 0; i < d; ++i) perm[i] = i;
    for (int i = d - 1; i > 0; --i) std::swap(perm[i], perm[rng.uniform_int(0, i)]);
    for (int n = 0; n < d; ++n) m(perm[n], n) += w(k);
  }
  return validate_map(m);
}

}  // namespace

TEST_CASE("atanh_clamped matches atanh inside and saturates at the edge") {
  CHECK(atanh_clamped(0.5) == doctest::Approx(std::atanh(0.5)).epsilon(1e-15));
  CHECK(atanh_clamped(-0.5) == doctest::Approx(-std::atanh(0.5)).epsilon(1e-15));
  CHECK(std::isfinite(atanh_clamped(1.0)));
  CHECK(atanh_clamped(1.0) == -atanh_clamped(-1.0));
}

TEST_CASE("metric_eval on the hypersurface") {
  MetricSample s;
  s.r = RowSumVector{2, Vector::Constant(2, 0.5)};
  s.x_tangent = Vector(2);
  s.x_tangent << 0.1, -0.1;
  s.y_tangent = s.x_tangent;
  // g(x, x) = sum r_n x_n^2 with x read in ln-r coordinates: 0.5*0.01*2 ... = 0.08
  CHECK(metric_eval(s) == doctest::Approx(0.08).epsilon(1e-14));

  s.y_tangent = Vector(3);
  CHECK_THROWS_WITH_AS(static_cast<void>(metric_eval(s)), doctest::Contains("DimMismatch"), Error);

  s.y_tangent = s.x_tangent;
  s.r.r(0) = 0.0;
  s.r.r(1) = 1.0;
  CHECK_THROWS_WITH_AS(static_cast<void>(metric_eval(s)), doctest::Contains("BoundaryPoint"),
                       Error);
}

TEST_CASE("ell frozen values") {
  CHECK(ell(two_level_map(std::log(2.0))) == doctest::Approx(0.8030286220374507).epsilon(1e-12));
  CHECK(ell(identity_map(6)) == doctest::Approx(0.0));

  RowSumVector r{2, Vector(2)};
  r.r << 0.75, 0.25;
  CHECK(ell_of_rowsums(r) ==
        doctest::Approx(std::sqrt(std::pow(std::log(1.5), 2) + std::pow(std::log(0.5), 2)))
            .epsilon(1e-14));

  // a zero row sum diverges; raising the floor above a small row sum also does
  Matrix m(2, 2);
  m << 1.0, 1.0, 0.0, 0.0;
  CHECK(ell(validate_map(m)) == kInf);
  CHECK(ell(two_level_map(3.0), 0.2) == kInf);
  CHECK(std::isfinite(ell(two_level_map(3.0), 0.01)));
}

TEST_CASE("complexity_bracket widths") {
  const auto br = complexity_bracket(two_level_map(std::log(2.0)));
  CHECK(br.ell == doctest::Approx(0.8030286220374507).epsilon(1e-12));
  CHECK(br.lower == br.ell);
  CHECK(br.upper == doctest::Approx(1.9386825902965916).epsilon(1e-12));
  CHECK(!br.diverged);

  Matrix m(2, 2);
  m << 1.0, 1.0, 0.0, 0.0;
  CHECK(complexity_bracket(validate_map(m)).diverged);
}

TEST_CASE("shannon_entropy and entropic_bound") {
  Vector p(2);
  p << 0.75, 0.25;
  CHECK(shannon_entropy(validate_probability(p)) ==
        doctest::Approx(0.56233514461880835).epsilon(1e-12));

  CHECK(entropic_bound(two_level_map(std::log(2.0))) ==
        doctest::Approx(0.20914434351035943).epsilon(1e-12));
  CHECK(entropic_bound(identity_map(4)) == doctest::Approx(0.0).epsilon(1e-12));

  // perfect reset sends the uniform state to a point: zero output entropy
  Vector point = Vector::Zero(3);
  point(1) = 1.0;
  CHECK(entropic_bound(column_constant(point)) == kInf);
}

TEST_CASE("doubly stochastic maps cost nothing") {
  for (int trial = 0; trial < 20; ++trial) {
    Rng rng(mix_seed(101, static_cast<std::uint64_t>(trial)));
    const int d = 2 + trial % 4;
    const StochasticMap T = random_permutation_mixture(rng, d, 3);
    CHECK(ell(T) < 1e-12);                    // uniform stays uniform
    CHECK(entropic_bound(T) < 1e-10);         // and entropy cannot drop
  }
}

TEST_CASE("tradeoff_margin holds with the frozen two-level margin") {
  const auto tm =
      tradeoff_margin(two_level_map(std::log(2.0)), make_undesired_set(2, {1}));
  CHECK(tm.epsilon == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(tm.margin == doctest::Approx(0.5 * std::exp(0.8030286220374507)).epsilon(1e-12));
  CHECK(tm.margin_sharp == doctest::Approx(tm.margin).epsilon(1e-14));  // |u| = 1
  CHECK(tm.holds);

  const auto id = tradeoff_margin(identity_map(3), make_undesired_set(3, {2}));
  CHECK(id.epsilon == doctest::Approx(1.0));
  CHECK(id.margin == doctest::Approx(1.0));  // equality case: nothing reset, nothing paid
  CHECK(id.holds);

  // diverged length makes the bound vacuous but still reported as holding
  Matrix m(2, 2);
  m << 1.0, 1.0, 0.0, 0.0;
  const auto dv = tradeoff_margin(validate_map(m), make_undesired_set(2, {1}));
  CHECK(dv.margin == kInf);
  CHECK(dv.holds);
}

TEST_CASE("protocol_lower_bound frozen values and guards") {
  CHECK(protocol_lower_bound(0.8030286220374507, 2, 2.0) ==
        doctest::Approx(0.087333376952305428).epsilon(1e-12));
  const double n_upper = protocol_lower_bound(1.9386825902965916, 2, 1.0);
  CHECK(n_upper == doctest::Approx(1.9386825902965916 / ((2.0 + std::sqrt(2.0)) * std::log(2.0 * std::exp(1.0))))
                       .epsilon(1e-12));
  CHECK(n_upper == doctest::Approx(0.335376).epsilon(1e-5));

  CHECK_THROWS_WITH_AS(static_cast<void>(protocol_lower_bound(1.0, 2, 0.0)),
                       doctest::Contains("NonpositiveRate"), Error);
  CHECK_THROWS_WITH_AS(static_cast<void>(protocol_lower_bound(-1.0, 2, 1.0)),
                       doctest::Contains("OutOfRange"), Error);
}

TEST_CASE("alpha_length families") {
  const StochasticMap T = two_level_map(std::log(2.0));
  AlphaMetricParams a1{1.0};
  CHECK(alpha_length(T, a1) == doctest::Approx(0.52210476888020637).epsilon(1e-12));

  // alpha = 4 has alpha' = -1: lengths blow up as e^N against row sums e^{-N}
  AlphaMetricParams a4{4.0};
  for (int n = 1; n <= 3; ++n) {
    // column-constant map: every column equals the target image distribution
    Vector q(2);
    q << 1.0 - 0.5 * std::exp(-2.0 * n), 0.5 * std::exp(-2.0 * n);
    Matrix m(2, 2);
    m.col(0) = q;
    m.col(1) = q;
    const double bound = 2.0 * (std::exp(static_cast<double>(n)) - 1.0);
    CHECK(alpha_length(validate_map(m), a4) >= bound);
  }

  AlphaMetricParams a2{2.0};
  CHECK_THROWS_WITH_AS(static_cast<void>(alpha_length(T, a2)), doctest::Contains("AlphaTwo"),
                       Error);
  AlphaMetricParams a0{0.0};
  CHECK_THROWS_WITH_AS(static_cast<void>(alpha_length(T, a0)), doctest::Contains("OutOfRange"),
                       Error);

  Matrix dead(2, 2);
  dead << 1.0, 1.0, 0.0, 0.0;
  CHECK(alpha_length(validate_map(dead), a4) == kInf);  // alpha' < 0 diverges at the boundary
}

TEST_CASE("two_level_complexity frozen table") {
  CHECK(two_level_complexity(std::log(2.0)) == doctest::Approx(0.81046001962120798).epsilon(1e-12));
  CHECK(two_level_complexity(0.25) == doctest::Approx(0.3206897711541502).epsilon(1e-12));
  CHECK(two_level_complexity(0.5) == doctest::Approx(0.60367277503755292).epsilon(1e-12));
  CHECK(two_level_complexity(1.0) == doctest::Approx(1.1288448595046386).epsilon(1e-12));
  CHECK(two_level_complexity(2.0) == doctest::Approx(2.1385882174035541).epsilon(1e-12));
  CHECK(two_level_complexity(4.0) == doctest::Approx(4.1398226559791367).epsilon(1e-12));
  CHECK(two_level_complexity(10.0) - 10.0 == doctest::Approx(0.13984388071060359).epsilon(1e-9));
  CHECK(two_level_complexity(0.0) == 0.0);
  CHECK_THROWS_WITH_AS(static_cast<void>(two_level_complexity(-0.1)),
                       doctest::Contains("OutOfRange"), Error);
  CHECK(std::isfinite(two_level_complexity(100.0)));  // clamped atanh keeps saturation finite
}

TEST_CASE("two_level_complexity grows at least as fast as wtau") {
  double prev = 0.0;
  for (double u = 0.05; u <= 10.0; u += 0.05) {
    const double c = two_level_complexity(u);
    CHECK(c > prev);  // strictly increasing
    prev = c;
    // central-difference slope stays >= 1: resets cost at least the time spent
    const double h = 1e-6;
    const double slope = (two_level_complexity(u + h) - two_level_complexity(u - h)) / (2.0 * h);
    CHECK(slope >= 1.0 - 1e-4);
  }
}
