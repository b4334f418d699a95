#include <doctest.h>

#include <cmath>

#include "tattr/attribution.hpp"
#include "tattr/poly_attr.hpp"
#include "tattr/random.hpp"

using namespace tattr;

namespace {

// 8-point Gauss-Legendre on [0,1]; exact for polynomial integrands up to
// degree 15, which covers every path integral in these tests. Independent of
// the term-wise allocation that exact_ig uses.
double integrate01(const std::function<double(double)>& g) {
  static const double nodes[4] = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                                  0.9602898564975363};
  static const double weights[4] = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                                    0.1012285362903763};
  double acc = 0.0;
  for (int k = 0; k < 4; ++k) {
    acc += weights[k] * g(0.5 * (1.0 + nodes[k]));
    acc += weights[k] * g(0.5 * (1.0 - nodes[k]));
  }
  return 0.5 * acc;
}

FeatureVector quadrature_ig(const Polynomial& p, const FeatureVector& x, const FeatureVector& baseline) {
  const int n = p.var_count();
  FeatureVector a(n);
  for (int i = 0; i < n; ++i) {
    const Polynomial partial = p.partial(i);
    a[i] = (x[i] - baseline[i]) * integrate01([&](double alpha) {
      const FeatureVector point = baseline + alpha * (x - baseline);
      return partial(point);
    });
  }
  return a;
}

Polynomial random_poly(RngState& rng, int n, int max_degree) {
  Polynomial p(n);
  const int terms = 1 + static_cast<int>(next_below(rng, 5));
  for (int t = 0; t < terms; ++t) {
    MultiIndex kappa = MultiIndex::zeros(n);
    const int degree = 1 + static_cast<int>(next_below(rng, max_degree));
    for (int r = 0; r < degree; ++r) kappa[static_cast<int>(next_below(rng, n))] += 1;
    p.add_term(kappa, next_uniform(rng, -5.0, 5.0));
  }
  return p;
}

}  // namespace

TEST_CASE("evaluation hand cases") {
  CHECK(parse_polynomial("x1*x2")(Eigen::Vector2d(2.0, 3.0)) == doctest::Approx(6.0));
  CHECK(parse_polynomial("3*x1 + x1^2 + 2*x1*x2")(Eigen::Vector2d(1.0, 2.0)) == doctest::Approx(8.0));
  const Polynomial zero(2);
  CHECK(zero(Eigen::Vector2d(5.0, -2.0)) == 0.0);
}

TEST_CASE("symbolic partials") {
  const Polynomial p = parse_polynomial("x1^2*x2");
  const Polynomial d1 = p.partial(0);
  CHECK(d1(Eigen::Vector2d(3.0, 4.0)) == doctest::Approx(24.0));  // 2*x1*x2
  const Polynomial mixed = parse_polynomial("x1*x2").partial(MultiIndex({1, 1}));
  CHECK(mixed(Eigen::Vector2d(9.0, -9.0)) == doctest::Approx(1.0));
  const Polynomial vanished = parse_polynomial("x1*x2").partial(MultiIndex({3, 0}));
  CHECK(vanished.terms().empty());
}

TEST_CASE("parser grammar and errors") {
  const Polynomial p = parse_polynomial(" -x1 + 2.5*x2^3 - 1e-1*x1*x2 ");
  CHECK(p(Eigen::Vector2d(1.0, 1.0)) == doctest::Approx(-1.0 + 2.5 - 0.1));
  CHECK(parse_polynomial("4", 1)(Eigen::VectorXd::Constant(1, 0.0)) == doctest::Approx(4.0));
  CHECK_THROWS_AS(parse_polynomial("x1 + + x2"), ParseError);
  CHECK_THROWS_AS(parse_polynomial("x0"), ParseError);
  CHECK_THROWS_AS(parse_polynomial("x1 x2"), ParseError);
  CHECK_THROWS_AS(parse_polynomial("x3", 2), ParseError);
  CHECK_THROWS_AS(parse_polynomial("x1^9"), ParameterError);  // degree cap
}

TEST_CASE("to_string round-trips through the parser") {
  RngState rng{8, 0};
  for (int trial = 0; trial < 20; ++trial) {
    const Polynomial p = random_poly(rng, 3, 4);
    const Polynomial q = parse_polynomial(p.to_string(), 3);
    FeatureVector x(3);
    for (int i = 0; i < 3; ++i) x[i] = next_uniform(rng, -2, 2);
    CHECK(p(x) == doctest::Approx(q(x)).epsilon(1e-12));
  }
}

TEST_CASE("expand_about shifts exactly") {
  RngState rng{14, 0};
  for (int trial = 0; trial < 20; ++trial) {
    const Polynomial p = random_poly(rng, 3, 4);
    FeatureVector anchor(3), d(3);
    for (int i = 0; i < 3; ++i) {
      anchor[i] = next_uniform(rng, -2, 2);
      d[i] = next_uniform(rng, -2, 2);
    }
    const Polynomial shifted = p.expand_about(anchor);
    CHECK(shifted(d) == doctest::Approx(p(anchor + d)).epsilon(1e-10));
  }
}

TEST_CASE("exact_ig hand cases") {
  SUBCASE("x1^2*x2 at (1,2) from zero") {
    const AttributionResult a = exact_ig(parse_polynomial("x1^2*x2"), Eigen::Vector2d(1.0, 2.0),
                                         Eigen::Vector2d::Zero());
    CHECK(a.scores[0] == doctest::Approx(4.0 / 3.0));
    CHECK(a.scores[1] == doctest::Approx(2.0 / 3.0));
    CHECK(*a.completeness_residual == doctest::Approx(0.0));
  }
  SUBCASE("x1*x2 splits evenly") {
    const AttributionResult a = exact_ig(parse_polynomial("x1*x2"), Eigen::Vector2d(2.0, 3.0),
                                         Eigen::Vector2d::Zero());
    CHECK(a.scores[0] == doctest::Approx(3.0));
    CHECK(a.scores[1] == doctest::Approx(3.0));
  }
  SUBCASE("affine attributions are w_i * delta_i") {
    const Polynomial p = parse_polynomial("2*x1 - 3*x2 + 5", 2);
    const AttributionResult a = exact_ig(p, Eigen::Vector2d(1.5, 2.0), Eigen::Vector2d(0.5, -1.0));
    CHECK(a.scores[0] == doctest::Approx(2.0 * 1.0));
    CHECK(a.scores[1] == doctest::Approx(-3.0 * 3.0));
  }
}

TEST_CASE("exact_ig equals the quadrature path integral and is complete") {
  RngState rng{42, 0};
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + static_cast<int>(next_below(rng, 3));
    const Polynomial p = random_poly(rng, n, 4);
    FeatureVector x(n), baseline(n);
    for (int i = 0; i < n; ++i) {
      x[i] = next_uniform(rng, -3, 3);
      baseline[i] = next_uniform(rng, -3, 3);
    }
    const AttributionResult a = exact_ig(p, x, baseline);
    const FeatureVector ref = quadrature_ig(p, x, baseline);
    for (int i = 0; i < n; ++i) CHECK(a.scores[i] == doctest::Approx(ref[i]).epsilon(1e-9));
    CHECK(a.scores.sum() == doctest::Approx(p(x) - p(baseline)).epsilon(1e-10));
  }
}

TEST_CASE("riemann integrated gradients converges to exact_ig") {
  RngState rng{77, 0};
  for (int trial = 0; trial < 10; ++trial) {
    const Polynomial p = random_poly(rng, 3, 4);
    FeatureVector x(3), baseline(3);
    for (int i = 0; i < 3; ++i) {
      x[i] = next_uniform(rng, -2, 2);
      baseline[i] = next_uniform(rng, -2, 2);
    }
    const AttributionResult exact = exact_ig(p, x, baseline);
    const ModelFunction f{p};
    const double e100 =
        (integrated_gradients(f, x, baseline, 100).scores - exact.scores).cwiseAbs().maxCoeff();
    const double e200 =
        (integrated_gradients(f, x, baseline, 200).scores - exact.scores).cwiseAbs().maxCoeff();
    if (e100 > 1e-12) CHECK(e200 <= 0.6 * e100 + 1e-12);
  }
}

TEST_CASE("exact_taylor_terms hand cases") {
  SUBCASE("pure interaction x1*x2") {
    const TaylorDecomposition dec = exact_taylor_terms(parse_polynomial("x1*x2"), Eigen::Vector2d(2.0, 3.0),
                                                       Eigen::Vector2d::Zero(), AnchorMode::at_baseline);
    CHECK(dec.F.cwiseAbs().maxCoeff() == 0.0);
    CHECK(dec.S_ind.cwiseAbs().maxCoeff() == 0.0);
    CHECK(dec.S_int(0, 1) == doctest::Approx(6.0));
    CHECK(dec.epsilon == doctest::Approx(0.0));
  }
  SUBCASE("3*x1 + x1^2 has no interactions") {
    const Polynomial p = parse_polynomial("3*x1 + x1^2", 2);
    FeatureVector x(2);
    x << 2.0, 5.0;
    const TaylorDecomposition dec = exact_taylor_terms(p, x, Eigen::Vector2d::Zero(), AnchorMode::at_baseline);
    CHECK(dec.F[0] == doctest::Approx(6.0));
    CHECK(dec.S_ind[0] == doctest::Approx(4.0));
    CHECK(dec.S_int.cwiseAbs().maxCoeff() == 0.0);
    CHECK(dec.higher.empty());
  }
}

TEST_CASE("exact decomposition totals to the function difference with zero residual") {
  RngState rng{4, 0};
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + static_cast<int>(next_below(rng, 3));
    const Polynomial p = random_poly(rng, n, 4);
    FeatureVector x(n), baseline(n);
    for (int i = 0; i < n; ++i) {
      x[i] = next_uniform(rng, -3, 3);
      baseline[i] = next_uniform(rng, -3, 3);
    }
    for (AnchorMode mode : {AnchorMode::at_baseline, AnchorMode::at_input}) {
      const TaylorDecomposition dec = exact_taylor_terms(p, x, baseline, mode);
      CHECK(std::abs(dec.epsilon) <= 1e-9);
      const double lhs = dec.f_x - dec.f_baseline;
      CHECK(std::abs(lhs - dec.sign() * dec.total()) <= 1e-9 * (1.0 + std::abs(lhs)));
    }
  }
}

TEST_CASE("cross-oracle: dual-tower coefficients equal symbolic partials") {
  RngState rng{55, 0};
  for (int trial = 0; trial < 10; ++trial) {
    const Polynomial p = random_poly(rng, 3, 4);
    const ModelFunction f{p};
    FeatureVector anchor(3);
    for (int i = 0; i < 3; ++i) anchor[i] = next_uniform(rng, -2, 2);
    const auto coeffs = taylor_coefficients(f, anchor, 4);
    for (const auto& [kappa, c] : coeffs) {
      const double symbolic = p.partial(kappa)(anchor) / kappa.factorial();
      CHECK(std::abs(c - symbolic) <= 1e-10 * (1.0 + std::abs(symbolic)));
    }
  }
}

TEST_CASE("midpoint riemann matches exact_ig per feature by m=1000") {
  RngState rng{99, 0};
  for (int trial = 0; trial < 10; ++trial) {
    const Polynomial p = random_poly(rng, 3, 4);
    FeatureVector x(3), baseline(3);
    for (int i = 0; i < 3; ++i) {
      x[i] = next_uniform(rng, -3, 3);
      baseline[i] = next_uniform(rng, -3, 3);
    }
    const AttributionResult exact = exact_ig(p, x, baseline);
    const AttributionResult mid = integrated_gradients(ModelFunction{p}, x, baseline, 1000, true);
    CHECK((mid.scores - exact.scores).cwiseAbs().maxCoeff() <= 1e-3);
  }
}
