#include "slelab/specfun.hpp"

#include "test_util.hpp"

using namespace slelab::specfun;

namespace {

// Truncated-series oracle, independent of the implementation's transformations.
double series_oracle(double a, double b, double c, double x, int terms) {
  double sum = 1.0, t = 1.0;
  for (int n = 0; n < terms; ++n) {
    t *= (a + n) * (b + n) / ((c + n) * (n + 1)) * x;
    sum += t;
  }
  return sum;
}

}  // namespace

TEST_CASE(gamma_small_integers_and_half) {
  REQUIRE_CLOSE(gamma_fn(1.0), 1.0, 1e-14);
  REQUIRE_CLOSE(gamma_fn(5.0), 24.0, 1e-12);
  REQUIRE_CLOSE(gamma_fn(0.5), std::sqrt(3.14159265358979323846), 1e-13);
  REQUIRE_CLOSE(gamma_fn(7.5) / (6.5 * gamma_fn(6.5)), 1.0, 1e-13);
  REQUIRE_THROWS(gamma_fn(0.0));
  REQUIRE_THROWS(gamma_fn(-3.0));
}

TEST_CASE(gamma_accuracy_sweep) {
  // Recurrence consistency Gamma(x+1) = x Gamma(x) across (0, 30).
  for (double x = 0.05; x < 29.0; x += 0.173) {
    double lhs = gamma_fn(x + 1.0);
    double rhs = x * gamma_fn(x);
    REQUIRE_CLOSE(lhs / rhs, 1.0, 1e-13);
  }
}

TEST_CASE(digamma_matches_harmonic_numbers) {
  // psi(n+1) = -gamma_E + H_n
  const double euler = 0.57721566490153286;
  REQUIRE_CLOSE(digamma(1.0), -euler, 1e-12);
  REQUIRE_CLOSE(digamma(4.0), -euler + 1.0 + 0.5 + 1.0 / 3.0, 1e-12);
  REQUIRE_CLOSE(digamma(0.5), -euler - 2.0 * std::log(2.0), 1e-12);
}

TEST_CASE(hyp2f1_at_zero_is_one) {
  REQUIRE_CLOSE(hyp2f1(0.3, 1.7, 2.2, 0.0), 1.0, 0.0);
}

TEST_CASE(hyp2f1_matches_series_oracle) {
  REQUIRE_CLOSE(hyp2f1(1.5, -0.5, 3.0, 0.5), series_oracle(1.5, -0.5, 3.0, 0.5, 50), 1e-12);
  REQUIRE_CLOSE(hyp2f1(0.25, 0.75, 1.25, 0.3), series_oracle(0.25, 0.75, 1.25, 0.3, 200), 1e-12);
}

TEST_CASE(hyp2f1_reflection_agrees_with_series) {
  // x = 0.6, 0.7: both branches converge, so the connection formulas are
  // checked against the direct series.
  for (double x : {0.55, 0.6, 0.7, 0.8}) {
    // integer c-a-b = 2
    double direct = series_oracle(1.5, -0.5, 3.0, x, 4000);
    REQUIRE_CLOSE(hyp2f1(1.5, -0.5, 3.0, x), direct, 1e-11);
    // integer c-a-b = 0
    direct = series_oracle(0.8, 0.7, 1.5, x, 60000);
    REQUIRE_CLOSE(hyp2f1(0.8, 0.7, 1.5, x), direct, 1e-9);
    // non-integer c-a-b
    direct = series_oracle(0.5, 0.5, 1.3, x, 60000);
    REQUIRE_CLOSE(hyp2f1(0.5, 0.5, 1.3, x), direct, 1e-10);
    // negative integer c-a-b = -1
    direct = series_oracle(1.2, 1.3, 1.5, x, 200000);
    REQUIRE_CLOSE(hyp2f1(1.2, 1.3, 1.5, x) / direct, 1.0, 1e-7);
  }
}

TEST_CASE(hyp2f1_gauss_value_at_one) {
  // x -> 1-: F -> Gamma(c)Gamma(c-a-b)/(Gamma(c-a)Gamma(c-b)) for c-a-b > 0.
  double a = 1.5, b = -0.5, c = 3.0;
  double gauss = gamma_fn(c) * gamma_fn(c - a - b) / (gamma_fn(c - a) * gamma_fn(c - b));
  REQUIRE_CLOSE(hyp2f1(a, b, c, 1.0 - 1e-10), gauss, 1e-8 * gauss);
  a = 0.5, b = 0.7, c = 2.9;
  gauss = gamma_fn(c) * gamma_fn(c - a - b) / (gamma_fn(c - a) * gamma_fn(c - b));
  REQUIRE_CLOSE(hyp2f1(a, b, c, 1.0 - 1e-10), gauss, 1e-8 * gauss);
}

TEST_CASE(hyp2f1_parameter_pole_rejected) {
  REQUIRE_THROWS(hyp2f1(0.5, 0.5, 0.0, 0.3));
  REQUIRE_THROWS(hyp2f1(0.5, 0.5, -2.0, 0.3));
}

TEST_CASE(psi_kappa_boundary_values) {
  // x -> 1-: Gauss summation makes the prefactor cancel.
  REQUIRE_CLOSE(psi_kappa(1.0 - 1e-9, 8.0 / 3.0), 1.0, 1e-8);
  // x -> 0+: the x^{2/kappa} factor wins.
  REQUIRE(psi_kappa(1e-12, 8.0 / 3.0) < 1e-8);
  REQUIRE_THROWS(psi_kappa(0.5, 3.5));
}

TEST_CASE(psi_kappa_at_half) {
  // Pinned by the series oracle: prefactor * x^{3/4} * 2F1(1.5,-0.5;3;0.5).
  double pre = gamma_fn(1.5) * gamma_fn(3.5) / (gamma_fn(3.0) * gamma_fn(2.0));
  double expect = pre * std::pow(0.5, 0.75) * series_oracle(1.5, -0.5, 3.0, 0.5, 60);
  REQUIRE_CLOSE(psi_kappa(0.5, 8.0 / 3.0), expect, 1e-12);
  REQUIRE_CLOSE(psi_kappa(0.5, 8.0 / 3.0), 0.756, 1e-3);
}

TEST_CASE(psi_kappa_monotone_for_83) {
  double prev = 0.0;
  for (int i = 1; i <= 1000; ++i) {
    double x = i / 1001.0;
    double v = psi_kappa(x, 8.0 / 3.0);
    REQUIRE_MSG(v > prev, "x=" << x);
    prev = v;
  }
}

TEST_CASE(dpsi_kappa_matches_finite_differences) {
  double kappa = 8.0 / 3.0;
  for (double x : {0.2, 0.5, 0.8}) {
    double h = 1e-6;
    double fd = (psi_kappa(x + h, kappa) - psi_kappa(x - h, kappa)) / (2.0 * h);
    REQUIRE_CLOSE(dpsi_kappa_dx(x, kappa), fd, 1e-6);
  }
}

TEST_CASE(weights_closed_forms) {
  Weights w = weights(8.0 / 3.0);
  REQUIRE_CLOSE(w.alpha, 5.0 / 8.0, 1e-15);
  REQUIRE_CLOSE(w.lambda, 0.0, 1e-15);
  REQUIRE_CLOSE(w.h(0.0, 0.5), 5.0 / 96.0, 1e-15);  // 2 h_{0;1/2} = 5/48
  // h_{1;2} == alpha_kappa as an algebraic identity.
  for (double kappa : {0.7, 2.0, 8.0 / 3.0, 4.0, 6.0}) {
    Weights ww = weights(kappa);
    REQUIRE_CLOSE(ww.h(1.0, 2.0), ww.alpha, 1e-14);
    REQUIRE_CLOSE(ww.h(1.0, 1.0), 0.0, 1e-14);
    // reflection invariance: depends on (p kappa - 4q)^2 only
    REQUIRE_CLOSE(ww.h(1.0, 3.0), ww.h(-1.0, -3.0), 1e-14);
  }
}

TEST_CASE(catalan_numbers) {
  REQUIRE(catalan(0) == 1);
  REQUIRE(catalan(1) == 1);
  REQUIRE(catalan(2) == 2);
  REQUIRE(catalan(3) == 5);
  REQUIRE(catalan(10) == 16796);
  REQUIRE_THROWS(catalan(-1));
}

TEST_MAIN()
