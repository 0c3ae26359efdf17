#pragma once

// Special functions and constants: Gamma, digamma, Gauss hypergeometric 2F1
// on [0,1), conformal weights h_{p;q}, alpha_kappa, lambda_kappa, the
// non-intersection probability psi_kappa, and Catalan numbers.

#include <cstdint>

namespace slelab::specfun {

double gamma_fn(double x);
double log_gamma(double x);  // x > 0
double digamma(double x);    // x > 0

// 2F1(a, b; c; x) for x in [0, 1); series for small x, the 1-x connection
// formulas beyond 1/2 (including the integer c-a-b logarithmic case).
double hyp2f1(double a, double b, double c, double x);

// psi_kappa(infty, 0, x, 1) of the closed-form non-intersection law,
// kappa in (0, 8/3], x in (0, 1).
double psi_kappa(double x, double kappa);
// d/dx psi_kappa, used for partition-function drifts.
double dpsi_kappa_dx(double x, double kappa);

struct Weights {
  double kappa;
  double alpha;   // (6 - kappa) / (2 kappa)
  double lambda;  // (8 - 3 kappa)(6 - kappa) / (2 kappa)
  double h(double p, double q) const;  // ((p kappa - 4q)^2 - (kappa-4)^2)/(16 kappa)
};

Weights weights(double kappa);  // kappa > 0

std::uint64_t catalan(int n);  // n in [0, 32]

}  // namespace slelab::specfun
