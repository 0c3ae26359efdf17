#include "slelab/specfun.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace slelab::specfun {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Lanczos approximation, g = 7, 9 coefficients; ~1e-13 relative on (0, 30).
constexpr double kLanczos[9] = {
    0.99999999999980993,  676.5203681218851,    -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,  12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

double lanczos_gamma(double x) {
  if (x < 0.5) {
    return kPi / (std::sin(kPi * x) * lanczos_gamma(1.0 - x));
  }
  x -= 1.0;
  double a = kLanczos[0];
  double t = x + 7.5;
  for (int i = 1; i < 9; ++i) a += kLanczos[i] / (x + i);
  return std::sqrt(2.0 * kPi) * std::pow(t, x + 0.5) * std::exp(-t) * a;
}

bool is_nonpositive_integer(double x, double tol = 1e-12) {
  return x <= tol && std::abs(x - std::round(x)) < tol;
}

double pochhammer(double a, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= a + i;
  return r;
}

// Direct series, valid for |x| < 1; requires c not a non-positive integer
// unless the series terminates first.
double hyp2f1_series(double a, double b, double c, double x) {
  double term = 1.0, sum = 1.0;
  for (int n = 0; n < 20000; ++n) {
    term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * x;
    sum += term;
    if (term == 0.0 || std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

// Connection at x -> 1 for non-integer c-a-b (A&S 15.3.6).
double hyp2f1_reflect_generic(double a, double b, double c, double x) {
  double s = c - a - b;
  double y = 1.0 - x;
  double t1 = gamma_fn(c) * gamma_fn(s) / (gamma_fn(c - a) * gamma_fn(c - b)) *
              hyp2f1_series(a, b, 1.0 - s, y);
  double t2 = gamma_fn(c) * gamma_fn(-s) / (gamma_fn(a) * gamma_fn(b)) * std::pow(y, s) *
              hyp2f1_series(c - a, c - b, 1.0 + s, y);
  return t1 + t2;
}

// Connection at x -> 1 for c = a + b + m, integer m >= 0 (A&S 15.3.10/11).
double hyp2f1_reflect_log(double a, double b, int m, double x) {
  double c = a + b + m;
  double y = 1.0 - x;
  double sum1 = 0.0;
  if (m > 0) {
    double term = 1.0;
    sum1 = term;
    for (int n = 1; n < m; ++n) {
      term *= (a + n - 1) * (b + n - 1) / (static_cast<double>(n) * (n - m)) * y;
      sum1 += term;
    }
    sum1 *= gamma_fn(m) * gamma_fn(c) / (gamma_fn(a + m) * gamma_fn(b + m));
  }
  double logy = std::log(y);
  // DLMF 15.8.10: the log series enters with -(-1)^m.
  double pref = gamma_fn(c) / (gamma_fn(a) * gamma_fn(b)) * std::pow(y, m);
  if (m % 2 == 0) pref = -pref;
  double sum2 = 0.0;
  double coeff = 1.0;  // (a+m)_n (b+m)_n / (n! (n+m)!) * y^n, times n!m!... at n=0
  double fact_nm = 1.0;
  for (int i = 1; i <= m; ++i) fact_nm *= i;  // (0+m)!
  coeff = 1.0 / fact_nm;
  for (int n = 0; n < 20000; ++n) {
    double bracket = logy - digamma(n + 1) - digamma(static_cast<double>(n + m + 1)) +
                     digamma(a + n + m) + digamma(b + n + m);
    double term = coeff * bracket;
    sum2 += term;
    if (n > 2 && std::abs(term) < 1e-17 * (std::abs(sum2) + 1e-300)) break;
    coeff *= (a + m + n) * (b + m + n) / ((n + 1.0) * (n + m + 1.0)) * y;
  }
  return sum1 + pref * sum2;
}

}  // namespace

double gamma_fn(double x) {
  if (is_nonpositive_integer(x)) {
    throw std::domain_error("specfun: gamma pole at non-positive integer");
  }
  return lanczos_gamma(x);
}

double log_gamma(double x) {
  if (x <= 0.0) throw std::domain_error("specfun: log_gamma needs x > 0");
  return std::log(std::abs(lanczos_gamma(x)));
}

double digamma(double x) {
  if (is_nonpositive_integer(x)) {
    throw std::domain_error("specfun: digamma pole at non-positive integer");
  }
  if (x < 0.0) {
    // reflection: psi(1-x) - psi(x) = pi cot(pi x)
    return digamma(1.0 - x) - kPi / std::tan(kPi * x);
  }
  double r = 0.0;
  while (x < 6.0) {
    r -= 1.0 / x;
    x += 1.0;
  }
  // asymptotic series with Bernoulli numbers
  double inv = 1.0 / x, inv2 = inv * inv;
  double s = std::log(x) - 0.5 * inv;
  s -= inv2 * (1.0 / 12 - inv2 * (1.0 / 120 - inv2 * (1.0 / 252 - inv2 * (1.0 / 240 -
       inv2 * (1.0 / 132 - inv2 * (691.0 / 32760 - inv2 * (1.0 / 12)))))));
  return r + s;
}

double hyp2f1(double a, double b, double c, double x) {
  if (!(x >= 0.0 && x < 1.0)) {
    throw std::domain_error("specfun: hyp2f1 requires x in [0, 1)");
  }
  if (is_nonpositive_integer(c)) {
    throw std::domain_error("specfun: hyp2f1 parameter pole (c non-positive integer)");
  }
  if (x == 0.0) return 1.0;
  // Terminating series: a or b a non-positive integer.
  if (is_nonpositive_integer(a) || is_nonpositive_integer(b)) {
    int m = static_cast<int>(std::round(-(is_nonpositive_integer(a) ? a : b)));
    double sum = 0.0;
    for (int n = 0; n <= m; ++n) {
      sum += pochhammer(a, n) * pochhammer(b, n) / pochhammer(c, n) *
             std::pow(x, n) / pochhammer(1.0, n);
    }
    return sum;
  }
  if (x <= 0.5) return hyp2f1_series(a, b, c, x);
  double s = c - a - b;
  double srounded = std::round(s);
  if (std::abs(s - srounded) < 1e-9) {
    int m = static_cast<int>(srounded);
    if (m >= 0) return hyp2f1_reflect_log(a, b, m, x);
    // Euler reflection maps negative integer case to the positive one.
    return std::pow(1.0 - x, s) * hyp2f1_reflect_log(c - a, c - b, -m, x);
  }
  return hyp2f1_reflect_generic(a, b, c, x);
}

double psi_kappa(double x, double kappa) {
  if (!(kappa > 0.0 && kappa <= 8.0 / 3.0)) {
    throw std::domain_error("specfun: psi_kappa needs kappa in (0, 8/3]");
  }
  if (!(x > 0.0 && x < 1.0)) {
    throw std::domain_error("specfun: psi_kappa needs x in (0, 1)");
  }
  double a = 4.0 / kappa;
  double pre = gamma_fn(4.0 / kappa) * gamma_fn(12.0 / kappa - 1.0) /
               (gamma_fn(8.0 / kappa) * gamma_fn(8.0 / kappa - 1.0));
  return pre * std::pow(x, 2.0 / kappa) * hyp2f1(a, 1.0 - a, 2.0 * a, x);
}

double dpsi_kappa_dx(double x, double kappa) {
  double a = 4.0 / kappa;
  double pre = gamma_fn(4.0 / kappa) * gamma_fn(12.0 / kappa - 1.0) /
               (gamma_fn(8.0 / kappa) * gamma_fn(8.0 / kappa - 1.0));
  double f = hyp2f1(a, 1.0 - a, 2.0 * a, x);
  // d/dx 2F1(a,b;c;x) = (ab/c) 2F1(a+1,b+1;c+1;x)
  double df = a * (1.0 - a) / (2.0 * a) * hyp2f1(a + 1.0, 2.0 - a, 2.0 * a + 1.0, x);
  double p = 2.0 / kappa;
  return pre * (p * std::pow(x, p - 1.0) * f + std::pow(x, p) * df);
}

double Weights::h(double p, double q) const {
  double u = p * kappa - 4.0 * q;
  double v = kappa - 4.0;
  return (u * u - v * v) / (16.0 * kappa);
}

Weights weights(double kappa) {
  if (!(kappa > 0.0)) throw std::domain_error("specfun: weights need kappa > 0");
  Weights w;
  w.kappa = kappa;
  w.alpha = (6.0 - kappa) / (2.0 * kappa);
  w.lambda = (8.0 - 3.0 * kappa) * (6.0 - kappa) / (2.0 * kappa);
  return w;
}

std::uint64_t catalan(int n) {
  if (n < 0 || n > 32) throw std::domain_error("specfun: catalan needs n in [0, 32]");
  std::uint64_t c = 1;
  for (int i = 0; i < n; ++i) {
    c = c * 2 * (2 * static_cast<std::uint64_t>(i) + 1) / (static_cast<std::uint64_t>(i) + 2);
  }
  return c;
}

}  // namespace slelab::specfun
