#include "slelab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "slelab/specfun.hpp"

namespace slelab::stats {

Summary summarize(const std::vector<double>& xs) {
  Summary s;
  s.n = xs.size();
  if (xs.empty()) return s;
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  if (xs.size() > 1) var /= static_cast<double>(xs.size() - 1);
  s.mean = mean;
  s.stderr_mean = std::sqrt(var / static_cast<double>(xs.size()));
  return s;
}

double kolmogorov_sf(double lambda) {
  if (lambda <= 0.0) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 200; ++k) {
    double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-16) break;
  }
  return std::min(1.0, std::max(0.0, 2.0 * sum));
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("stats: empty KS sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  while (i < a.size() && j < b.size()) {
    double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  KsResult r;
  r.statistic = d;
  double ne = std::sqrt(na * nb / (na + nb));
  // Stephens' small-sample correction of the asymptotic law.
  r.p_value = kolmogorov_sf((ne + 0.12 + 0.11 / ne) * d);
  return r;
}

namespace {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double max_component_ks(const std::vector<std::vector<double>>& a,
                        const std::vector<std::vector<double>>& b) {
  double d = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) {
    d = std::max(d, ks_two_sample(a[c], b[c]).statistic);
  }
  return d;
}

}  // namespace

KsResult ks_two_sample_vector(const std::vector<std::vector<double>>& a,
                              const std::vector<std::vector<double>>& b,
                              int permutations, std::uint64_t seed) {
  if (a.empty() || a.size() != b.size()) {
    throw std::invalid_argument("stats: mismatched observable components");
  }
  KsResult out;
  out.statistic = max_component_ks(a, b);

  const std::size_t na = a[0].size(), nb = b[0].size(), n = na + nb;
  const std::size_t ncomp = a.size();
  // Pooled rows, shuffled jointly so the components stay aligned.
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  auto row = [&](std::size_t i, std::size_t c) {
    return i < na ? a[c][i] : b[c][i - na];
  };
  int geq = 0;
  std::uint64_t state = seed;
  std::vector<std::vector<double>> pa(ncomp), pb(ncomp);
  for (int perm = 0; perm < permutations; ++perm) {
    for (std::size_t i = n - 1; i > 0; --i) {
      state = mix64(state ^ (static_cast<std::uint64_t>(perm) << 32 ^ i));
      std::size_t j = state % (i + 1);
      std::swap(order[i], order[j]);
    }
    for (std::size_t c = 0; c < ncomp; ++c) {
      pa[c].clear();
      pb[c].clear();
      for (std::size_t i = 0; i < n; ++i) {
        (i < na ? pa[c] : pb[c]).push_back(row(order[i], c));
      }
    }
    if (max_component_ks(pa, pb) >= out.statistic) ++geq;
  }
  out.p_value = (geq + 1.0) / (permutations + 1.0);
  return out;
}

double chi_square_sf(double x, int k) {
  if (x <= 0.0) return 1.0;
  // Regularized incomplete gamma Q(k/2, x/2) by series / continued fraction.
  double a = 0.5 * k, z = 0.5 * x;
  double lg = specfun::log_gamma(a);
  if (z < a + 1.0) {
    double sum = 1.0 / a, term = sum;
    for (int n = 1; n < 500; ++n) {
      term *= z / (a + n);
      sum += term;
      if (std::abs(term) < 1e-16 * std::abs(sum)) break;
    }
    double p = sum * std::exp(-z + a * std::log(z) - lg);
    return std::min(1.0, std::max(0.0, 1.0 - p));
  }
  double b = z + 1.0 - a, c = 1e300, d = 1.0 / b, h = d;
  for (int i = 1; i < 500; ++i) {
    double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < 1e-300) d = 1e-300;
    c = b + an / c;
    if (std::abs(c) < 1e-300) c = 1e-300;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-15) break;
  }
  double q = std::exp(-z + a * std::log(z) - lg) * h;
  return std::min(1.0, std::max(0.0, q));
}

}  // namespace slelab::stats
