#pragma once

// Estimator summaries and the two-sample Kolmogorov-Smirnov test.

#include <cstdint>
#include <vector>

namespace slelab::stats {

struct Summary {
  double mean = 0.0;
  double stderr_mean = 0.0;
  std::size_t n = 0;
};

// Fixed-order accumulation; deterministic for a given input order.
Summary summarize(const std::vector<double>& xs);

double kolmogorov_sf(double lambda);  // Q(lambda) = 2 sum (-1)^{k-1} e^{-2 k^2 lambda^2}

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

// Vector observables: statistic = max over components of the two-sample KS
// distance; p-value by a deterministic permutation test (exact under the
// null up to Monte Carlo resolution).
KsResult ks_two_sample_vector(const std::vector<std::vector<double>>& a,
                              const std::vector<std::vector<double>>& b,
                              int permutations = 400, std::uint64_t seed = 0x5eed);

// Chi-square upper tail for k degrees of freedom (series/continued fraction).
double chi_square_sf(double x, int k);

}  // namespace slelab::stats
