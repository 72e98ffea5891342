#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace coxkit {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kPosInf = std::numeric_limits<double>::infinity();

// Pairwise (cascade) summation. Fixed association order, so the result is
// a pure function of the input sequence: reductions over replicate arrays
// come out bit-identical no matter how many threads filled the array.
inline double pairwise_sum(std::span<const double> xs) {
  const std::size_t n = xs.size();
  if (n <= 16) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

inline double pairwise_sum(const std::vector<double>& xs) {
  return pairwise_sum(std::span<const double>(xs));
}

// log(sum(exp(xs))) guarded against overflow; -inf entries drop out.
inline double log_sum_exp(std::span<const double> xs) {
  double m = kNegInf;
  for (double x : xs)
    if (x > m) m = x;
  if (m == kNegInf) return kNegInf;
  double acc = 0.0;
  for (double x : xs) acc += std::exp(x - m);
  return m + std::log(acc);
}

// log of the Poisson pmf at n with the given mean, honoring 0^0 = 1.
inline double poisson_log_pmf(long n, double mean) {
  if (mean == 0.0) return n == 0 ? 0.0 : kNegInf;
  return -mean + static_cast<double>(n) * std::log(mean) -
         std::lgamma(static_cast<double>(n) + 1.0);
}

inline double poisson_pmf(long n, double mean) {
  return std::exp(poisson_log_pmf(n, mean));
}

// P[K <= n] for K ~ Poisson(mean): e^{-mean} * sum_{k<=n} mean^k / k!,
// accumulated in log space. mean = +inf collapses to 0 (the convention
// e^{-inf} * polynomial = 0).
inline double poisson_cdf(long n, double mean) {
  if (n < 0) return 0.0;
  if (mean == 0.0) return 1.0;
  if (std::isinf(mean)) return 0.0;
  const double log_mean = std::log(mean);
  // Running logsumexp over k log(mean) - lgamma(k+1), k = 0..n.
  double m = 0.0;  // k = 0 term is 0 in log space
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(n) + 1);
  terms.push_back(0.0);
  double t = 0.0;
  for (long k = 1; k <= n; ++k) {
    t += log_mean - std::log(static_cast<double>(k));
    terms.push_back(t);
    if (t > m) m = t;
  }
  double acc = 0.0;
  for (double v : terms) acc += std::exp(v - m);
  const double log_cdf = m + std::log(acc) - mean;
  return log_cdf >= 0.0 ? 1.0 : std::exp(log_cdf);
}

inline double relative_error(double value, double reference) {
  const double scale = std::fabs(reference);
  if (scale == 0.0) return std::fabs(value);
  return std::fabs(value - reference) / scale;
}

}  // namespace coxkit
