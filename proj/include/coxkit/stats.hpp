#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "coxkit/numeric.hpp"

namespace coxkit {

struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t count = 0;

  // |mean - target| within band standard errors. A zero-variance sample
  // passes only on exact equality.
  bool within(double target, double band = 4.0) const {
    return std::fabs(mean - target) <= band * std_error;
  }
};

// Two-pass mean and standard error over a materialized replicate array.
// Pairwise sums keep the result identical across thread counts.
inline MeanEstimate mean_and_se(std::span<const double> xs) {
  MeanEstimate est;
  est.count = xs.size();
  if (xs.empty()) return est;
  const double n = static_cast<double>(xs.size());
  est.mean = pairwise_sum(xs) / n;
  if (xs.size() < 2) return est;
  std::vector<double> sq(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double d = xs[i] - est.mean;
    sq[i] = d * d;
  }
  const double var = pairwise_sum(std::span<const double>(sq)) / (n - 1.0);
  est.std_error = std::sqrt(var / n);
  return est;
}

namespace detail {

inline double gamma_series_p(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < 2000; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

inline double gamma_cf_q(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 2000; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace detail

// Upper regularized incomplete gamma Q(a, x): series below a+1,
// continued fraction above.
inline double regularized_gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0)
    throw std::invalid_argument("regularized_gamma_q: need a > 0, x >= 0");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - detail::gamma_series_p(a, x);
  return detail::gamma_cf_q(a, x);
}

inline double chi_square_pvalue(double statistic, long dof) {
  if (dof <= 0) return 1.0;
  return regularized_gamma_q(static_cast<double>(dof) / 2.0, statistic / 2.0);
}

struct ChiSquareResult {
  double statistic = 0.0;
  long dof = 0;
  double p_value = 1.0;
  std::size_t cells = 0;

  bool passes(double level) const { return p_value >= level; }
};

// Goodness of fit of observed counts against expected counts over ordered
// cells. Adjacent cells are pooled left to right until each pooled cell
// carries at least min_expected expected hits; a residual pool folds into
// the final cell. Fewer than two pooled cells leaves nothing to test
// (dof 0, p 1).
inline ChiSquareResult chi_square_gof(std::span<const double> observed,
                                      std::span<const double> expected,
                                      double min_expected = 5.0) {
  if (observed.size() != expected.size())
    throw std::invalid_argument("chi_square_gof: size mismatch");
  std::vector<double> obs_pooled;
  std::vector<double> exp_pooled;
  double obs_acc = 0.0;
  double exp_acc = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    obs_acc += observed[i];
    exp_acc += expected[i];
    if (exp_acc >= min_expected) {
      obs_pooled.push_back(obs_acc);
      exp_pooled.push_back(exp_acc);
      obs_acc = 0.0;
      exp_acc = 0.0;
    }
  }
  if (exp_acc > 0.0 || obs_acc > 0.0) {
    if (exp_pooled.empty()) {
      obs_pooled.push_back(obs_acc);
      exp_pooled.push_back(exp_acc);
    } else {
      obs_pooled.back() += obs_acc;
      exp_pooled.back() += exp_acc;
    }
  }
  ChiSquareResult res;
  res.cells = exp_pooled.size();
  if (res.cells < 2) return res;
  for (std::size_t i = 0; i < exp_pooled.size(); ++i) {
    const double d = obs_pooled[i] - exp_pooled[i];
    res.statistic += d * d / exp_pooled[i];
  }
  res.dof = static_cast<long>(res.cells) - 1;
  res.p_value = chi_square_pvalue(res.statistic, res.dof);
  return res;
}

// Two-sample homogeneity test: do two count vectors over the same ordered
// cells come from one distribution? Pools cells until the pooled expected
// count reaches min_expected in both samples.
inline ChiSquareResult chi_square_two_sample(std::span<const double> a,
                                             std::span<const double> b,
                                             double min_expected = 5.0) {
  if (a.size() != b.size())
    throw std::invalid_argument("chi_square_two_sample: size mismatch");
  const double na = pairwise_sum(a);
  const double nb = pairwise_sum(b);
  if (na <= 0.0 || nb <= 0.0)
    throw std::invalid_argument("chi_square_two_sample: empty sample");
  std::vector<double> ap;
  std::vector<double> bp;
  double aa = 0.0;
  double ba = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    aa += a[i];
    ba += b[i];
    const double pooled = (aa + ba) / (na + nb);
    if (na * pooled >= min_expected && nb * pooled >= min_expected) {
      ap.push_back(aa);
      bp.push_back(ba);
      aa = 0.0;
      ba = 0.0;
    }
  }
  if ((aa > 0.0 || ba > 0.0) && !ap.empty()) {
    ap.back() += aa;
    bp.back() += ba;
  }
  ChiSquareResult res;
  res.cells = ap.size();
  if (res.cells < 2) return res;
  for (std::size_t i = 0; i < ap.size(); ++i) {
    const double p_hat = (ap[i] + bp[i]) / (na + nb);
    const double ea = na * p_hat;
    const double eb = nb * p_hat;
    res.statistic += (ap[i] - ea) * (ap[i] - ea) / ea;
    res.statistic += (bp[i] - eb) * (bp[i] - eb) / eb;
  }
  res.dof = static_cast<long>(res.cells) - 1;
  res.p_value = chi_square_pvalue(res.statistic, res.dof);
  return res;
}

// Independence test on an r x c contingency table. The caller bins
// categories so expected counts stay healthy.
inline ChiSquareResult chi_square_independence(
    const std::vector<std::vector<double>>& table) {
  const std::size_t rows = table.size();
  if (rows < 2) throw std::invalid_argument("chi_square_independence: rows");
  const std::size_t cols = table.front().size();
  if (cols < 2) throw std::invalid_argument("chi_square_independence: cols");
  std::vector<double> row_sum(rows, 0.0);
  std::vector<double> col_sum(cols, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    if (table[i].size() != cols)
      throw std::invalid_argument("chi_square_independence: ragged table");
    for (std::size_t j = 0; j < cols; ++j) {
      row_sum[i] += table[i][j];
      col_sum[j] += table[i][j];
      total += table[i][j];
    }
  }
  ChiSquareResult res;
  res.cells = rows * cols;
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const double e = row_sum[i] * col_sum[j] / total;
      if (e > 0.0) {
        const double d = table[i][j] - e;
        res.statistic += d * d / e;
      }
    }
  }
  res.dof = static_cast<long>(rows - 1) * static_cast<long>(cols - 1);
  res.p_value = chi_square_pvalue(res.statistic, res.dof);
  return res;
}

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t count = 0;

  bool passes(double level) const { return p_value >= level; }
};

// Asymptotic Kolmogorov survival function with the Stephens small-sample
// correction folded into lambda by the caller.
inline double kolmogorov_survival(double lambda) {
  if (lambda <= 0.0) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    sum += sign * term;
    sign = -sign;
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

// One-sample Kolmogorov-Smirnov test of a sample against a continuous CDF.
template <typename Cdf>
KsResult ks_test(std::vector<double> sample, Cdf&& cdf) {
  KsResult res;
  res.count = sample.size();
  if (sample.empty()) return res;
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max(d, f - static_cast<double>(i) / n);
    d = std::max(d, static_cast<double>(i + 1) / n - f);
  }
  res.statistic = d;
  const double sqrt_n = std::sqrt(n);
  const double lambda = (sqrt_n + 0.12 + 0.11 / sqrt_n) * d;
  res.p_value = kolmogorov_survival(lambda);
  return res;
}

}  // namespace coxkit
