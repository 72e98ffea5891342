#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "coxkit/intensity.hpp"
#include "coxkit/numeric.hpp"
#include "coxkit/rng.hpp"

namespace coxkit {

// Simple point process realization: strictly increasing arrival times in
// (0, horizon], with T_0 = 0 implicit. count(t) is the counting function.
class PointPattern {
 public:
  PointPattern(std::vector<double> arrivals, double horizon)
      : arrivals_(std::move(arrivals)), horizon_(horizon) {
    if (!(horizon_ > 0.0) || !std::isfinite(horizon_))
      throw std::invalid_argument("PointPattern: horizon must be positive");
    double prev = 0.0;
    for (double t : arrivals_) {
      if (!(t > prev))
        throw std::invalid_argument(
            "PointPattern: arrivals must be strictly increasing and > 0");
      if (!(t <= horizon_))
        throw std::invalid_argument(
            "PointPattern: arrivals must lie in (0, horizon]");
      prev = t;
    }
  }

  static PointPattern empty(double horizon) { return {{}, horizon}; }

  double horizon() const { return horizon_; }
  std::span<const double> arrivals() const { return arrivals_; }
  std::size_t size() const { return arrivals_.size(); }

  // N_t = #{k : T_k <= t}.
  long count(double t) const {
    return static_cast<long>(
        std::upper_bound(arrivals_.begin(), arrivals_.end(), t) -
        arrivals_.begin());
  }

  // T_n (1-based); T_0 = 0, and +inf past the last arrival.
  double arrival_or_infinity(std::size_t n) const {
    if (n == 0) return 0.0;
    if (n > arrivals_.size()) return std::numeric_limits<double>::infinity();
    return arrivals_[n - 1];
  }

  // Arrivals in [0, r]: the pattern as seen at time r.
  PointPattern restricted_to(double r) const {
    std::vector<double> prefix;
    for (double t : arrivals_) {
      if (t > r) break;
      prefix.push_back(t);
    }
    return PointPattern(std::move(prefix), horizon_);
  }

 private:
  std::vector<double> arrivals_;
  double horizon_;
};

// Maps unit-rate Poisson arrival times through the inverse cumulative
// intensity. Split out so tests can drive it with a fixed u-sequence.
inline PointPattern timechange_from_unit_arrivals(
    const IntensityPath& path, std::span<const double> unit_times) {
  std::vector<double> arrivals;
  const double mass = path.total_mass();
  for (double u : unit_times) {
    if (!(u > 0.0))
      throw std::invalid_argument(
          "timechange_from_unit_arrivals: unit times must be positive");
    if (u > mass) break;
    arrivals.push_back(*path.inverse_cumulative(u));
  }
  return PointPattern(std::move(arrivals), path.horizon());
}

// Conditional Poisson sampler by time change: a unit-rate Poisson process
// run to Λ(horizon), pushed through Λ^{-1}.
inline PointPattern sample_cox_timechange(const IntensityPath& path,
                                          RngStream& rng) {
  std::vector<double> arrivals;
  const double mass = path.total_mass();
  double u = rng.exponential();
  while (u <= mass) {
    arrivals.push_back(*path.inverse_cumulative(u));
    u += rng.exponential();
  }
  return PointPattern(std::move(arrivals), path.horizon());
}

// Conditional Poisson sampler by sequential conditional draws: the next
// arrival solves 1 - exp(-(Λ(t) - Λ(T_n))) = U, the inverse CDF of the
// next-arrival kernel given the past. Stops once the draw lands past the
// horizon (equivalently, in the never-again atom of the kernel).
inline PointPattern sample_cox_sequential(const IntensityPath& path,
                                          RngStream& rng) {
  std::vector<double> arrivals;
  const double mass = path.total_mass();
  double lambda_at_prev = 0.0;
  for (;;) {
    const double target = lambda_at_prev + rng.exponential();
    if (target > mass) break;
    const double next = *path.inverse_cumulative(target);
    arrivals.push_back(next);
    lambda_at_prev = path.cumulative(next);
  }
  return PointPattern(std::move(arrivals), path.horizon());
}

// P[N_t - N_r = n | the path]: Poisson pmf with mean Λ(t) - Λ(r).
inline double increment_pmf(const IntensityPath& path, double r, double t,
                            long n) {
  if (!(0.0 <= r) || !(r <= t) || !(t <= path.horizon()) || n < 0)
    throw std::domain_error("increment_pmf: need 0 <= r <= t <= horizon, n >= 0");
  return poisson_pmf(n, path.cumulative(t) - path.cumulative(r));
}

}  // namespace coxkit
