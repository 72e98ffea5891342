#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "coxkit/intensity.hpp"
#include "coxkit/numeric.hpp"
#include "coxkit/simulation.hpp"

namespace coxkit {

// Conditional density of the next-but-d arrival time seen from time r,
// for a known intensity path: a density on (r, ∞) plus an atom at ∞.
//
// With d = n - N_r and L(t) = ∫_r^t X:
//
//   eval(t) = X_t e^{-L(t)} L(t)^d / d!        (zero when N_r > n)
//   atom    = e^{-L(∞)} Σ_{k<=d} L(∞)^k / k!
//
// under the conventions 0^0 = 1 and e^{-∞}·∞ = 0. Beyond the horizon the
// path's last level is extended, so L(∞) is either finite (rate-zero
// tail) or +∞, in which case the atom vanishes.
//
// All factors are assembled in log space; on each constant-rate piece the
// integrand integrates in closed form through the Poisson tail sum
// G_d(x) = e^{-x} Σ_{k<=d} x^k / k!, whose derivative in x is
// -e^{-x} x^d / d!.
class DensityKernel {
 public:
  DensityKernel(IntensityPath path, long jump_index, double origin_time,
                long observed_count)
      : path_(std::move(path)),
        jump_index_(jump_index),
        origin_(origin_time),
        observed_count_(observed_count) {
    if (!(origin_ >= 0.0) || !(origin_ <= path_.horizon()))
      throw std::domain_error("DensityKernel: origin outside [0, horizon]");
    if (jump_index_ < 0 || observed_count_ < 0)
      throw std::domain_error("DensityKernel: counts must be nonnegative");
    vanishes_ = observed_count_ > jump_index_;
    degree_ = vanishes_ ? 0 : jump_index_ - observed_count_;
    cum_origin_ = path_.cumulative(origin_);
  }

  long jump_index() const { return jump_index_; }
  double origin_time() const { return origin_; }
  long observed_count() const { return observed_count_; }
  const IntensityPath& path() const { return path_; }

  // Density value at t > origin; the path's last level extends past the
  // horizon.
  double eval(double t) const {
    if (vanishes_ || t <= origin_) return 0.0;
    const double x = path_.value_extended(t);
    if (x == 0.0) return 0.0;
    const double load = path_.cumulative_extended(t) - cum_origin_;
    if (load == 0.0 && degree_ > 0) return 0.0;
    const double power_term =
        degree_ == 0 ? 0.0 : degree_ * std::log(load);
    return std::exp(std::log(x) - load + power_term -
                    std::lgamma(static_cast<double>(degree_) + 1.0));
  }

  // P[no density mass ever]: the t = ∞ atom.
  double atom_at_infinity() const {
    if (vanishes_) return 0.0;
    return poisson_cdf(degree_, total_load_to_infinity());
  }

  // ∫_a^b eval, summed piece by piece over the path's constant segments
  // (closed form on each piece, no quadrature). b may exceed the horizon;
  // the extended tail is one more closed-form piece.
  double integrate(double a, double b) const {
    if (vanishes_) return 0.0;
    a = std::max(a, origin_);
    if (!(b > a)) return 0.0;
    std::vector<double> grid;
    grid.push_back(a);
    const double cap = std::min(b, path_.horizon());
    for (double bp : path_.breakpoints())
      if (bp > a && bp < cap) grid.push_back(bp);
    if (cap > a) grid.push_back(cap);
    if (b > path_.horizon()) grid.push_back(b);
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
      const double lo = path_.cumulative_extended(grid[i]) - cum_origin_;
      const double hi = path_.cumulative_extended(grid[i + 1]) - cum_origin_;
      if (hi > lo)
        acc += poisson_cdf(degree_, lo) - poisson_cdf(degree_, hi);
    }
    return acc;
  }

  // ∫_a^∞ eval: finite pieces up to the horizon plus the closed-form
  // extended tail (zero when the tail rate is zero).
  double integrate_to_infinity(double a) const {
    if (vanishes_) return 0.0;
    a = std::max(a, origin_);
    double acc = 0.0;
    if (a < path_.horizon()) acc += integrate(a, path_.horizon());
    if (path_.levels().back() > 0.0) {
      const double start = std::max(a, path_.horizon());
      acc += poisson_cdf(degree_,
                         path_.cumulative_extended(start) - cum_origin_);
    }
    return acc;
  }

  // Remaining mass strictly after t, density and atom together:
  // G_d(L(t)). Mathematically equals 1 - ∫_origin^t eval on the
  // non-vanishing branch.
  double mass_after(double t) const {
    if (vanishes_) return 0.0;
    t = std::max(t, origin_);
    return poisson_cdf(degree_, path_.cumulative_extended(t) - cum_origin_);
  }

  // ∫ eval over (origin, ∞) plus the atom; 1 on the non-vanishing branch.
  double total_mass() const {
    if (vanishes_) return 0.0;
    return integrate_to_infinity(origin_) + atom_at_infinity();
  }

 private:
  double total_load_to_infinity() const {
    return path_.cumulative_to_infinity() - cum_origin_;
  }

  IntensityPath path_;
  long jump_index_;
  double origin_;
  long observed_count_;
  long degree_;
  bool vanishes_;
  double cum_origin_;
};

// Kernel for arrival n+1 seen from time r with N_r arrivals so far.
inline DensityKernel psi(const IntensityPath& path, long n, double r,
                         long observed_count) {
  return DensityKernel(path, n, r, observed_count);
}

// Kernel for the next arrival seen from the n-th arrival time: the
// degree-zero specialization of psi at r = T_n, N_r = n.
inline DensityKernel phi(const IntensityPath& path, double nth_arrival) {
  return DensityKernel(path, 0, nth_arrival, 0);
}

// Intensity recovered from the per-jump kernels: with n = N_t the active
// term is
//
//   λ_t = Φ^n(t) / (1 - ∫_{T_n}^t Φ^n)
//
// the denominator taken as the kernel's remaining mass after t. For a
// conditional Poisson path this must reproduce X_t exactly.
inline double chou_meyer_intensity(const IntensityPath& path,
                                   const PointPattern& pattern, double t) {
  if (!(t >= 0.0) || !(t <= path.horizon()))
    throw std::domain_error("chou_meyer_intensity: t outside [0, horizon]");
  const long n = pattern.count(t);
  const double last_arrival = pattern.arrival_or_infinity(
      static_cast<std::size_t>(n));
  const DensityKernel kernel = phi(path, last_arrival);
  const double denominator = kernel.mass_after(t);
  if (!(denominator > 0.0))
    throw std::logic_error(
        "chou_meyer_intensity: nonpositive survival mass (kernel bug)");
  return kernel.eval(t) / denominator;
}

}  // namespace coxkit
