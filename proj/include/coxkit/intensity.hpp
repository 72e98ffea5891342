#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "coxkit/errors.hpp"
#include "coxkit/rng.hpp"

namespace coxkit {

// Nonnegative right-continuous piecewise-constant intensity path on
// [0, horizon]. Level j holds on [breakpoints[j], breakpoints[j+1]), the
// last segment closing at the horizon. The cumulative integral is a sum
// of products, exact up to rounding, and inverts in closed form, which is
// what turns the analytic identities downstream into machine-precision
// checks.
//
// Immutable after construction; safe to share across threads.
class IntensityPath {
 public:
  IntensityPath(std::vector<double> breakpoints, std::vector<double> levels,
                double horizon)
      : breakpoints_(std::move(breakpoints)),
        levels_(std::move(levels)),
        horizon_(horizon) {
    if (!(horizon_ > 0.0) || !std::isfinite(horizon_))
      throw std::invalid_argument("IntensityPath: horizon must be positive");
    if (breakpoints_.empty() || breakpoints_.size() != levels_.size())
      throw std::invalid_argument(
          "IntensityPath: need one level per breakpoint");
    if (breakpoints_.front() != 0.0)
      throw std::invalid_argument("IntensityPath: first breakpoint must be 0");
    for (std::size_t j = 0; j + 1 < breakpoints_.size(); ++j)
      if (!(breakpoints_[j] < breakpoints_[j + 1]))
        throw std::invalid_argument(
            "IntensityPath: breakpoints must be strictly increasing");
    if (!(breakpoints_.back() < horizon_))
      throw std::invalid_argument(
          "IntensityPath: breakpoints must lie inside [0, horizon)");
    for (double level : levels_)
      if (!(level >= 0.0) || !std::isfinite(level))
        throw std::invalid_argument(
            "IntensityPath: levels must be finite and nonnegative");
    cum_.resize(breakpoints_.size() + 1);
    cum_[0] = 0.0;
    for (std::size_t j = 0; j < breakpoints_.size(); ++j) {
      const double end =
          (j + 1 < breakpoints_.size()) ? breakpoints_[j + 1] : horizon_;
      cum_[j + 1] = cum_[j] + levels_[j] * (end - breakpoints_[j]);
    }
  }

  static IntensityPath constant(double level, double horizon) {
    return IntensityPath({0.0}, {level}, horizon);
  }

  double horizon() const { return horizon_; }
  std::span<const double> breakpoints() const { return breakpoints_; }
  std::span<const double> levels() const { return levels_; }
  std::size_t segment_count() const { return levels_.size(); }

  // X_t for t in [0, horizon]; the closing endpoint takes the last level.
  double value_at(double t) const {
    check_domain(t);
    return levels_[segment_index(t)];
  }

  // X_t with the last level extended past the horizon.
  double value_extended(double t) const {
    if (t >= horizon_) return levels_.back();
    return value_at(t);
  }

  // Λ(t) = ∫_0^t X_s ds, exact piecewise.
  double cumulative(double t) const {
    check_domain(t);
    const std::size_t j = segment_index(t);
    return cum_[j] + levels_[j] * (t - breakpoints_[j]);
  }

  // Λ extended past the horizon at the last level.
  double cumulative_extended(double t) const {
    if (t >= horizon_) return cum_.back() + levels_.back() * (t - horizon_);
    return cumulative(t);
  }

  // Λ(horizon).
  double total_mass() const { return cum_.back(); }

  // ∫_0^∞ X under the tail-extension rule: +inf unless the extended tail
  // has rate zero.
  double cumulative_to_infinity() const {
    return levels_.back() > 0.0
               ? std::numeric_limits<double>::infinity()
               : cum_.back();
  }

  // Smallest t with Λ(t) >= u, or nothing if u exceeds Λ(horizon). Zero
  // plateaus resolve to the left endpoint of the first touch.
  std::optional<double> inverse_cumulative(double u) const {
    if (!(u >= 0.0))
      throw std::domain_error("inverse_cumulative: u must be nonnegative");
    if (u == 0.0) return 0.0;
    if (u > cum_.back()) return std::nullopt;
    // First j with cum_[j] >= u; the level on segment j-1 is then positive.
    const auto it = std::lower_bound(cum_.begin(), cum_.end(), u);
    const std::size_t j = static_cast<std::size_t>(it - cum_.begin()) - 1;
    const double seg_end =
        (j + 1 < breakpoints_.size()) ? breakpoints_[j + 1] : horizon_;
    const double t = breakpoints_[j] + (u - cum_[j]) / levels_[j];
    return std::min(t, seg_end);
  }

  bool has_zero_level() const {
    return std::any_of(levels_.begin(), levels_.end(),
                       [](double v) { return v == 0.0; });
  }

 private:
  void check_domain(double t) const {
    if (!(t >= 0.0) || !(t <= horizon_))
      throw std::domain_error("IntensityPath: time outside [0, horizon]");
  }

  std::size_t segment_index(double t) const {
    const auto it =
        std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
    return static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
  }

  std::vector<double> breakpoints_;
  std::vector<double> levels_;
  std::vector<double> cum_;  // cum_[j] = Λ(breakpoints[j]); cum_[m] = Λ(horizon)
  double horizon_;
};

// ∫_a^b X_s Y_s ds for two piecewise-constant paths over a shared horizon,
// exact on the merged breakpoint grid.
inline double cumulative_product(const IntensityPath& x,
                                 const IntensityPath& y, double from,
                                 double to) {
  if (x.horizon() != y.horizon())
    throw std::invalid_argument("cumulative_product: horizon mismatch");
  if (!(from >= 0.0) || !(to <= x.horizon()) || !(from <= to))
    throw std::domain_error("cumulative_product: bad interval");
  std::vector<double> grid;
  grid.push_back(from);
  for (double b : x.breakpoints())
    if (b > from && b < to) grid.push_back(b);
  for (double b : y.breakpoints())
    if (b > from && b < to) grid.push_back(b);
  grid.push_back(to);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i)
    acc += x.value_at(grid[i]) * y.value_at(grid[i]) *
           (grid[i + 1] - grid[i]);
  return acc;
}

// Law of the positive i.i.d. jump sizes of a compound Poisson intensity.
struct JumpLaw {
  enum class Kind { Exponential, Fixed, DiscreteTable };

  Kind kind = Kind::Fixed;
  double mean = 0.0;                // Exponential
  double value = 0.0;               // Fixed
  std::vector<double> values;      // DiscreteTable
  std::vector<double> probs;

  static JumpLaw exponential(double mean) {
    JumpLaw law;
    law.kind = Kind::Exponential;
    law.mean = mean;
    law.validate();
    return law;
  }

  static JumpLaw fixed(double value) {
    JumpLaw law;
    law.kind = Kind::Fixed;
    law.value = value;
    law.validate();
    return law;
  }

  static JumpLaw discrete(std::vector<double> values,
                          std::vector<double> probs) {
    JumpLaw law;
    law.kind = Kind::DiscreteTable;
    law.values = std::move(values);
    law.probs = std::move(probs);
    law.validate();
    return law;
  }

  void validate() const {
    switch (kind) {
      case Kind::Exponential:
        if (!(mean > 0.0) || !std::isfinite(mean))
          throw ConfigError("jump law: exponential mean must be positive");
        break;
      case Kind::Fixed:
        if (!(value > 0.0) || !std::isfinite(value))
          throw ConfigError("jump law: fixed jump must be positive");
        break;
      case Kind::DiscreteTable: {
        if (values.empty() || values.size() != probs.size())
          throw ConfigError("jump law: values/probs size mismatch");
        double total = 0.0;
        for (double v : values)
          if (!(v > 0.0) || !std::isfinite(v))
            throw ConfigError("jump law: jumps must be positive");
        for (double p : probs) {
          if (!(p >= 0.0))
            throw ConfigError("jump law: probabilities must be nonnegative");
          total += p;
        }
        if (std::fabs(total - 1.0) > 1e-12)
          throw ConfigError("jump law: probabilities must sum to 1");
        break;
      }
    }
  }

  double sample(RngStream& rng) const {
    switch (kind) {
      case Kind::Exponential:
        return mean * rng.exponential();
      case Kind::Fixed:
        return value;
      case Kind::DiscreteTable: {
        const double u = rng.uniform01();
        double acc = 0.0;
        for (std::size_t i = 0; i < values.size(); ++i) {
          acc += probs[i];
          if (u <= acc) return values[i];
        }
        return values.back();
      }
    }
    return value;
  }

  bool has_finite_support() const { return kind != Kind::Exponential; }
};

// Compound Poisson intensity: X_t = x0 + sum of jumps arriving by t, the
// jumps driven by an independent homogeneous Poisson process.
struct CompoundPoissonIntensitySpec {
  double x0 = 1.0;
  double jump_rate = 1.0;
  JumpLaw jump_law;

  void validate() const {
    if (!(x0 > 0.0) || !std::isfinite(x0))
      throw ConfigError("compound poisson: x0 must be positive");
    if (!(jump_rate > 0.0) || !std::isfinite(jump_rate))
      throw ConfigError("compound poisson: jump_rate must be positive");
    jump_law.validate();
  }

  // Nondecreasing step path through jump times drawn on [0, horizon).
  IntensityPath sample(double horizon, RngStream& rng) const {
    std::vector<double> breakpoints{0.0};
    std::vector<double> levels{x0};
    double t = rng.exponential() / jump_rate;
    while (t < horizon) {
      if (t <= breakpoints.back())
        t = std::nextafter(breakpoints.back(), horizon);
      if (!(t < horizon)) break;
      breakpoints.push_back(t);
      levels.push_back(levels.back() + jump_law.sample(rng));
      t += rng.exponential() / jump_rate;
    }
    return IntensityPath(std::move(breakpoints), std::move(levels), horizon);
  }

  // Step path through known jump times with given jump sizes.
  IntensityPath path_through(std::span<const double> jump_times,
                             std::span<const double> jump_sizes,
                             double horizon) const {
    if (jump_times.size() != jump_sizes.size())
      throw std::invalid_argument("path_through: times/sizes mismatch");
    std::vector<double> breakpoints{0.0};
    std::vector<double> levels{x0};
    for (std::size_t k = 0; k < jump_times.size(); ++k) {
      breakpoints.push_back(jump_times[k]);
      levels.push_back(levels.back() + jump_sizes[k]);
    }
    return IntensityPath(std::move(breakpoints), std::move(levels), horizon);
  }
};

// Distribution of a constant intensity level.
struct LevelLaw {
  enum class Kind { Discrete, Uniform };

  Kind kind = Kind::Discrete;
  std::vector<double> values;
  std::vector<double> probs;
  double lo = 0.0;
  double hi = 0.0;

  static LevelLaw discrete(std::vector<double> values,
                           std::vector<double> probs) {
    LevelLaw law;
    law.kind = Kind::Discrete;
    law.values = std::move(values);
    law.probs = std::move(probs);
    law.validate();
    return law;
  }

  static LevelLaw uniform(double lo, double hi) {
    LevelLaw law;
    law.kind = Kind::Uniform;
    law.lo = lo;
    law.hi = hi;
    law.validate();
    return law;
  }

  void validate() const {
    if (kind == Kind::Discrete) {
      if (values.empty() || values.size() != probs.size())
        throw ConfigError("level law: values/probs size mismatch");
      double total = 0.0;
      for (double v : values)
        if (!(v >= 0.0) || !std::isfinite(v))
          throw ConfigError("level law: levels must be nonnegative");
      for (double p : probs) {
        if (!(p >= 0.0))
          throw ConfigError("level law: probabilities must be nonnegative");
        total += p;
      }
      if (std::fabs(total - 1.0) > 1e-12)
        throw ConfigError("level law: probabilities must sum to 1");
    } else {
      if (!(lo >= 0.0) || !(hi > lo) || !std::isfinite(hi))
        throw ConfigError("level law: need 0 <= lo < hi");
    }
  }

  double sample(RngStream& rng) const {
    if (kind == Kind::Discrete) {
      const double u = rng.uniform01();
      double acc = 0.0;
      for (std::size_t i = 0; i < values.size(); ++i) {
        acc += probs[i];
        if (u <= acc) return values[i];
      }
      return values.back();
    }
    return lo + (hi - lo) * rng.uniform01();
  }

  bool admits_zero() const {
    if (kind == Kind::Discrete) {
      for (std::size_t i = 0; i < values.size(); ++i)
        if (values[i] == 0.0 && probs[i] > 0.0) return true;
      return false;
    }
    return lo == 0.0;
  }
};

// Prior over intensity paths: the time-0 information about X.
class PriorSpec {
 public:
  enum class Kind { Fixed, RandomLevel, CompoundPoisson };

  static PriorSpec fixed(IntensityPath path) {
    PriorSpec prior;
    prior.kind_ = Kind::Fixed;
    prior.horizon_ = path.horizon();
    prior.fixed_ = std::move(path);
    return prior;
  }

  static PriorSpec random_level(LevelLaw law, double horizon) {
    law.validate();
    if (!(horizon > 0.0))
      throw ConfigError("prior: horizon must be positive");
    PriorSpec prior;
    prior.kind_ = Kind::RandomLevel;
    prior.horizon_ = horizon;
    prior.level_law_ = std::move(law);
    return prior;
  }

  static PriorSpec compound_poisson(CompoundPoissonIntensitySpec spec,
                                    double horizon) {
    spec.validate();
    if (!(horizon > 0.0))
      throw ConfigError("prior: horizon must be positive");
    PriorSpec prior;
    prior.kind_ = Kind::CompoundPoisson;
    prior.horizon_ = horizon;
    prior.compound_ = std::move(spec);
    return prior;
  }

  Kind kind() const { return kind_; }
  double horizon() const { return horizon_; }

  const IntensityPath& fixed_path() const { return *fixed_; }
  const LevelLaw& level_law() const { return *level_law_; }
  const CompoundPoissonIntensitySpec& compound_spec() const {
    return *compound_;
  }

  // Whether a drawn path can carry a zero level; operations needing 1/X
  // refuse such priors.
  bool admits_zero_level() const {
    switch (kind_) {
      case Kind::Fixed:
        return fixed_->has_zero_level();
      case Kind::RandomLevel:
        return level_law_->admits_zero();
      case Kind::CompoundPoisson:
        return false;
    }
    return false;
  }

 private:
  PriorSpec() = default;

  Kind kind_ = Kind::Fixed;
  double horizon_ = 1.0;
  std::optional<IntensityPath> fixed_;
  std::optional<LevelLaw> level_law_;
  std::optional<CompoundPoissonIntensitySpec> compound_;
};

// Draws one intensity path. Deterministic given the stream.
inline IntensityPath sample_prior(const PriorSpec& prior, RngStream& rng) {
  switch (prior.kind()) {
    case PriorSpec::Kind::Fixed:
      return prior.fixed_path();
    case PriorSpec::Kind::RandomLevel:
      return IntensityPath::constant(prior.level_law().sample(rng),
                                     prior.horizon());
    case PriorSpec::Kind::CompoundPoisson:
      return prior.compound_spec().sample(prior.horizon(), rng);
  }
  return prior.fixed_path();
}

}  // namespace coxkit
