#pragma once

#include <stdexcept>
#include <string>

namespace coxkit {

// Bad user-facing configuration: malformed config file, or an option
// combination the model cannot honor (e.g. a reciprocal intensity
// multiplier on a prior that admits zero levels). The CLI maps this to
// exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// All importance weights vanished: the prior assigns zero likelihood to
// the observation, so the ratio estimate is undefined.
class DegenerateEstimateError : public std::runtime_error {
 public:
  explicit DegenerateEstimateError(const std::string& what)
      : std::runtime_error(what) {}
};

// A grid-refined computation exhausted its refinement budget before
// reaching the requested tolerance.
class RefinementError : public std::runtime_error {
 public:
  RefinementError(const std::string& what, double last_delta, long cells)
      : std::runtime_error(what + " (last delta " + std::to_string(last_delta) +
                           ", cells " + std::to_string(cells) + ")"),
        last_delta(last_delta),
        cells(cells) {}

  double last_delta;
  long cells;
};

}  // namespace coxkit
