#ifndef HITTINGDIM_ERRORS_HPP
#define HITTINGDIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hittingdim {

// An orbit step would drop below the guard precision of a fixed-width backend.
// step_index is the 1-based index of the step that could not be taken.
struct PrecisionExhausted : std::runtime_error {
  long long step_index;
  explicit PrecisionExhausted(long long idx)
      : std::runtime_error("precision exhausted at orbit step " + std::to_string(idx)),
        step_index(idx) {}
};

struct InsufficientSample : std::runtime_error {
  explicit InsufficientSample(const std::string& what) : std::runtime_error(what) {}
};

struct InsufficientSignal : std::runtime_error {
  explicit InsufficientSignal(const std::string& what) : std::runtime_error(what) {}
};

struct UndeterminedDecay : std::runtime_error {
  explicit UndeterminedDecay(const std::string& what) : std::runtime_error(what) {}
};

struct LadderNotDecreasing : std::invalid_argument {
  explicit LadderNotDecreasing(const std::string& what) : std::invalid_argument(what) {}
};

struct BranchBudgetExceeded : std::runtime_error {
  explicit BranchBudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hittingdim

#endif
