#ifndef HITTINGDIM_VERIFY_HPP
#define HITTINGDIM_VERIFY_HPP

#include <string>
#include <vector>

namespace hittingdim {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Definition-level invariants and oracle crosschecks, all exact or
// deterministic: the hitting-time shift identity, ball-nesting monotonicity
// of tau and of ball measures, censoring consistency, correlation-estimator
// linearity, the bump Lipschitz bound on random pairs, metric axioms, dyadic
// preimage identities, and fixed_point/bitstream hitting agreement.
std::vector<CheckResult> run_verify(std::uint64_t seed = 20260808);

bool all_passed(const std::vector<CheckResult>& checks);

}  // namespace hittingdim

#endif
