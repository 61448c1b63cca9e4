#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ads/pipeline.hpp"

namespace ads {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct CheckReport {
  std::vector<CheckResult> results;

  bool all_passed() const;
  void print(std::ostream& out) const;
};

/// Property suite on one configuration: discrete complex, element mass
/// oracles, operator structure, the pressure/divergence monitor, the energy
/// law and the exact-solution identities.
///
/// With `negative_control` the monitor check passes only when it reports the
/// violation. With `zero_impedance` the energy check tests conservation
/// instead of dissipation.
CheckReport run_checks(const SimConfig& config, std::ostream* log = nullptr);

}  // namespace ads
