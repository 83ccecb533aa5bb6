// SPDX-License-Identifier: Apache-2.0
#include "ecasurvey/placement.hpp"

#include <cmath>
#include <string>

#include "ecasurvey/error.hpp"

namespace ecasurvey {

void validate(const PlacementConfig& cfg) {
  if (!std::isfinite(cfg.d_b) || cfg.d_b < kMinProbeDistance - 1e-12 ||
      cfg.d_b > kMaxProbeDistance + 1e-12)
    throw InputError("probe distance d_b=" + std::to_string(cfg.d_b) +
                     " m outside the tested envelope [0.10, 1.00]");
  if (!std::isfinite(cfg.d_h) || cfg.d_h <= 0.0)
    throw InputError("probe height d_h=" + std::to_string(cfg.d_h) + " m must be positive");
}

}  // namespace ecasurvey
