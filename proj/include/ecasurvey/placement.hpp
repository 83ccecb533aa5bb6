// SPDX-License-Identifier: Apache-2.0
#ifndef ECASURVEY_PLACEMENT_HPP
#define ECASURVEY_PLACEMENT_HPP

namespace ecasurvey {

/// Probe placement on the robot platform, metres.
struct PlacementConfig {
  double d_b = 0.60;  ///< probe distance from the robot body, tested in [0.10, 1.00]
  double d_h = 0.06;  ///< probe height above ground

  friend bool operator==(const PlacementConfig&, const PlacementConfig&) = default;
};

inline constexpr double kMinProbeDistance = 0.10;
inline constexpr double kMaxProbeDistance = 1.00;

/// Throws InputError when d_b is outside the tested envelope or d_h <= 0.
void validate(const PlacementConfig& cfg);

}  // namespace ecasurvey

#endif  // ECASURVEY_PLACEMENT_HPP
