// SPDX-License-Identifier: Apache-2.0
/* serialize.hpp - JSON documents exchanged between CLI commands. */
#ifndef ECASURVEY_SERIALIZE_HPP
#define ECASURVEY_SERIALIZE_HPP

#include <json.hpp>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ecasurvey/calib.hpp"
#include "ecasurvey/compare.hpp"
#include "ecasurvey/geostat.hpp"
#include "ecasurvey/terrasim.hpp"

namespace ecasurvey::serialize {

using Json = nlohmann::ordered_json;

Json to_json(const SummaryStats& s);
Json to_json(const calib::RegressionResult& r);
Json to_json(const calib::CalibrationTable& t);
Json to_json(const calib::Recommendation& r);
Json to_json(const terrasim::OscillationReport& r);
Json to_json(const geostat::VariogramModel& m);
Json to_json(const geostat::EmpiricalVariogram& ev);
Json to_json(const compare::PolyFit& p);
Json to_json(const compare::ComparisonReport& r);

/// Throws InputError on missing or mistyped keys.
calib::CalibrationTable calibration_from_json(const Json& j);

using PlacementReports = std::vector<std::pair<PlacementConfig, terrasim::OscillationReport>>;

/// {"terrain": ..., "seed": ..., "reports": [{"d_b_m", "d_h_m", ...report}]}
Json reports_to_json(const std::vector<terrasim::SweepEntry>& entries, const std::string& terrain,
                     std::optional<std::uint64_t> seed);
PlacementReports reports_from_json(const Json& j);

/// Parses text, throwing InputError with `source` in the message.
Json parse(const std::string& text, const std::string& source);
/// Two-space indented dump with a trailing newline.
std::string dump(const Json& j);

}  // namespace ecasurvey::serialize

#endif  // ECASURVEY_SERIALIZE_HPP
