// SPDX-License-Identifier: Apache-2.0
#include "ecasurvey/serialize.hpp"

#include <cmath>

#include "ecasurvey/error.hpp"

namespace ecasurvey::serialize {

namespace {

// NaN and infinities have no JSON spelling; they become null.
Json num(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw InputError(where + ": missing key '" + key + "'");
  return j.at(key);
}

double get_double(const Json& j, const char* key, const std::string& where) {
  const Json& v = field(j, key, where);
  if (!v.is_number()) throw InputError(where + ": key '" + key + "' must be a number");
  return v.get<double>();
}

std::size_t get_size(const Json& j, const char* key, const std::string& where) {
  const Json& v = field(j, key, where);
  if (!v.is_number_unsigned()) throw InputError(where + ": key '" + key + "' must be a non-negative integer");
  return v.get<std::size_t>();
}

SummaryStats stats_from(const Json& j, const std::string& where) {
  return {get_double(j, "mean", where), get_double(j, "sigma", where), get_size(j, "n", where)};
}

}  // namespace

Json to_json(const SummaryStats& s) { return {{"mean", num(s.mean)}, {"sigma", num(s.sigma)}, {"n", s.n}}; }

Json to_json(const calib::RegressionResult& r) {
  return {{"slope", num(r.slope)}, {"intercept", num(r.intercept)}, {"pcc", num(r.pcc)}, {"n", r.n}};
}

Json to_json(const calib::CalibrationTable& t) {
  Json rows = Json::array();
  for (const auto& [d_b, e] : t.per_distance)
    rows.push_back({{"d_b_m", d_b},
                    {"stats", to_json(e.stats)},
                    {"regression", to_json(e.regression)},
                    {"error_pct", num(e.error_pct)}});
  return {{"baseline", to_json(t.baseline)}, {"per_distance", rows}};
}

calib::CalibrationTable calibration_from_json(const Json& j) {
  calib::CalibrationTable t;
  t.baseline = stats_from(field(j, "baseline", "calibration"), "calibration.baseline");
  const Json& rows = field(j, "per_distance", "calibration");
  if (!rows.is_array()) throw InputError("calibration: per_distance must be an array");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string where = "calibration.per_distance[" + std::to_string(i) + "]";
    const Json& row = rows[i];
    calib::CalibrationEntry e;
    e.stats = stats_from(field(row, "stats", where), where + ".stats");
    const Json& reg = field(row, "regression", where);
    e.regression.slope = get_double(reg, "slope", where);
    e.regression.intercept = get_double(reg, "intercept", where);
    e.regression.pcc = get_double(reg, "pcc", where);
    e.regression.n = get_size(reg, "n", where);
    if (row.contains("error_pct") && row.at("error_pct").is_number())
      e.error_pct = row.at("error_pct").get<double>();
    const double d_b = get_double(row, "d_b_m", where);
    if (!t.per_distance.emplace(d_b, e).second)
      throw InputError(where + ": duplicate distance " + std::to_string(d_b));
  }
  if (t.per_distance.empty()) throw InputError("calibration: per_distance is empty");
  return t;
}

Json to_json(const calib::Recommendation& r) {
  Json gates = Json::array();
  for (const auto& g : r.gates)
    gates.push_back({{"d_b_m", g.d_b},
                     {"pcc", num(g.pcc)},
                     {"mean_step", num(g.mean_step)},
                     {"pcc_ok", g.pcc_ok},
                     {"within_convergence", g.within_convergence}});
  return {{"d_b_m", r.placement.d_b},
          {"d_h_m", r.placement.d_h},
          {"pcc", num(r.pcc)},
          {"osc_sigma_cm", num(r.osc_sigma)},
          {"convergence_distance_m", num(r.convergence_distance)},
          {"gates", gates}};
}

Json to_json(const terrasim::OscillationReport& r) {
  return {{"mean_dev_cm", num(r.mean_dev)},         {"sigma_dev_cm", num(r.sigma_dev)},
          {"variance_dev_cm2", num(r.variance_dev)}, {"min_clearance_cm", num(r.min_clearance)},
          {"collision_count", r.collision_count},    {"n_steps", r.n_steps}};
}

Json reports_to_json(const std::vector<terrasim::SweepEntry>& entries, const std::string& terrain,
                     std::optional<std::uint64_t> seed) {
  Json reports = Json::array();
  for (const auto& e : entries) {
    Json row{{"d_b_m", e.cfg.d_b}, {"d_h_m", e.cfg.d_h}};
    row.update(to_json(e.report));
    reports.push_back(std::move(row));
  }
  Json j{{"terrain", terrain}};
  j["seed"] = seed ? Json(*seed) : Json(nullptr);
  j["reports"] = std::move(reports);
  return j;
}

PlacementReports reports_from_json(const Json& j) {
  const Json& rows = field(j, "reports", "reports");
  if (!rows.is_array()) throw InputError("reports: 'reports' must be an array");
  PlacementReports out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string where = "reports[" + std::to_string(i) + "]";
    const Json& row = rows[i];
    PlacementConfig cfg{get_double(row, "d_b_m", where), get_double(row, "d_h_m", where)};
    terrasim::OscillationReport r;
    r.mean_dev = get_double(row, "mean_dev_cm", where);
    r.sigma_dev = get_double(row, "sigma_dev_cm", where);
    r.variance_dev = get_double(row, "variance_dev_cm2", where);
    r.min_clearance = get_double(row, "min_clearance_cm", where);
    r.collision_count = get_size(row, "collision_count", where);
    r.n_steps = get_size(row, "n_steps", where);
    out.emplace_back(cfg, r);
  }
  return out;
}

Json to_json(const geostat::VariogramModel& m) {
  return {{"nugget", num(m.nugget)},
          {"partial_sill", num(m.partial_sill)},
          {"sill", num(m.sill())},
          {"range_m", num(m.range)},
          {"degenerate", m.degenerate}};
}

Json to_json(const geostat::EmpiricalVariogram& ev) {
  Json bins = Json::array();
  for (const auto& b : ev.bins)
    bins.push_back({{"lag_m", num(b.lag_center)}, {"gamma", num(b.gamma)}, {"pairs", b.pair_count}});
  return {{"lag_width_m", num(ev.lag_width)}, {"max_lag_m", num(ev.max_lag)}, {"bins", bins}};
}

Json to_json(const compare::PolyFit& p) {
  Json c = Json::array();
  for (double v : p.coefficients) c.push_back(num(v));
  return {{"degree", p.degree}, {"s_min", num(p.s_min)}, {"s_max", num(p.s_max)}, {"coefficients", c}};
}

Json to_json(const compare::ComparisonReport& r) {
  return {{"a_stats", to_json(r.a_stats)},
          {"b_stats", to_json(r.b_stats)},
          {"offset_mS_per_m", num(r.offset)},
          {"pcc_filtered", num(r.pcc_filtered)},
          {"pcc_raw", num(r.pcc_raw)},
          {"polyfit_a", to_json(r.polyfit_a)},
          {"polyfit_b", to_json(r.polyfit_b)},
          {"n_aligned", r.n_aligned},
          {"n_outliers_removed", r.n_outliers_removed}};
}

Json parse(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(source + ": invalid JSON (" + e.what() + ")");
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace ecasurvey::serialize
