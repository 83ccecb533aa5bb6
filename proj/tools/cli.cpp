// SPDX-License-Identifier: Apache-2.0
#include "cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "ecasurvey/calib.hpp"
#include "ecasurvey/compare.hpp"
#include "ecasurvey/error.hpp"
#include "ecasurvey/geostat.hpp"
#include "ecasurvey/ingest.hpp"
#include "ecasurvey/plot.hpp"
#include "ecasurvey/raster.hpp"
#include "ecasurvey/serialize.hpp"
#include "ecasurvey/terrasim.hpp"
#include "util.hpp"

#ifndef ECASURVEY_VERSION
#define ECASURVEY_VERSION "0.0.0"
#endif

namespace ecasurvey::cli {

namespace {

namespace fs = std::filesystem;
using serialize::Json;
using detail::format_double;
using detail::format_fixed;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << data;
  if (!out) throw InputError("failed writing '" + path + "'");
}

// Output locations are checked before any work starts.
void require_output_dir(const std::string& path) {
  if (path.empty()) return;
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty() && !fs::is_directory(parent))
    throw InputError("output directory '" + parent.string() + "' does not exist (for '" + path + "')");
}

// Parses a file with `reader`, prefixing errors with the path.
template <typename Reader>
auto parse_file(const std::string& path, Reader reader) {
  std::istringstream in(read_file(path));
  try {
    return reader(in);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::string replace_extension(const std::string& path, const std::string& ext) {
  return fs::path(path).replace_extension(ext).string();
}

// ---------------------------------------------------------------------------

struct GeorefArgs {
  std::string emi, gnss, out;
  std::string gnss_format = "csv";
  std::string keep = "rtk";
  double day_epoch = 0.0;
  double max_gap = 1.0;
  std::string field_id;
  std::string acquisition = "robotized";
  double depth_mode = 0.7;
  std::optional<double> d_b, d_h;
};

int cmd_georef(const GeorefArgs& a, std::ostream& out, std::ostream& err) {
  require_output_dir(a.out);
  const auto emi = parse_file(a.emi, [](std::istream& in) { return parse_emi_log(in); });
  for (const auto& w : emi.warnings) err << a.emi << ": warning: " << w << '\n';
  const auto schema = a.gnss_format == "nmea" ? GnssSchema::nmea_gga : GnssSchema::csv_v1;
  const auto gnss =
      parse_file(a.gnss, [&](std::istream& in) { return parse_gnss_track(in, schema, a.day_epoch); });

  GeorefOptions opt;
  opt.max_gap = a.max_gap;
  if (a.keep == "all") opt.keep = [](const GnssFix& f) { return f.quality != FixQuality::none; };
  SurveyMetadata meta;
  meta.field_id = a.field_id;
  meta.depth_mode = a.depth_mode;
  meta.acquisition = a.acquisition == "manual" ? Acquisition::manual : Acquisition::robotized;
  if (a.d_b || a.d_h) {
    if (!a.d_b || !a.d_h) throw InputError("--d-b and --d-h must be given together");
    meta.placement = PlacementConfig{*a.d_b, *a.d_h};
    validate(*meta.placement);
  }
  const GeorefResult r = georeference(emi.samples, gnss.fixes, opt, meta);
  std::ostringstream csv;
  write_track_csv(csv, r.track);
  write_file(a.out, csv.str());
  out << "samples " << emi.samples.size() << ", kept " << r.track.samples.size() << ", dropped "
      << r.dropped() << " (outside coverage " << r.dropped_outside << ", gap " << r.dropped_gap << ")\n";
  if (gnss.skipped_checksum > 0 || gnss.skipped_other > 0)
    out << "gnss sentences skipped: checksum " << gnss.skipped_checksum << ", other " << gnss.skipped_other
        << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------

struct CalibrateArgs {
  std::string table, out;
  std::string group;
  std::string csv_out, svg;
};

Json table_json(const calib::CalibrationTable& t) { return serialize::to_json(t); }

int cmd_calibrate(const CalibrateArgs& a, std::ostream& out) {
  require_output_dir(a.out);
  require_output_dir(a.csv_out);
  require_output_dir(a.svg);
  auto input = parse_file(a.table, [](std::istream& in) { return calib::read_calibration_input(in); });
  const auto names = input.group_names();
  if (!a.group.empty()) {
    if (std::find(names.begin(), names.end(), a.group) == names.end())
      throw InputError(a.table + ": no rows in group '" + a.group + "'");
    input = input.subset(a.group);
  }
  const auto pooled = calib::build_calibration(input.baseline, input.columns);

  Json doc = table_json(pooled);
  doc["error_pct_definition"] = "mean over points of |measured - baseline| / |baseline|, percent";
  if (a.group.empty() && !(names.size() == 1 && names.front().empty())) {
    Json groups = Json::array();
    for (const auto& name : names) {
      const auto sub = input.subset(name);
      Json g{{"name", name}};
      g.update(table_json(calib::build_calibration(sub.baseline, sub.columns)));
      groups.push_back(std::move(g));
    }
    doc["groups"] = std::move(groups);
  }
  write_file(a.out, serialize::dump(doc));

  out << "d_b_m,pcc,slope,intercept,mean,sigma,error_pct\n";
  plot::Series pcc_line{"pooled PCC", {}, {}, false};
  for (const auto& [d_b, e] : pooled.per_distance) {
    out << format_double(d_b) << ',' << format_double(e.regression.pcc) << ','
        << format_double(e.regression.slope) << ',' << format_double(e.regression.intercept) << ','
        << format_double(e.stats.mean) << ',' << format_double(e.stats.sigma) << ','
        << format_double(e.error_pct) << '\n';
    pcc_line.x.push_back(d_b);
    pcc_line.y.push_back(e.regression.pcc);
  }
  if (!a.csv_out.empty()) {
    std::ostringstream csv;
    calib::write_calibration_csv(csv, pooled);
    write_file(a.csv_out, csv.str());
  }
  if (!a.svg.empty()) {
    std::ostringstream svg;
    plot::write_svg(svg, {"PCC against baseline", "d_b (m)", "PCC", {pcc_line}});
    write_file(a.svg, svg.str());
  }
  return kOk;
}

// ---------------------------------------------------------------------------

struct RecommendArgs {
  std::string calibration, reports, out;
  calib::PlacementPolicy policy;
};

int cmd_recommend(const RecommendArgs& a, std::ostream& out) {
  require_output_dir(a.out);
  for (double v : {a.policy.pcc_min, a.policy.converge_tol, a.policy.osc_sigma_max})
    if (!std::isfinite(v)) throw InputError("policy thresholds must be finite");
  const auto table = calib::CalibrationTable(
      serialize::calibration_from_json(serialize::parse(read_file(a.calibration), a.calibration)));
  const auto reports = serialize::reports_from_json(serialize::parse(read_file(a.reports), a.reports));
  const auto rec = calib::recommend_placement(table, reports, a.policy);

  out << "recommended placement: " << format_fixed(rec.placement.d_b, 2) << " m, "
      << format_fixed(rec.placement.d_h, 2) << " m\n";
  out << "pcc " << format_fixed(rec.pcc, 4) << " (pcc_min " << format_double(a.policy.pcc_min) << ")\n";
  out << "convergence distance " << format_fixed(rec.convergence_distance, 2) << " m (converge_tol "
      << format_double(a.policy.converge_tol) << " mS/m)\n";
  out << "oscillation sigma " << format_fixed(rec.osc_sigma, 3) << " cm (osc_sigma_max "
      << format_double(a.policy.osc_sigma_max) << " cm)\n";
  out << "d_b_m,pcc,mean_step,pcc_ok,within_convergence\n";
  for (const auto& g : rec.gates)
    out << format_double(g.d_b) << ',' << format_double(g.pcc) << ','
        << (std::isfinite(g.mean_step) ? format_double(g.mean_step) : "") << ',' << (g.pcc_ok ? 1 : 0) << ','
        << (g.within_convergence ? 1 : 0) << '\n';
  if (!a.out.empty()) {
    Json doc = serialize::to_json(rec);
    doc["policy"] = {{"pcc_min", a.policy.pcc_min},
                     {"converge_tol", a.policy.converge_tol},
                     {"osc_sigma_max", a.policy.osc_sigma_max}};
    write_file(a.out, serialize::dump(doc));
  }
  return kOk;
}

// ---------------------------------------------------------------------------

struct KrigeArgs {
  std::string track, out, sidecar, variogram_csv, svg;
  std::optional<double> nugget, sill, range;
  std::optional<double> lag_width, max_lag, cell_size, radius;
  std::size_t k_nearest = 16;
  unsigned threads = 0;
};

int cmd_krige(const KrigeArgs& a, std::ostream& out) {
  const std::string sidecar = a.sidecar.empty() ? replace_extension(a.out, ".json") : a.sidecar;
  for (const auto* p : {&a.out, &sidecar, &a.variogram_csv, &a.svg}) require_output_dir(*p);
  const int pinned = (a.nugget ? 1 : 0) + (a.sill ? 1 : 0) + (a.range ? 1 : 0);
  if (pinned != 0 && pinned != 3) throw InputError("--nugget, --sill and --range must be given together");

  const auto track = parse_file(a.track, [](std::istream& in) { return read_track_csv(in); });
  if (track.samples.size() < 2)
    throw InputError(a.track + ": kriging needs at least 2 samples, got " + std::to_string(track.samples.size()));
  const auto planar = geostat::project_track(track);

  double minx = planar.points[0].x, maxx = minx, miny = planar.points[0].y, maxy = miny;
  for (const auto& p : planar.points) {
    minx = std::min(minx, p.x);
    maxx = std::max(maxx, p.x);
    miny = std::min(miny, p.y);
    maxy = std::max(maxy, p.y);
  }
  const double max_lag = a.max_lag.value_or(0.5 * std::hypot(maxx - minx, maxy - miny));
  const double lag_width = a.lag_width.value_or(max_lag / 15.0);
  if (!(max_lag > 0.0) || !(lag_width > 0.0)) throw InputError("lag width and max lag must be positive");
  const auto ev = geostat::empirical_variogram(planar.points, lag_width, max_lag);

  geostat::VariogramModel model;
  if (pinned == 3) {
    model.nugget = *a.nugget;
    model.partial_sill = *a.sill - *a.nugget;
    model.range = *a.range;
    geostat::validate(model);
  } else {
    model = geostat::fit_exponential(ev);
  }

  auto nb = geostat::default_neighborhood(planar.points);
  nb.k_nearest = a.k_nearest;
  if (a.radius) nb.max_radius = *a.radius;
  if (nb.k_nearest < 1 || !(nb.max_radius > 0.0)) throw InputError("neighbourhood k and radius must be positive");
  const auto grid = geostat::default_grid(planar, a.cell_size.value_or(0.0));
  const auto result = geostat::ordinary_kriging(planar.points, model, grid, nb, a.threads);

  std::ostringstream asc;
  write_esri_ascii(asc, result.raster);
  write_file(a.out, asc.str());
  std::ostringstream prj;
  write_zone_sidecar(prj, result.raster.spec.zone);
  write_file(sidecar_path(a.out), prj.str());

  const auto ms = geostat::map_stats(result.raster);
  Json doc;
  doc["model"] = serialize::to_json(model);
  doc["fitted"] = pinned == 0;
  doc["variogram"] = serialize::to_json(ev);
  doc["neighborhood"] = {{"k_nearest", nb.k_nearest}, {"max_radius_m", nb.max_radius}};
  doc["grid"] = {{"zone", result.raster.spec.zone.zone},
                 {"hemisphere", result.raster.spec.zone.hemisphere == geodesy::Hemisphere::north ? "N" : "S"},
                 {"xll", grid.xll},
                 {"yll", grid.yll},
                 {"cell_size_m", grid.cell_size},
                 {"ncols", grid.ncols},
                 {"nrows", grid.nrows}};
  doc["map_stats"] = {{"mean", ms.stats.mean}, {"sigma", ms.stats.sigma}, {"n", ms.stats.n},
                      {"min", ms.min},         {"max", ms.max}};
  doc["predicted_cells"] = result.predicted_cells;
  doc["max_weight_sum_error"] = result.max_weight_sum_error;
  write_file(sidecar, serialize::dump(doc));

  if (!a.variogram_csv.empty()) {
    std::ostringstream csv;
    csv << "lag_m,gamma,pairs,model_gamma\n";
    for (const auto& b : ev.bins)
      csv << format_double(b.lag_center) << ',' << format_double(b.gamma) << ',' << b.pair_count << ','
          << format_double(model.gamma(b.lag_center)) << '\n';
    write_file(a.variogram_csv, csv.str());
  }
  if (!a.svg.empty()) {
    plot::Series emp{"empirical", {}, {}, true};
    plot::Series fit{"exponential model", {}, {}, false};
    for (const auto& b : ev.bins) {
      emp.x.push_back(b.lag_center);
      emp.y.push_back(b.gamma);
    }
    for (int i = 0; i <= 100; ++i) {
      const double h = max_lag * i / 100.0;
      fit.x.push_back(h);
      fit.y.push_back(model.gamma(h));
    }
    std::ostringstream svg;
    plot::write_svg(svg, {"Semivariogram", "lag (m)", "gamma", {emp, fit}});
    write_file(a.svg, svg.str());
  }

  out << (pinned == 0 ? "fitted" : "pinned") << " model: nugget " << format_double(model.nugget) << ", sill "
      << format_double(model.sill()) << ", range " << format_double(model.range) << " m\n";
  out << "grid " << grid.ncols << " x " << grid.nrows << " @ " << format_double(grid.cell_size) << " m, "
      << result.predicted_cells << " cells predicted\n";
  out << "map mean " << format_double(ms.stats.mean) << ", sigma " << format_double(ms.stats.sigma) << ", min "
      << format_double(ms.min) << ", max " << format_double(ms.max) << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------

struct CompareArgs {
  std::string track_a, track_b, raster_a, raster_b, out, series_csv, svg;
  compare::CompareOptions options;
};

int cmd_compare(const CompareArgs& a, std::ostream& out) {
  for (const auto* p : {&a.out, &a.series_csv, &a.svg}) require_output_dir(*p);
  if (a.raster_a.empty() != a.raster_b.empty()) throw InputError("--raster-a and --raster-b must be given together");
  const auto ta = parse_file(a.track_a, [](std::istream& in) { return read_track_csv(in); });
  const auto tb = parse_file(a.track_b, [](std::istream& in) { return read_track_csv(in); });
  const auto report = compare::compare_report(ta, tb, a.options);

  Json doc = serialize::to_json(report);
  if (!a.raster_a.empty()) {
    const auto ra = load_raster(a.raster_a);
    const auto rb = load_raster(a.raster_b);
    const auto rc = geostat::raster_pearson(ra, rb);
    double sum = 0.0;
    for (std::size_t i = 0; i < ra.values.size(); ++i)
      if (!ra.is_nodata(ra.values[i]) && !rb.is_nodata(rb.values[i])) sum += ra.values[i] - rb.values[i];
    doc["pixel_pcc"] = rc.r;
    doc["pixel_overlap"] = rc.overlap;
    doc["pixel_offset_mS_per_m"] = sum / static_cast<double>(rc.overlap);
    out << "pixel pcc " << format_fixed(rc.r, 4) << " over " << rc.overlap << " cells\n";
  }
  write_file(a.out, serialize::dump(doc));
  out << "series pcc " << format_fixed(report.pcc_filtered, 4) << " filtered, " << format_fixed(report.pcc_raw, 4)
      << " raw; offset " << format_double(report.offset) << " mS/m; " << report.n_outliers_removed
      << " outliers removed\n";

  if (!a.series_csv.empty() || !a.svg.empty()) {
    const auto fa = compare::filter_track_sigma(ta, a.options.k_sigma);
    const auto fb = compare::filter_track_sigma(tb, a.options.k_sigma);
    const auto al = compare::align_by_arclength(fa, fb, report.n_aligned);
    if (!a.series_csv.empty()) {
      std::ostringstream csv;
      csv << "s,a,b,fit_a,fit_b\n";
      for (std::size_t i = 0; i < al.s.size(); ++i)
        csv << format_double(al.s[i]) << ',' << format_double(al.a_values[i]) << ','
            << format_double(al.b_values[i]) << ',' << format_double(report.polyfit_a(al.s[i])) << ','
            << format_double(report.polyfit_b(al.s[i])) << '\n';
      write_file(a.series_csv, csv.str());
    }
    if (!a.svg.empty()) {
      std::vector<double> fit_a, fit_b;
      for (double s : al.s) {
        fit_a.push_back(report.polyfit_a(s));
        fit_b.push_back(report.polyfit_b(s));
      }
      std::ostringstream svg;
      plot::write_svg(svg, {"Aligned conductivity series",
                            "normalised arc length",
                            "ECa (mS/m)",
                            {{"a", al.s, al.a_values, true},
                             {"b", al.s, al.b_values, true},
                             {"fit a", al.s, fit_a, false},
                             {"fit b", al.s, fit_b, false}}});
      write_file(a.svg, svg.str());
    }
  }
  return kOk;
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
  std::string heightmap, terrain = "rocky", trajectory, out, clearance_csv, sweep_csv, svg, terrain_out;
  std::uint64_t seed = 1;
  double width = 40.0, height = 40.0, cell_size = 0.05;
  double d_b = 0.60, d_h = 0.06, step = 0.05;
  bool sweep = false;
};

std::string placement_label(const PlacementConfig& c) {
  return format_fixed(c.d_b * 100.0, 0) + "cm - " + format_fixed(c.d_h * 100.0, 0) + "cm";
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  for (const auto* p : {&a.out, &a.clearance_csv, &a.sweep_csv, &a.svg, &a.terrain_out}) require_output_dir(*p);
  if (a.sweep && !a.clearance_csv.empty()) throw InputError("--clearance-csv is not available with --sweep");
  if (!a.sweep && !a.sweep_csv.empty()) throw InputError("--sweep-csv requires --sweep");

  const bool synthetic = a.heightmap.empty();
  const auto kind = terrasim::parse_terrain_kind(a.terrain);
  terrasim::Heightmap h;
  if (synthetic) {
    h = terrasim::synth_heightmap(kind, a.seed, a.width, a.height, a.cell_size);
    out << "# terrain=" << a.terrain << " seed=" << a.seed << " width_m=" << format_double(a.width)
        << " height_m=" << format_double(a.height) << " cell_m=" << format_double(a.cell_size) << '\n';
  } else {
    if (a.trajectory.empty()) throw InputError("--heightmap requires --trajectory");
    h = parse_file(a.heightmap, [](std::istream& in) { return terrasim::read_heightmap_asc(in); });
    out << "# heightmap=" << fs::path(a.heightmap).filename().string() << '\n';
  }
  const auto traj =
      a.trajectory.empty()
          ? terrasim::default_trajectory(kind, h.width(), h.height())
          : parse_file(a.trajectory, [](std::istream& in) { return terrasim::read_trajectory_csv(in); });
  const std::string terrain_label = synthetic ? a.terrain : "heightmap";
  const std::optional<std::uint64_t> seed = synthetic ? std::optional(a.seed) : std::nullopt;
  const terrasim::RobotGeometry geom;

  if (!a.terrain_out.empty()) {
    std::ostringstream asc;
    terrasim::write_heightmap_asc(asc, h);
    write_file(a.terrain_out, asc.str());
  }

  if (a.sweep) {
    const auto entries = terrasim::sweep_placements(h, traj, geom, terrasim::kSweepDistances,
                                                    terrasim::kSweepHeights, a.step);
    write_file(a.out, serialize::dump(serialize::reports_to_json(entries, terrain_label, seed)));
    std::ostringstream csv;
    csv << "config,d_b_m,d_h_m,mean_dev_cm,sigma_dev_cm,variance_dev_cm2,min_clearance_cm,collision_count,n_steps\n";
    for (const auto& e : entries)
      csv << placement_label(e.cfg) << ',' << format_double(e.cfg.d_b) << ',' << format_double(e.cfg.d_h) << ','
          << format_fixed(e.report.mean_dev, 4) << ',' << format_fixed(e.report.sigma_dev, 4) << ','
          << format_fixed(e.report.variance_dev, 4) << ',' << format_fixed(e.report.min_clearance, 4) << ','
          << e.report.collision_count << ',' << e.report.n_steps << '\n';
    if (a.sweep_csv.empty())
      out << csv.str();
    else
      write_file(a.sweep_csv, csv.str());
    if (!a.svg.empty()) {
      std::vector<plot::Series> lines;
      for (double d_h : terrasim::kSweepHeights) {
        plot::Series s{"d_h " + format_fixed(d_h * 100.0, 0) + " cm", {}, {}, false};
        for (const auto& e : entries)
          if (e.cfg.d_h == d_h) {
            s.x.push_back(e.cfg.d_b);
            s.y.push_back(e.report.sigma_dev);
          }
        lines.push_back(std::move(s));
      }
      std::ostringstream svg;
      plot::write_svg(svg, {"Probe oscillation by placement", "d_b (m)", "sigma_dev (cm)", lines});
      write_file(a.svg, svg.str());
    }
    return kOk;
  }

  const PlacementConfig cfg{a.d_b, a.d_h};
  const auto r = terrasim::simulate_traverse(h, traj, geom, cfg, a.step);
  write_file(a.out, serialize::dump(serialize::reports_to_json({{cfg, r.report}}, terrain_label, seed)));
  if (!a.clearance_csv.empty()) {
    std::ostringstream csv;
    terrasim::write_clearance_csv(csv, r.series);
    write_file(a.clearance_csv, csv.str());
  }
  if (!a.svg.empty()) {
    plot::Series s{"clearance", {}, {}, false};
    for (const auto& c : r.series) {
      s.x.push_back(c.s);
      s.y.push_back(c.clearance * 100.0);
    }
    std::ostringstream svg;
    plot::write_svg(svg, {"Probe clearance " + placement_label(cfg), "arc length (m)", "clearance (cm)", {s}});
    write_file(a.svg, svg.str());
  }
  out << placement_label(cfg) << ": mean_dev " << format_fixed(r.report.mean_dev, 4) << " cm, sigma_dev "
      << format_fixed(r.report.sigma_dev, 4) << " cm, min_clearance " << format_fixed(r.report.min_clearance, 4)
      << " cm, collisions " << r.report.collision_count << ", steps " << r.report.n_steps << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------

Json option_json(const CLI::Option* opt) {
  Json o{{"name", opt->get_name()}, {"description", opt->get_description()}};
  o["required"] = opt->get_required();
  o["flag"] = opt->get_expected_min() == 0;
  if (!opt->get_default_str().empty()) o["default"] = opt->get_default_str();
  return o;
}

Json help_json(const CLI::App& app) {
  Json doc{{"name", app.get_name()}, {"description", app.get_description()}, {"version", ECASURVEY_VERSION}};
  Json opts = Json::array();
  for (const auto* opt : app.get_options())
    if (!opt->get_name().empty()) opts.push_back(option_json(opt));
  doc["options"] = std::move(opts);
  Json subs = Json::array();
  for (const auto* sub : app.get_subcommands([](const CLI::App*) { return true; })) {
    Json s{{"name", sub->get_name()}, {"description", sub->get_description()}};
    Json sopts = Json::array();
    for (const auto* opt : sub->get_options())
      if (opt->get_name() != "--help") sopts.push_back(option_json(opt));
    s["options"] = std::move(sopts);
    subs.push_back(std::move(s));
  }
  doc["subcommands"] = std::move(subs);
  doc["exit_codes"] = {{"0", "success"},
                       {"2", "input or format error"},
                       {"3", "empty result"},
                       {"4", "infeasible placement policy"},
                       {"5", "numerical failure"}};
  return doc;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Soil ECa survey toolkit: georeferencing, interference calibration, placement "
               "recommendation, kriging, survey comparison and terrain simulation",
               "ecasurvey"};
  app.set_version_flag("--version", std::string("ecasurvey ") + ECASURVEY_VERSION);
  app.set_config("--config", "", "TOML file with option values, one [section] per command; flags take precedence");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(0, 1);
  bool json_help = false;
  app.add_flag("--json", json_help, "Print machine-readable help as JSON and exit");

  GeorefArgs geo;
  auto* georef = app.add_subcommand("georef", "Georeference an EMI log against a GNSS track");
  georef->add_option("--emi", geo.emi, "EMI log csv")->required()->check(CLI::ExistingFile);
  georef->add_option("--gnss", geo.gnss, "GNSS track (csv or NMEA)")->required()->check(CLI::ExistingFile);
  georef->add_option("--out", geo.out, "Georeferenced track csv to write")->required();
  georef->add_option("--gnss-format", geo.gnss_format, "csv or nmea")
      ->check(CLI::IsMember({"csv", "nmea"}))
      ->capture_default_str();
  georef->add_option("--day-epoch", geo.day_epoch, "Epoch seconds of the NMEA survey day")->capture_default_str();
  georef->add_option("--max-gap", geo.max_gap, "Largest fix gap bridged by interpolation, s")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  georef->add_option("--keep", geo.keep, "rtk keeps RTK fixed/float fixes, all keeps every fix with a position")
      ->check(CLI::IsMember({"rtk", "all"}))
      ->capture_default_str();
  georef->add_option("--field-id", geo.field_id, "Field identifier stored in the track header");
  georef->add_option("--acquisition", geo.acquisition, "manual or robotized")
      ->check(CLI::IsMember({"manual", "robotized"}))
      ->capture_default_str();
  georef->add_option("--depth-mode", geo.depth_mode, "Depth of investigation, 0.35 or 0.7 m")->capture_default_str();
  georef->add_option("--d-b", geo.d_b, "Probe distance from the robot body, m");
  georef->add_option("--d-h", geo.d_h, "Probe height above ground, m");

  CalibrateArgs cal;
  auto* calibrate = app.add_subcommand("calibrate", "Summarise an interference table and regress each distance");
  calibrate->add_option("--table", cal.table, "Calibration csv ([group,]baseline,<d_b>...)")
      ->required()
      ->check(CLI::ExistingFile);
  calibrate->add_option("--out", cal.out, "Calibration JSON to write")->required();
  calibrate->add_option("--group", cal.group, "Use only rows of this group");
  calibrate->add_option("--csv-out", cal.csv_out, "Calibration table csv to write");
  calibrate->add_option("--svg", cal.svg, "PCC-versus-distance plot to write");

  RecommendArgs rec;
  auto* recommend = app.add_subcommand("recommend", "Recommend a probe placement");
  recommend->add_option("--calibration", rec.calibration, "Calibration JSON from 'calibrate'")
      ->required()
      ->check(CLI::ExistingFile);
  recommend->add_option("--reports", rec.reports, "Oscillation reports JSON from 'simulate'")
      ->required()
      ->check(CLI::ExistingFile);
  recommend->add_option("--out", rec.out, "Recommendation JSON to write");
  recommend->add_option("--pcc-min", rec.policy.pcc_min, "Minimum PCC against baseline")->capture_default_str();
  recommend->add_option("--converge-tol", rec.policy.converge_tol, "Mean change between distances, mS/m")
      ->capture_default_str();
  recommend->add_option("--osc-sigma-max", rec.policy.osc_sigma_max, "Largest oscillation sigma, cm")
      ->capture_default_str();

  KrigeArgs kr;
  auto* krige = app.add_subcommand("krige", "Fit an exponential variogram and krige a track onto a raster");
  krige->add_option("--track", kr.track, "Georeferenced track csv")->required()->check(CLI::ExistingFile);
  krige->add_option("--out", kr.out, "ESRI ASCII raster to write (zone sidecar alongside)")->required();
  krige->add_option("--sidecar", kr.sidecar, "Model and map statistics JSON (default: raster path with a .json extension)");
  krige->add_option("--nugget", kr.nugget, "Pinned nugget");
  krige->add_option("--sill", kr.sill, "Pinned total sill");
  krige->add_option("--range", kr.range, "Pinned practical range, m");
  krige->add_option("--lag-width", kr.lag_width, "Variogram bin width, m (default max lag / 15)");
  krige->add_option("--max-lag", kr.max_lag, "Largest variogram lag, m (default half the extent diagonal)");
  krige->add_option("--cell-size", kr.cell_size, "Raster cell size, m (default median sample spacing)");
  krige->add_option("--k", kr.k_nearest, "Neighbours per cell")->capture_default_str();
  krige->add_option("--radius", kr.radius, "Neighbour search radius, m (default 10 x median spacing)");
  krige->add_option("--threads", kr.threads, "Worker threads, 0 = all cores")->capture_default_str();
  krige->add_option("--variogram-csv", kr.variogram_csv, "Empirical and model variogram csv to write");
  krige->add_option("--svg", kr.svg, "Variogram plot to write");

  CompareArgs cmp;
  auto* comparecmd = app.add_subcommand("compare", "Compare two surveys of the same path");
  comparecmd->add_option("--track-a", cmp.track_a, "First track csv (e.g. robotized)")
      ->required()
      ->check(CLI::ExistingFile);
  comparecmd->add_option("--track-b", cmp.track_b, "Second track csv (e.g. manual)")
      ->required()
      ->check(CLI::ExistingFile);
  comparecmd->add_option("--raster-a", cmp.raster_a, "Raster of the first survey")->check(CLI::ExistingFile);
  comparecmd->add_option("--raster-b", cmp.raster_b, "Raster of the second survey")->check(CLI::ExistingFile);
  comparecmd->add_option("--out", cmp.out, "Comparison JSON to write")->required();
  comparecmd->add_option("--k-sigma", cmp.options.k_sigma, "Outlier threshold in sigmas")->capture_default_str();
  comparecmd->add_option("--degree", cmp.options.degree, "Polynomial fit degree")->capture_default_str();
  comparecmd->add_option("--n-points", cmp.options.n_points, "Aligned samples, 0 = smaller filtered track")
      ->capture_default_str();
  comparecmd->add_option("--series-csv", cmp.series_csv, "Aligned series csv to write");
  comparecmd->add_option("--svg", cmp.svg, "Aligned series plot to write");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Simulate probe clearance along a trajectory");
  auto* hm_opt = simulate->add_option("--heightmap", sim.heightmap, "ESRI ASCII heightmap")->check(CLI::ExistingFile);
  simulate->add_option("--terrain", sim.terrain, "Synthetic terrain kind: smooth, rocky or mixed")
      ->check(CLI::IsMember({"smooth", "rocky", "mixed"}))
      ->capture_default_str();
  simulate->add_option("--seed", sim.seed, "Synthetic terrain seed")->capture_default_str()->excludes(hm_opt);
  simulate->add_option("--width", sim.width, "Synthetic terrain width, m")->capture_default_str()->excludes(hm_opt);
  simulate->add_option("--height", sim.height, "Synthetic terrain height, m")->capture_default_str()->excludes(hm_opt);
  simulate->add_option("--cell-size", sim.cell_size, "Synthetic terrain cell size, m")
      ->capture_default_str()
      ->excludes(hm_opt);
  simulate->add_option("--trajectory", sim.trajectory, "Trajectory csv (x_m,y_m)")->check(CLI::ExistingFile);
  simulate->add_option("--d-b", sim.d_b, "Probe distance from the robot body, m")->capture_default_str();
  simulate->add_option("--d-h", sim.d_h, "Probe height above ground, m")->capture_default_str();
  simulate->add_option("--step", sim.step, "Arc-length step, m")->capture_default_str();
  simulate->add_option("--out", sim.out, "Oscillation report JSON to write")->required();
  simulate->add_option("--clearance-csv", sim.clearance_csv, "Clearance series csv to write");
  simulate->add_flag("--sweep", sim.sweep, "Run every d_b in {0.40..0.70} x d_h in {0.06, 0.11}");
  simulate->add_option("--sweep-csv", sim.sweep_csv, "Sweep table csv to write (default: stdout)");
  simulate->add_option("--svg", sim.svg, "Clearance or sweep plot to write");
  simulate->add_option("--terrain-out", sim.terrain_out, "Write the heightmap used as ESRI ASCII");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream cli_out, cli_err;
    const int code = app.exit(e, cli_out, cli_err);
    out << cli_out.str();
    err << cli_err.str();
    return code == 0 ? kOk : kInputError;
  }

  if (json_help) {
    out << serialize::dump(help_json(app));
    return kOk;
  }

  try {
    if (georef->parsed()) return cmd_georef(geo, out, err);
    if (calibrate->parsed()) return cmd_calibrate(cal, out);
    if (recommend->parsed()) return cmd_recommend(rec, out);
    if (krige->parsed()) return cmd_krige(kr, out);
    if (comparecmd->parsed()) return cmd_compare(cmp, out);
    if (simulate->parsed()) return cmd_simulate(sim, out);
    err << "error: a command is required\n" << app.help();
    return kInputError;
  } catch (const InfeasibleError& e) {
    err << "error: infeasible (gate " << e.gate() << "): " << e.what() << '\n';
    return kInfeasible;
  } catch (const EmptyResultError& e) {
    err << "error: " << e.what() << '\n';
    return kEmptyResult;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << '\n';
    return kNumerical;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
}

}  // namespace ecasurvey::cli
