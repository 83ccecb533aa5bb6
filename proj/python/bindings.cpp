// SPDX-License-Identifier: Apache-2.0
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <sstream>

#include "cli.hpp"
#include "ecasurvey/calib.hpp"
#include "ecasurvey/error.hpp"
#include "ecasurvey/geodesy.hpp"
#include "ecasurvey/geostat.hpp"
#include "ecasurvey/stats.hpp"
#include "ecasurvey/terrasim.hpp"

namespace py = pybind11;
using namespace ecasurvey;

namespace {

std::vector<geostat::PlanarPoint> to_points(const std::vector<double>& x, const std::vector<double>& y,
                                            const std::vector<double>& z) {
  if (x.size() != y.size() || x.size() != z.size()) throw InputError("x, y and z must have equal lengths");
  std::vector<geostat::PlanarPoint> pts;
  for (std::size_t i = 0; i < x.size(); ++i) pts.push_back({x[i], y[i], z[i]});
  return pts;
}

py::dict report_dict(const PlacementConfig& cfg, const terrasim::OscillationReport& r) {
  py::dict d;
  d["d_b"] = cfg.d_b;
  d["d_h"] = cfg.d_h;
  d["mean_dev"] = r.mean_dev;
  d["sigma_dev"] = r.sigma_dev;
  d["variance_dev"] = r.variance_dev;
  d["min_clearance"] = r.min_clearance;
  d["collision_count"] = r.collision_count;
  d["n_steps"] = r.n_steps;
  return d;
}

py::dict model_dict(const geostat::VariogramModel& m) {
  py::dict d;
  d["nugget"] = m.nugget;
  d["partial_sill"] = m.partial_sill;
  d["range"] = m.range;
  d["degenerate"] = m.degenerate;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Soil ECa survey toolkit core";
  m.attr("__version__") = ECASURVEY_VERSION;

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InputError>(m, "InputError", base.ptr());
  py::register_exception<EmptyResultError>(m, "EmptyResultError", base.ptr());
  py::register_exception<InfeasibleError>(m, "InfeasibleError", base.ptr());
  py::register_exception<NumericalError>(m, "NumericalError", base.ptr());

  m.def(
      "wgs84_to_utm",
      [](double lat, double lon, std::optional<int> zone, std::optional<std::string> hemisphere) {
        std::optional<geodesy::UtmZone> pinned;
        if (zone) {
          const auto hemi = hemisphere.value_or(lat < 0.0 ? "S" : "N");
          if (hemi != "N" && hemi != "S") throw InputError("hemisphere must be 'N' or 'S'");
          pinned = geodesy::UtmZone{*zone, hemi == "N" ? geodesy::Hemisphere::north : geodesy::Hemisphere::south};
        }
        const auto u = geodesy::wgs84_to_utm({lat, lon}, pinned);
        return py::make_tuple(u.zone, u.hemisphere == geodesy::Hemisphere::north ? "N" : "S", u.easting,
                              u.northing);
      },
      py::arg("lat"), py::arg("lon"), py::arg("zone") = py::none(), py::arg("hemisphere") = py::none(),
      "Geodetic degrees to (zone, hemisphere, easting, northing).");

  m.def(
      "utm_to_wgs84",
      [](int zone, const std::string& hemisphere, double easting, double northing) {
        if (hemisphere != "N" && hemisphere != "S") throw InputError("hemisphere must be 'N' or 'S'");
        const auto g = geodesy::utm_to_wgs84(
            {zone, hemisphere == "N" ? geodesy::Hemisphere::north : geodesy::Hemisphere::south, easting, northing});
        return py::make_tuple(g.lat, g.lon);
      },
      py::arg("zone"), py::arg("hemisphere"), py::arg("easting"), py::arg("northing"));

  m.def(
      "column_stats",
      [](const std::vector<double>& v) {
        const auto s = column_stats(v);
        return py::make_tuple(s.mean, s.sigma, s.n);
      },
      py::arg("values"), "(mean, n-1 sigma, n)");

  m.def(
      "regress",
      [](const std::vector<double>& baseline, const std::vector<double>& measured) {
        const auto r = calib::regress_against_baseline(baseline, measured);
        py::dict d;
        d["slope"] = r.slope;
        d["intercept"] = r.intercept;
        d["pcc"] = r.pcc;
        d["n"] = r.n;
        return d;
      },
      py::arg("baseline"), py::arg("measured"));

  m.def(
      "empirical_variogram",
      [](const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& z,
         double lag_width, double max_lag) {
        const auto pts = to_points(x, y, z);
        const auto ev = geostat::empirical_variogram(pts, lag_width, max_lag);
        py::list bins;
        for (const auto& b : ev.bins) bins.append(py::make_tuple(b.lag_center, b.gamma, b.pair_count));
        return bins;
      },
      py::arg("x"), py::arg("y"), py::arg("z"), py::arg("lag_width"), py::arg("max_lag"),
      "List of (lag, gamma, pairs).");

  m.def(
      "fit_exponential",
      [](const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& z,
         double lag_width, double max_lag) {
        const auto pts = to_points(x, y, z);
        return model_dict(geostat::fit_exponential(geostat::empirical_variogram(pts, lag_width, max_lag)));
      },
      py::arg("x"), py::arg("y"), py::arg("z"), py::arg("lag_width"), py::arg("max_lag"));

  m.def(
      "ordinary_kriging",
      [](const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& z, double nugget,
         double partial_sill, double range, double xll, double yll, double cell_size, std::size_t ncols,
         std::size_t nrows, std::size_t k, double radius, unsigned threads) {
        const auto pts = to_points(x, y, z);
        geostat::VariogramModel model{nugget, partial_sill, range, false};
        geostat::validate(model);
        GridSpec g;
        g.xll = xll;
        g.yll = yll;
        g.cell_size = cell_size;
        g.ncols = ncols;
        g.nrows = nrows;
        auto nb = geostat::default_neighborhood(pts);
        nb.k_nearest = k;
        if (radius > 0.0) nb.max_radius = radius;
        geostat::KrigingResult res;
        {
          py::gil_scoped_release release;
          res = geostat::ordinary_kriging(pts, model, g, nb, threads);
        }
        py::array_t<double> out({nrows, ncols});
        auto view = out.mutable_unchecked<2>();
        for (std::size_t r = 0; r < nrows; ++r)
          for (std::size_t c = 0; c < ncols; ++c) {
            const double v = res.raster.at(c, r);
            view(r, c) = res.raster.is_nodata(v) ? std::nan("") : v;
          }
        return out;
      },
      py::arg("x"), py::arg("y"), py::arg("z"), py::arg("nugget"), py::arg("partial_sill"), py::arg("range"),
      py::arg("xll"), py::arg("yll"), py::arg("cell_size"), py::arg("ncols"), py::arg("nrows"), py::arg("k") = 16,
      py::arg("radius") = 0.0, py::arg("threads") = 0,
      "Kriged grid as a (nrows, ncols) array, north row first; NaN where no neighbour is in range.");

  m.def(
      "simulate",
      [](const std::string& terrain, std::uint64_t seed, double d_b, double d_h, double width, double height,
         double cell_size, double step) {
        const auto kind = terrasim::parse_terrain_kind(terrain);
        const auto h = terrasim::synth_heightmap(kind, seed, width, height, cell_size);
        const PlacementConfig cfg{d_b, d_h};
        const auto r = terrasim::simulate_traverse(h, terrasim::default_trajectory(kind, width, height), {}, cfg,
                                                   step);
        return report_dict(cfg, r.report);
      },
      py::arg("terrain") = "rocky", py::arg("seed") = 1, py::arg("d_b") = 0.60, py::arg("d_h") = 0.06,
      py::arg("width") = 40.0, py::arg("height") = 40.0, py::arg("cell_size") = 0.05, py::arg("step") = 0.05,
      "Oscillation report (cm) on synthetic terrain along the default trajectory.");

  m.def(
      "sweep",
      [](const std::string& terrain, std::uint64_t seed, double width, double height, double cell_size,
         double step) {
        const auto kind = terrasim::parse_terrain_kind(terrain);
        const auto h = terrasim::synth_heightmap(kind, seed, width, height, cell_size);
        const auto entries =
            terrasim::sweep_placements(h, terrasim::default_trajectory(kind, width, height), {},
                                       terrasim::kSweepDistances, terrasim::kSweepHeights, step);
        py::list out;
        for (const auto& e : entries) out.append(report_dict(e.cfg, e.report));
        return out;
      },
      py::arg("terrain") = "rocky", py::arg("seed") = 1, py::arg("width") = 40.0, py::arg("height") = 40.0,
      py::arg("cell_size") = 0.05, py::arg("step") = 0.05);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command-line tool in-process: (exit code, stdout, stderr).");
}
