// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "ecasurvey/error.hpp"
#include "ecasurvey/geostat.hpp"
#include "ecasurvey/rng.hpp"
#include "support.hpp"

using namespace ecasurvey;
using namespace ecasurvey::geostat;

namespace {

const VariogramModel kModel{1.0, 2.0, 10.0, false};

std::vector<PlanarPoint> random_points(std::uint64_t seed, std::size_t n, double extent) {
  Rng rng(seed);
  std::vector<PlanarPoint> pts;
  for (std::size_t i = 0; i < n; ++i) pts.push_back({rng.uniform(0, extent), rng.uniform(0, extent), 0.0});
  return pts;
}

// Bins generated from the forward model.
EmpiricalVariogram model_bins(const VariogramModel& m) {
  EmpiricalVariogram ev;
  ev.lag_width = 1.0;
  ev.max_lag = 25.0;
  for (int k = 0; k < 25; ++k) {
    const double h = k + 0.5;
    ev.bins.push_back({h, m.gamma(h), static_cast<std::size_t>(50 + 13 * k)});
  }
  return ev;
}

GridSpec grid_over(double x0, double y0, double cell, std::size_t ncols, std::size_t nrows) {
  GridSpec g;
  g.xll = x0;
  g.yll = y0;
  g.cell_size = cell;
  g.ncols = ncols;
  g.nrows = nrows;
  return g;
}

}  // namespace

TEST_SUITE("geostat") {
  TEST_CASE("exponential model uses the practical range and gamma(0) = 0") {
    CHECK(kModel.gamma(0.0) == 0.0);
    CHECK(kModel.gamma(1e-12) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(kModel.gamma(10.0) == doctest::Approx(1.0 + 2.0 * (1.0 - std::exp(-3.0))));
    CHECK(kModel.sill() == 3.0);
    CHECK_THROWS_AS(validate(VariogramModel{-1.0, 1.0, 1.0, false}), InputError);
    CHECK_THROWS_AS(validate(VariogramModel{0.0, 1.0, 0.0, false}), InputError);
  }

  TEST_CASE("two samples give a single bin") {
    const std::vector<PlanarPoint> pts{{0, 0, 0}, {1, 0, 2}};
    const auto ev = empirical_variogram(pts, 1.0, 5.0);
    REQUIRE(ev.bins.size() == 1);
    CHECK(ev.bins[0].gamma == 2.0);
    CHECK(ev.bins[0].pair_count == 1);
    CHECK(ev.bins[0].lag_center == 1.0);
  }

  TEST_CASE("constant field has zero semivariance") {
    auto pts = random_points(1, 60, 20);
    for (auto& p : pts) p.z = 7.0;
    const auto ev = empirical_variogram(pts, 1.0, 10.0);
    CHECK_FALSE(ev.bins.empty());
    for (const auto& b : ev.bins) CHECK(b.gamma == 0.0);
    const auto m = fit_exponential(ev);
    CHECK(m.degenerate);
    CHECK(m.nugget == 0.0);
    CHECK(m.partial_sill == 0.0);
    CHECK(m.range == ev.max_lag);
  }

  TEST_CASE("empirical variogram errors and bin order") {
    const std::vector<PlanarPoint> one{{0, 0, 1}};
    CHECK_THROWS_AS(empirical_variogram(one, 1.0, 5.0), InputError);
    auto pts = random_points(2, 100, 30);
    Rng rng(3);
    for (auto& p : pts) p.z = rng.normal();
    const auto ev = empirical_variogram(pts, 1.5, 12.0);
    for (std::size_t i = 1; i < ev.bins.size(); ++i) CHECK(ev.bins[i].lag_center > ev.bins[i - 1].lag_center);
    for (const auto& b : ev.bins) {
      CHECK(b.gamma >= 0.0);
      CHECK(b.pair_count >= 1);
      CHECK(b.lag_center <= 12.0);
    }
    CHECK_THROWS_AS(empirical_variogram(pts, 0.0, 12.0), InputError);
  }

  TEST_CASE("500 samples from a known model bin close to the model below the range") {
    auto pts = random_points(7, 500, 60.0);
    const auto z = simulate_exponential_field(pts, kModel, 1);
    for (std::size_t i = 0; i < pts.size(); ++i) pts[i].z = z[i];
    const auto ev = empirical_variogram(pts, 2.0, 10.0);
    REQUIRE(ev.bins.size() == 5);
    for (const auto& b : ev.bins) {
      INFO("lag ", b.lag_center);
      CHECK(std::abs(b.gamma - kModel.gamma(b.lag_center)) <= 0.15 * kModel.gamma(b.lag_center));
    }
  }

  TEST_CASE("fit recovers noiseless model parameters") {
    const auto m = fit_exponential(model_bins(kModel));
    CHECK(std::abs(m.nugget - 1.0) <= 1e-3);
    CHECK(std::abs(m.sill() - 3.0) <= 3e-3);
    CHECK(std::abs(m.range - 10.0) <= 1e-2);
    CHECK_FALSE(m.degenerate);

    const VariogramModel pure{0.0, 5.0, 4.0, false};
    const auto p = fit_exponential(model_bins(pure));
    CHECK(std::abs(p.nugget) <= 5e-3);
    CHECK(std::abs(p.partial_sill - 5.0) <= 5e-3);
    CHECK(std::abs(p.range - 4.0) <= 4e-3);
  }

  TEST_CASE("scaling semivariance scales nugget and sill, not range") {
    auto ev = model_bins(kModel);
    const auto base = fit_exponential(ev);
    for (auto& b : ev.bins) b.gamma *= 4.0;
    const auto scaled = fit_exponential(ev);
    CHECK(scaled.nugget == doctest::Approx(4.0 * base.nugget).epsilon(1e-4));
    CHECK(scaled.partial_sill == doctest::Approx(4.0 * base.partial_sill).epsilon(1e-4));
    CHECK(scaled.range == doctest::Approx(base.range).epsilon(1e-4));
  }

  TEST_CASE("fit needs three bins") {
    auto ev = model_bins(kModel);
    ev.bins.resize(2);
    CHECK_THROWS_AS(fit_exponential(ev), InputError);
  }

  TEST_CASE("fit minimises the weighted objective") {
    Rng rng(12);
    auto ev = model_bins(kModel);
    for (auto& b : ev.bins) b.gamma *= 1.0 + 0.05 * rng.normal();
    const auto m = fit_exponential(ev);
    const double best = cressie_objective(ev, m);
    for (double f : {0.98, 1.02}) {
      CHECK(cressie_objective(ev, {m.nugget * f, m.partial_sill, m.range, false}) >= best);
      CHECK(cressie_objective(ev, {m.nugget, m.partial_sill * f, m.range, false}) >= best);
      CHECK(cressie_objective(ev, {m.nugget, m.partial_sill, m.range * f, false}) >= best);
    }
  }

  TEST_CASE("duplicated location kriges to its average everywhere") {
    const std::vector<PlanarPoint> pts{{5, 5, 3.0}, {5, 5, 5.0}};
    const auto unique = deduplicate(pts);
    REQUIRE(unique.size() == 1);
    CHECK(unique[0].z == 4.0);
    const auto r = ordinary_kriging(pts, kModel, grid_over(0, 0, 1, 10, 10), {16, 100.0});
    CHECK(r.predicted_cells == 100);
    for (double v : r.raster.values) CHECK(v == doctest::Approx(4.0).epsilon(1e-12));
  }

  TEST_CASE("kriging is exact at sample locations and weights sum to one") {
    // Samples on cell centres of a 1 m grid.
    Rng rng(5);
    std::vector<PlanarPoint> pts;
    for (int i = 0; i < 80; ++i) {
      const double x = 0.5 + static_cast<int>(rng.uniform(0, 30));
      const double y = 0.5 + static_cast<int>(rng.uniform(0, 30));
      pts.push_back({x, y, rng.normal(20, 4)});
    }
    const auto unique = deduplicate(pts);
    const auto g = grid_over(0, 0, 1, 30, 30);
    const auto r = ordinary_kriging(pts, kModel, g, {16, 15.0}, 3);
    CHECK(r.max_weight_sum_error < 1e-9);
    for (const auto& p : unique) {
      const auto col = static_cast<std::size_t>(p.x);
      const auto row = g.nrows - 1 - static_cast<std::size_t>(p.y);
      CHECK(std::abs(r.raster.at(col, row) - p.z) < 1e-6 * std::max(1.0, std::abs(p.z)));
    }
  }

  TEST_CASE("symmetric pair gets equal weights") {
    const std::vector<PlanarPoint> pts{{-2, 1, 10.0}, {2, -1, 20.0}};
    const auto pred = krige_at(pts, kModel, 0.0, 0.0, {16, 10.0});
    REQUIRE(pred);
    CHECK(pred->weights[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(pred->weights[1] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(pred->value == doctest::Approx(15.0).epsilon(1e-12));
  }

  TEST_CASE("translation invariance and unbiased shift") {
    auto pts = random_points(31, 120, 25);
    Rng rng(4);
    for (auto& p : pts) p.z = rng.normal(15, 3);
    const Neighborhood nb{12, 8.0};
    const auto base = ordinary_kriging(pts, kModel, grid_over(0, 0, 0.5, 50, 50), nb, 2);

    auto moved = pts;
    for (auto& p : moved) {
      p.x += 1000.0;
      p.y -= 500.0;
    }
    const auto shifted = ordinary_kriging(moved, kModel, grid_over(1000.0, -500.0, 0.5, 50, 50), nb, 2);
    auto plus = pts;
    for (auto& p : plus) p.z += 6.5;
    const auto lifted = ordinary_kriging(plus, kModel, grid_over(0, 0, 0.5, 50, 50), nb, 2);
    for (std::size_t i = 0; i < base.raster.values.size(); ++i) {
      const double v = base.raster.values[i];
      if (base.raster.is_nodata(v)) {
        CHECK(shifted.raster.is_nodata(shifted.raster.values[i]));
        continue;
      }
      REQUIRE(std::abs(shifted.raster.values[i] - v) < 1e-9 * std::max(1.0, std::abs(v)));
      REQUIRE(std::abs(lifted.raster.values[i] - (v + 6.5)) < 1e-9 * std::max(1.0, std::abs(v)));
    }
  }

  TEST_CASE("output is independent of the thread count") {
    auto pts = random_points(44, 200, 30);
    Rng rng(6);
    for (auto& p : pts) p.z = rng.normal(10, 2);
    const auto g = grid_over(-2, -2, 0.5, 68, 68);
    const auto one = ordinary_kriging(pts, kModel, g, {16, 6.0}, 1);
    const auto four = ordinary_kriging(pts, kModel, g, {16, 6.0}, 4);
    CHECK(one.raster.values == four.raster.values);
    CHECK(one.max_weight_sum_error == four.max_weight_sum_error);
  }

  TEST_CASE("cells beyond the radius are nodata") {
    const std::vector<PlanarPoint> pts{{0.5, 0.5, 1.0}, {1.5, 0.5, 2.0}};
    const auto r = ordinary_kriging(pts, kModel, grid_over(0, 0, 1, 20, 1), {16, 3.0});
    CHECK_FALSE(r.raster.is_nodata(r.raster.at(0, 0)));
    CHECK(r.raster.is_nodata(r.raster.at(19, 0)));
    CHECK(r.predicted_cells < 20);
  }

  TEST_CASE("singular system reports the cell") {
    const VariogramModel flat{0.0, 0.0, 5.0, true};
    const std::vector<PlanarPoint> pts{{0.5, 0.5, 1.0}, {1.5, 0.5, 2.0}, {2.5, 0.5, 3.0}};
    try {
      ordinary_kriging(pts, flat, grid_over(0, 0, 1, 3, 1), {16, 10.0}, 2);
      FAIL("expected NumericalError");
    } catch (const NumericalError& e) {
      CHECK(std::string(e.what()).find("cell 0") != std::string::npos);
    }
  }

  TEST_CASE("kriging preconditions") {
    const std::vector<PlanarPoint> one{{0, 0, 1}};
    CHECK_THROWS_AS(ordinary_kriging(one, kModel, grid_over(0, 0, 1, 2, 2), {16, 5.0}), InputError);
    const std::vector<PlanarPoint> two{{0, 0, 1}, {1, 1, 2}};
    CHECK_THROWS_AS(ordinary_kriging(two, kModel, grid_over(0, 0, 1, 2, 2), {1, 5.0}), InputError);
  }

  TEST_CASE("default neighbourhood and grid") {
    auto pts = testing::serpentine(200, 30, 10, 5);
    const auto nb = default_neighborhood(pts);
    CHECK(nb.k_nearest == 16);
    CHECK(nb.max_radius == doctest::Approx(10 * 30.0 / 40).epsilon(1e-9));
    PlanarTrack track{{11, geodesy::Hemisphere::north}, pts};
    const auto g = default_grid(track);
    CHECK(g.cell_size == doctest::Approx(0.75).epsilon(1e-9));
    CHECK(g.xll == doctest::Approx(pts[0].x - 2.5 * 0.75));
    CHECK(g.center_x(2) == doctest::Approx(pts[0].x));
    CHECK(default_grid(track, 2.0).cell_size == 2.0);
  }

  TEST_CASE("raster pearson") {
    RasterGrid a;
    a.spec = grid_over(0, 0, 1, 4, 3);
    Rng rng(1);
    for (int i = 0; i < 12; ++i) a.values.push_back(rng.normal(10, 2));
    auto neg = a, off = a;
    for (auto& v : neg.values) v = -v;
    for (auto& v : off.values) v += 3.67;
    CHECK(raster_pearson(a, a).r == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(raster_pearson(a, neg).r == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(raster_pearson(a, off).r == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(raster_pearson(a, off).overlap == 12);

    auto holes = a;
    holes.values[0] = holes.nodata;
    CHECK(raster_pearson(a, holes).overlap == 11);

    auto other = a;
    other.spec.cell_size = 2.0;
    CHECK_THROWS_AS(raster_pearson(a, other), InputError);
    auto empty = a;
    for (auto& v : empty.values) v = empty.nodata;
    CHECK_THROWS_WITH_AS(raster_pearson(a, empty), doctest::Contains("overlap of 0"), InputError);
  }

  TEST_CASE("map statistics skip nodata") {
    RasterGrid r;
    r.spec = grid_over(0, 0, 1, 2, 2);
    r.values = {1.0, 3.0, kDefaultNodata, 5.0};
    const auto s = map_stats(r);
    CHECK(s.stats.n == 3);
    CHECK(s.stats.mean == 3.0);
    CHECK(s.min == 1.0);
    CHECK(s.max == 5.0);
  }

  TEST_CASE("synthetic field is deterministic with the requested moments") {
    const SyntheticField f(9, 20.0, 9.0, 8.0);
    const SyntheticField g(9, 20.0, 9.0, 8.0);
    CHECK(f(3.3, 4.4) == g(3.3, 4.4));
    double sum = 0.0, sq = 0.0;
    const int n = 200;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double v = f(i * 2.0, j * 2.0);
        sum += v;
        sq += v * v;
      }
    const double mean = sum / (n * n);
    const double var = sq / (n * n) - mean * mean;
    CHECK(std::abs(mean - 20.0) < 1.0);
    CHECK(var == doctest::Approx(9.0).epsilon(0.25));
  }
}
