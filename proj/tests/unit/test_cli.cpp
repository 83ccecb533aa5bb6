// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <json.hpp>
#include <sstream>

#include "cli.hpp"
#include "ecasurvey/geostat.hpp"
#include "ecasurvey/ingest.hpp"
#include "ecasurvey/raster.hpp"
#include "ecasurvey/terrasim.hpp"
#include "support.hpp"

using namespace ecasurvey;
using Json = nlohmann::json;

namespace {

struct Outcome {
  int code = -1;
  std::string out, err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Outcome o;
  o.code = cli::run(args, out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

Json load_json(const std::filesystem::path& p) { return Json::parse(testing::slurp(p.string())); }

std::string emi_csv(int n, double t0) {
  std::ostringstream ss;
  ss << "t_s,cond_mS_per_m,inphase_ppt\n";
  for (int i = 0; i < n; ++i) ss << t0 + 0.1 * i << ',' << 20 + i << ",0.5\n";
  return ss.str();
}

std::string gnss_csv(const std::vector<double>& times) {
  std::ostringstream ss;
  ss.precision(10);
  ss << "t_s,lat_deg,lon_deg,alt_m,fix_quality\n";
  for (double t : times) ss << t << ',' << 33.97276 + 1e-6 * t << ",-117.320437,300,rtk_fixed\n";
  return ss.str();
}

void write_track(const std::filesystem::path& p, const SurveyTrack& t) {
  std::ostringstream ss;
  write_track_csv(ss, t);
  testing::spit(p.string(), ss.str());
}

void write_heightmap(const std::filesystem::path& p, const terrasim::Heightmap& h) {
  std::ostringstream ss;
  terrasim::write_heightmap_asc(ss, h);
  testing::spit(p.string(), ss.str());
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("version, help and parse errors") {
    const auto v = run({"--version"});
    CHECK(v.code == cli::kOk);
    CHECK(v.out.find("ecasurvey ") != std::string::npos);

    const auto j = run({"--json"});
    REQUIRE(j.code == cli::kOk);
    const auto doc = Json::parse(j.out);
    std::vector<std::string> names;
    for (const auto& s : doc["subcommands"]) names.push_back(s["name"]);
    CHECK(names == std::vector<std::string>{"georef", "calibrate", "recommend", "krige", "compare", "simulate"});
    CHECK(doc["exit_codes"]["4"].is_string());

    CHECK(run({"simulate", "--bogus"}).code == cli::kInputError);
    CHECK(run({"calibrate", "--out", "x.json"}).code == cli::kInputError);
  }

  TEST_CASE("georef full coverage, empty result and missing file") {
    const auto dir = testing::scratch_dir("cli_georef");
    testing::spit((dir / "emi.csv").string(), emi_csv(11, 1.0));
    testing::spit((dir / "gnss.csv").string(), gnss_csv({0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0}));
    const auto ok = run({"georef", "--emi", (dir / "emi.csv").string(), "--gnss", (dir / "gnss.csv").string(),
                         "--out", (dir / "track.csv").string(), "--field-id", "F1"});
    REQUIRE(ok.code == cli::kOk);
    CHECK(ok.out.find("samples 11, kept 11, dropped 0") != std::string::npos);
    std::istringstream in(testing::slurp((dir / "track.csv").string()));
    CHECK(read_track_csv(in).samples.size() == 11);

    testing::spit((dir / "sparse.csv").string(), gnss_csv({0.0, 10.0}));
    const auto empty = run({"georef", "--emi", (dir / "emi.csv").string(), "--gnss", (dir / "sparse.csv").string(),
                            "--out", (dir / "none.csv").string(), "--max-gap", "1"});
    CHECK(empty.code == cli::kEmptyResult);

    const auto missing = run({"georef", "--emi", (dir / "nope.csv").string(), "--gnss",
                              (dir / "gnss.csv").string(), "--out", (dir / "x.csv").string()});
    CHECK(missing.code == cli::kInputError);
    CHECK(missing.err.find("nope.csv") != std::string::npos);

    testing::spit((dir / "bad.csv").string(), "t_s,cond_mS_per_m,inphase_ppt\n1,2,3\n2,x,3\n");
    const auto bad = run({"georef", "--emi", (dir / "bad.csv").string(), "--gnss", (dir / "gnss.csv").string(),
                          "--out", (dir / "x.csv").string()});
    CHECK(bad.code == cli::kInputError);
    CHECK(bad.err.find("bad.csv") != std::string::npos);
    CHECK(bad.err.find("line 3") != std::string::npos);
  }

  TEST_CASE("calibrate the shipped table") {
    const auto dir = testing::scratch_dir("cli_calibrate");
    const auto r = run({"calibrate", "--table", testing::source_path("data/table1_interference.csv"), "--out",
                        (dir / "cal.json").string()});
    REQUIRE(r.code == cli::kOk);
    CHECK(r.out.rfind("d_b_m,pcc,slope,intercept,mean,sigma,error_pct\n", 0) == 0);
    const auto doc = load_json(dir / "cal.json");
    bool found = false;
    for (const auto& g : doc["groups"]) {
      if (g["name"] != "bare") continue;
      for (const auto& e : g["per_distance"])
        if (std::abs(e["d_b_m"].get<double>() - 0.2) < 1e-9) {
          CHECK(std::abs(e["stats"]["mean"].get<double>() - 74.46) <= 0.01);
          found = true;
        }
    }
    CHECK(found);
  }

  TEST_CASE("calibrate identity column and ragged input") {
    const auto dir = testing::scratch_dir("cli_calibrate_identity");
    testing::spit((dir / "id.csv").string(), "baseline,0.5\n1,1\n2,2\n4,4\n7,7\n");
    REQUIRE(run({"calibrate", "--table", (dir / "id.csv").string(), "--out", (dir / "id.json").string()}).code ==
            cli::kOk);
    const auto entry = load_json(dir / "id.json")["per_distance"][0];
    CHECK(entry["regression"]["slope"].get<double>() == doctest::Approx(1.0));
    CHECK(std::abs(entry["regression"]["intercept"].get<double>()) < 1e-12);

    testing::spit((dir / "ragged.csv").string(), "baseline,0.5,0.6\n1,1,1\n2,2\n");
    const auto bad = run({"calibrate", "--table", (dir / "ragged.csv").string(), "--out", (dir / "r.json").string()});
    CHECK(bad.code == cli::kInputError);
    CHECK(bad.err.find("line 3") != std::string::npos);
  }

  TEST_CASE("recommend from calibration and sweep") {
    const auto dir = testing::scratch_dir("cli_recommend");
    REQUIRE(run({"calibrate", "--table", testing::source_path("data/table1_interference.csv"), "--out",
                 (dir / "cal.json").string()})
                .code == cli::kOk);
    const auto sim = run({"simulate", "--sweep", "--out", (dir / "reports.json").string()});
    REQUIRE(sim.code == cli::kOk);
    CHECK(sim.out.rfind("# terrain=rocky seed=1", 0) == 0);
    const auto rec = run({"recommend", "--calibration", (dir / "cal.json").string(), "--reports",
                          (dir / "reports.json").string(), "--out", (dir / "rec.json").string()});
    REQUIRE(rec.code == cli::kOk);
    CHECK(rec.out.find("recommended placement: 0.60 m, 0.06 m") != std::string::npos);
    const auto doc = load_json(dir / "rec.json");
    CHECK(doc["d_b_m"].get<double>() == doctest::Approx(0.6));
    CHECK(doc["d_h_m"].get<double>() == doctest::Approx(0.06));

    const auto strict = run({"recommend", "--calibration", (dir / "cal.json").string(), "--reports",
                             (dir / "reports.json").string(), "--pcc-min", "1.1"});
    CHECK(strict.code == cli::kInfeasible);
    CHECK(strict.err.find("pcc_min") != std::string::npos);
  }

  TEST_CASE("recommend echoes a single candidate") {
    const auto dir = testing::scratch_dir("cli_recommend_single");
    testing::spit((dir / "t.csv").string(), "baseline,0.5\n1,1.1\n2,2.1\n4,3.9\n7,7.2\n");
    REQUIRE(run({"calibrate", "--table", (dir / "t.csv").string(), "--out", (dir / "cal.json").string()}).code ==
            cli::kOk);
    REQUIRE(run({"simulate", "--terrain", "smooth", "--width", "20", "--height", "20", "--d-b", "0.5", "--d-h",
                 "0.11", "--out", (dir / "rep.json").string()})
                .code == cli::kOk);
    const auto rec = run({"recommend", "--calibration", (dir / "cal.json").string(), "--reports",
                          (dir / "rep.json").string()});
    REQUIRE(rec.code == cli::kOk);
    CHECK(rec.out.find("recommended placement: 0.50 m, 0.11 m") != std::string::npos);
  }

  TEST_CASE("krige with pinned parameters is exact at sample cells") {
    const auto dir = testing::scratch_dir("cli_krige");
    const geostat::SyntheticField field(3, 25.0, 4.0, 6.0);
    std::vector<geostat::PlanarPoint> pts;
    for (int j = 0; j < 6; ++j)
      for (int i = 0; i < 10; ++i) {
        const int col = j % 2 ? 9 - i : i;
        pts.push_back({2.0 * col, 2.0 * j, field(2.0 * col, 2.0 * j)});
      }
    write_track(dir / "track.csv", testing::track_from_planar(pts));
    const auto r = run({"krige", "--track", (dir / "track.csv").string(), "--out", (dir / "map.asc").string(),
                        "--nugget", "0", "--sill", "4", "--range", "12", "--threads", "3"});
    REQUIRE(r.code == cli::kOk);
    const auto side = load_json(dir / "map.json");
    CHECK_FALSE(side["fitted"].get<bool>());
    CHECK(side["model"]["nugget"].get<double>() == 0.0);
    CHECK(side["model"]["sill"].get<double>() == 4.0);
    CHECK(side["model"]["range_m"].get<double>() == 12.0);
    CHECK(side["max_weight_sum_error"].get<double>() < 1e-9);

    const auto raster = load_raster((dir / "map.asc").string());
    CHECK(raster.spec.zone.zone == 11);
    std::istringstream in(testing::slurp((dir / "track.csv").string()));
    const auto planar = geostat::project_track(read_track_csv(in));
    for (const auto& p : planar.points) {
      const auto col = static_cast<std::size_t>(std::floor((p.x - raster.spec.xll) / raster.spec.cell_size));
      const auto row = raster.spec.nrows - 1 -
                       static_cast<std::size_t>(std::floor((p.y - raster.spec.yll) / raster.spec.cell_size));
      CHECK(std::abs(raster.at(col, row) - p.z) <= 1e-6 * std::abs(p.z));
    }

    const auto again = run({"krige", "--track", (dir / "track.csv").string(), "--out", (dir / "map2.asc").string(),
                            "--nugget", "0", "--sill", "4", "--range", "12", "--threads", "1"});
    REQUIRE(again.code == cli::kOk);
    CHECK(testing::slurp((dir / "map.asc").string()) == testing::slurp((dir / "map2.asc").string()));
  }

  TEST_CASE("krige failures map to exit codes") {
    const auto dir = testing::scratch_dir("cli_krige_fail");
    write_track(dir / "one.csv", testing::track_from_planar({{0, 0, 5}}));
    CHECK(run({"krige", "--track", (dir / "one.csv").string(), "--out", (dir / "m.asc").string()}).code ==
          cli::kInputError);
    write_track(dir / "three.csv", testing::track_from_planar({{0, 0, 5}, {1, 0, 6}, {2, 0, 7}}));
    CHECK(run({"krige", "--track", (dir / "three.csv").string(), "--out", (dir / "m.asc").string(), "--nugget",
               "1"})
              .code == cli::kInputError);
    const auto singular = run({"krige", "--track", (dir / "three.csv").string(), "--out", (dir / "m.asc").string(),
                               "--nugget", "0", "--sill", "0", "--range", "5"});
    CHECK(singular.code == cli::kNumerical);
    CHECK(singular.err.find("cell") != std::string::npos);
  }

  TEST_CASE("compare identical tracks and shifted rasters") {
    const auto dir = testing::scratch_dir("cli_compare");
    const geostat::SyntheticField field(8, 30.0, 9.0, 5.0);
    std::vector<geostat::PlanarPoint> pts = testing::serpentine(300, 30, 12, 6);
    for (auto& p : pts) p.z = field(p.x, p.y);
    write_track(dir / "a.csv", testing::track_from_planar(pts));

    RasterGrid ra;
    ra.spec.zone = {11, geodesy::Hemisphere::north};
    ra.spec.ncols = 8;
    ra.spec.nrows = 5;
    ra.spec.cell_size = 1.0;
    for (std::size_t i = 0; i < 40; ++i) ra.values.push_back(field(1.0 * (i % 8), 1.0 * (i / 8)));
    auto rb = ra;
    for (auto& v : rb.values) v += 2.5;
    save_raster((dir / "a.asc").string(), ra);
    save_raster((dir / "b.asc").string(), rb);

    const auto r = run({"compare", "--track-a", (dir / "a.csv").string(), "--track-b", (dir / "a.csv").string(),
                        "--raster-a", (dir / "a.asc").string(), "--raster-b", (dir / "b.asc").string(), "--out",
                        (dir / "cmp.json").string()});
    REQUIRE(r.code == cli::kOk);
    const auto doc = load_json(dir / "cmp.json");
    CHECK(doc["pcc_filtered"].get<double>() == doctest::Approx(1.0));
    CHECK(doc["pcc_raw"].get<double>() == doctest::Approx(1.0));
    CHECK(doc["offset_mS_per_m"].get<double>() == 0.0);
    CHECK(doc["pixel_pcc"].get<double>() == doctest::Approx(1.0));
    CHECK(doc["pixel_offset_mS_per_m"].get<double>() == doctest::Approx(-2.5));
    CHECK(doc["polyfit_a"]["coefficients"].size() == 9);

    auto empty = ra;
    for (auto& v : empty.values) v = empty.nodata;
    save_raster((dir / "empty.asc").string(), empty);
    const auto disjoint = run({"compare", "--track-a", (dir / "a.csv").string(), "--track-b",
                               (dir / "a.csv").string(), "--raster-a", (dir / "a.asc").string(), "--raster-b",
                               (dir / "empty.asc").string(), "--out", (dir / "cmp2.json").string()});
    CHECK(disjoint.code == cli::kInputError);
    CHECK(disjoint.err.find("overlap of 0") != std::string::npos);

    auto moved = ra;
    moved.spec.xll += 5.0;
    save_raster((dir / "moved.asc").string(), moved);
    CHECK(run({"compare", "--track-a", (dir / "a.csv").string(), "--track-b", (dir / "a.csv").string(),
               "--raster-a", (dir / "a.asc").string(), "--raster-b", (dir / "moved.asc").string(), "--out",
               (dir / "cmp3.json").string()})
              .code == cli::kInputError);
  }

  TEST_CASE("simulate on flat, trench and out-of-extent inputs") {
    const auto dir = testing::scratch_dir("cli_simulate");
    write_heightmap(dir / "flat.asc", terrasim::Heightmap::flat(201, 101, 0.05));
    testing::spit((dir / "traj.csv").string(), "x_m,y_m\n1,2.5\n9,2.5\n");
    const auto flat = run({"simulate", "--heightmap", (dir / "flat.asc").string(), "--trajectory",
                           (dir / "traj.csv").string(), "--out", (dir / "flat.json").string(), "--clearance-csv",
                           (dir / "flat_clearance.csv").string()});
    REQUIRE(flat.code == cli::kOk);
    const auto rep = load_json(dir / "flat.json")["reports"][0];
    CHECK(rep["mean_dev_cm"].get<double>() == 0.0);
    CHECK(rep["sigma_dev_cm"].get<double>() == 0.0);
    CHECK(rep["collision_count"].get<int>() == 0);
    CHECK(testing::slurp((dir / "flat_clearance.csv").string()).rfind("s_m,clearance_m\n", 0) == 0);

    auto trench = terrasim::Heightmap::flat(201, 101, 0.05);
    for (std::size_t r = 0; r < trench.nrows(); ++r)
      for (std::size_t c = 0; c < trench.ncols(); ++c)
        if (c >= 100 && c <= 104) trench.at(c, r) = 0.12;
    write_heightmap(dir / "trench.asc", trench);
    const auto hit = run({"simulate", "--heightmap", (dir / "trench.asc").string(), "--trajectory",
                          (dir / "traj.csv").string(), "--out", (dir / "trench.json").string()});
    REQUIRE(hit.code == cli::kOk);
    CHECK(load_json(dir / "trench.json")["reports"][0]["collision_count"].get<int>() >= 1);

    testing::spit((dir / "far.csv").string(), "x_m,y_m\n1,2.5\n30,2.5\n");
    CHECK(run({"simulate", "--heightmap", (dir / "flat.asc").string(), "--trajectory", (dir / "far.csv").string(),
               "--out", (dir / "far.json").string()})
              .code == cli::kInputError);
    CHECK(run({"simulate", "--heightmap", (dir / "flat.asc").string(), "--out", (dir / "x.json").string()}).code ==
          cli::kInputError);
  }

  TEST_CASE("sweep csv is monotone per height and byte-identical on rerun") {
    const auto dir = testing::scratch_dir("cli_sweep");
    const std::vector<std::string> args{"simulate", "--sweep", "--terrain", "rocky", "--seed", "1",
                                        "--out", (dir / "a.json").string(), "--sweep-csv",
                                        (dir / "a.csv").string()};
    REQUIRE(run(args).code == cli::kOk);
    auto again = args;
    again[7] = (dir / "b.json").string();
    again[9] = (dir / "b.csv").string();
    REQUIRE(run(again).code == cli::kOk);
    CHECK(testing::slurp((dir / "a.json").string()) == testing::slurp((dir / "b.json").string()));
    CHECK(testing::slurp((dir / "a.csv").string()) == testing::slurp((dir / "b.csv").string()));

    const auto doc = load_json(dir / "a.json");
    REQUIRE(doc["reports"].size() == 8);
    for (double d_h : {0.06, 0.11}) {
      double prev = -1.0;
      for (const auto& e : doc["reports"]) {
        if (std::abs(e["d_h_m"].get<double>() - d_h) > 1e-9) continue;
        CHECK(e["sigma_dev_cm"].get<double>() >= prev);
        prev = e["sigma_dev_cm"].get<double>();
      }
    }
    const auto csv = testing::slurp((dir / "a.csv").string());
    CHECK(csv.find("config,d_b_m,d_h_m,mean_dev_cm,sigma_dev_cm") != std::string::npos);
    CHECK(csv.find("60cm - 6cm") != std::string::npos);
  }

  TEST_CASE("config file supplies values and rejects unknown keys") {
    const auto dir = testing::scratch_dir("cli_config");
    testing::spit((dir / "run.toml").string(), "[simulate]\nterrain = \"smooth\"\nwidth = 20\nheight = 20\nd-b = 0.4\n");
    const auto ok = run({"--config", (dir / "run.toml").string(), "simulate", "--out", (dir / "r.json").string()});
    REQUIRE(ok.code == cli::kOk);
    const auto doc = load_json(dir / "r.json");
    CHECK(doc["terrain"] == "smooth");
    CHECK(doc["reports"][0]["d_b_m"].get<double>() == doctest::Approx(0.4));

    const auto flag_wins = run({"--config", (dir / "run.toml").string(), "simulate", "--d-b", "0.7", "--out",
                                (dir / "r2.json").string()});
    REQUIRE(flag_wins.code == cli::kOk);
    CHECK(load_json(dir / "r2.json")["reports"][0]["d_b_m"].get<double>() == doctest::Approx(0.7));

    testing::spit((dir / "bad.toml").string(), "[simulate]\nwobble = 3\n");
    const auto bad = run({"--config", (dir / "bad.toml").string(), "simulate", "--out", (dir / "r3.json").string()});
    CHECK(bad.code == cli::kInputError);
  }
}
