// SPDX-License-Identifier: Apache-2.0
#include "ecasurvey/geostat.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <numbers>
#include <thread>

#include "ecasurvey/error.hpp"
#include "ecasurvey/rng.hpp"

namespace ecasurvey::geostat {

PlanarTrack project_track(const SurveyTrack& track) {
  PlanarTrack out;
  if (track.samples.empty()) return out;
  if (!track.samples.front().position) throw InputError("project_track: sample 0 has no position");
  out.zone = geodesy::zone_of(*track.samples.front().position);
  out.points.reserve(track.samples.size());
  for (std::size_t i = 0; i < track.samples.size(); ++i) {
    const auto& s = track.samples[i];
    if (!s.position) throw InputError("project_track: sample " + std::to_string(i) + " has no position");
    const auto u = geodesy::wgs84_to_utm(*s.position, out.zone);
    out.points.push_back({u.easting, u.northing, s.conductivity});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Empirical variogram

EmpiricalVariogram empirical_variogram(std::span<const PlanarPoint> points, double lag_width,
                                       double max_lag) {
  if (points.size() < 2) throw InputError("empirical_variogram: need at least 2 samples");
  if (!(lag_width > 0.0) || !(max_lag > 0.0))
    throw InputError("empirical_variogram: lag_width and max_lag must be positive");
  const auto nbins = static_cast<std::size_t>(std::floor(max_lag / lag_width)) + 1;
  std::vector<double> sum_sq(nbins, 0.0), sum_h(nbins, 0.0);
  std::vector<std::size_t> count(nbins, 0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      const double h = std::hypot(points[i].x - points[j].x, points[i].y - points[j].y);
      if (h > max_lag) continue;
      const auto k = std::min(static_cast<std::size_t>(std::floor(h / lag_width)), nbins - 1);
      const double dz = points[i].z - points[j].z;
      sum_sq[k] += dz * dz;
      sum_h[k] += h;
      ++count[k];
    }
  }
  EmpiricalVariogram ev;
  ev.lag_width = lag_width;
  ev.max_lag = max_lag;
  for (std::size_t k = 0; k < nbins; ++k) {
    if (count[k] == 0) continue;
    const double n = static_cast<double>(count[k]);
    ev.bins.push_back({sum_h[k] / n, sum_sq[k] / (2.0 * n), count[k]});
  }
  return ev;
}

EmpiricalVariogram empirical_variogram(const SurveyTrack& track, double lag_width, double max_lag) {
  return empirical_variogram(project_track(track).points, lag_width, max_lag);
}

// ---------------------------------------------------------------------------
// Exponential model and fit

double VariogramModel::gamma(double h) const {
  if (h <= 0.0) return 0.0;
  return nugget + partial_sill * (1.0 - std::exp(-3.0 * h / range));
}

void validate(const VariogramModel& m) {
  if (!std::isfinite(m.nugget) || !std::isfinite(m.partial_sill) || !std::isfinite(m.range))
    throw InputError("variogram model parameters must be finite");
  if (m.nugget < 0.0 || m.partial_sill < 0.0) throw InputError("nugget and partial sill must be >= 0");
  if (!(m.range > 0.0)) throw InputError("variogram range must be positive");
}

double cressie_objective(const EmpiricalVariogram& ev, const VariogramModel& m) {
  double gmax = 0.0;
  for (const auto& b : ev.bins) gmax = std::max(gmax, b.gamma);
  const double floor = std::max(gmax, 1.0) * 1e-12;
  double sum = 0.0;
  for (const auto& b : ev.bins) {
    const double g = std::max(m.gamma(b.lag_center), floor);
    const double r = b.gamma - g;
    sum += static_cast<double>(b.pair_count) * r * r / (g * g);
  }
  return sum;
}

namespace {

// Parameters in units scaled by the largest bin value and the lag span:
// (nugget / gmax, partial_sill / gmax, log(range / hmax)).
using Vec3 = std::array<double, 3>;

struct ScaledProblem {
  std::vector<double> lag;    // h / hmax
  std::vector<double> gamma;  // gamma / gmax
  std::vector<double> weight; // pair counts

  double model(const Vec3& p, double h) const {
    return std::abs(p[0]) + std::abs(p[1]) * (1.0 - std::exp(-3.0 * h / std::exp(p[2])));
  }
  double operator()(const Vec3& p) const {
    double sum = 0.0;
    for (std::size_t k = 0; k < lag.size(); ++k) {
      const double g = std::max(model(p, lag[k]), 1e-12);
      const double r = gamma[k] / g - 1.0;
      sum += weight[k] * r * r;
    }
    return sum;
  }
};

struct NelderMeadResult {
  Vec3 x;
  double f;
};

NelderMeadResult nelder_mead(const ScaledProblem& f, const Vec3& start, double rel_tol, int max_iter) {
  std::array<Vec3, 4> v;
  std::array<double, 4> fv;
  v[0] = start;
  for (int i = 0; i < 3; ++i) {
    v[i + 1] = start;
    const double step = i == 2 ? 0.25 : std::max(0.1 * std::abs(start[i]), 0.05);
    v[i + 1][i] += step;
  }
  for (int i = 0; i < 4; ++i) fv[i] = f(v[i]);

  for (int iter = 0; iter < max_iter; ++iter) {
    std::array<int, 4> order{0, 1, 2, 3};
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return fv[a] < fv[b] || (fv[a] == fv[b] && a < b);
    });
    std::array<Vec3, 4> sv;
    std::array<double, 4> sf;
    for (int i = 0; i < 4; ++i) {
      sv[i] = v[order[i]];
      sf[i] = fv[order[i]];
    }
    v = sv;
    fv = sf;

    // Relative parameter spread of the simplex (log-range is already relative).
    double spread = 0.0;
    for (int i = 1; i < 4; ++i) {
      for (int d = 0; d < 3; ++d) {
        const double scale = d == 2 ? 1.0 : std::max(std::abs(v[0][d]), 1e-3);
        spread = std::max(spread, std::abs(v[i][d] - v[0][d]) / scale);
      }
    }
    if (spread < rel_tol) break;

    Vec3 centroid{0.0, 0.0, 0.0};
    for (int i = 0; i < 3; ++i)
      for (int d = 0; d < 3; ++d) centroid[d] += v[i][d] / 3.0;
    const auto along = [&](double t) {
      Vec3 p;
      for (int d = 0; d < 3; ++d) p[d] = centroid[d] + t * (v[3][d] - centroid[d]);
      return p;
    };
    const Vec3 xr = along(-1.0);
    const double fr = f(xr);
    if (fr < fv[0]) {
      const Vec3 xe = along(-2.0);
      const double fe = f(xe);
      if (fe < fr) {
        v[3] = xe;
        fv[3] = fe;
      } else {
        v[3] = xr;
        fv[3] = fr;
      }
    } else if (fr < fv[2]) {
      v[3] = xr;
      fv[3] = fr;
    } else {
      const bool outside = fr < fv[3];
      const Vec3 xc = along(outside ? -0.5 : 0.5);
      const double fc = f(xc);
      if (fc < (outside ? fr : fv[3])) {
        v[3] = xc;
        fv[3] = fc;
      } else {
        for (int i = 1; i < 4; ++i) {
          for (int d = 0; d < 3; ++d) v[i][d] = v[0][d] + 0.5 * (v[i][d] - v[0][d]);
          fv[i] = f(v[i]);
        }
      }
    }
  }
  int best = 0;
  for (int i = 1; i < 4; ++i)
    if (fv[i] < fv[best]) best = i;
  return {v[best], fv[best]};
}

}  // namespace

VariogramModel fit_exponential(const EmpiricalVariogram& ev, const FitOptions& options) {
  if (ev.bins.size() < 3)
    throw InputError("fit_exponential: need at least 3 bins, got " + std::to_string(ev.bins.size()));
  double gmax = 0.0;
  double hmax = ev.max_lag;
  for (const auto& b : ev.bins) {
    gmax = std::max(gmax, b.gamma);
    hmax = std::max(hmax, b.lag_center);
  }
  if (!(hmax > 0.0)) throw InputError("fit_exponential: lags must be positive");
  if (gmax == 0.0) {
    VariogramModel m;
    m.nugget = 0.0;
    m.partial_sill = 0.0;
    m.range = ev.max_lag > 0.0 ? ev.max_lag : hmax;
    m.degenerate = true;
    return m;
  }

  ScaledProblem problem;
  for (const auto& b : ev.bins) {
    problem.lag.push_back(b.lag_center / hmax);
    problem.gamma.push_back(b.gamma / gmax);
    problem.weight.push_back(static_cast<double>(b.pair_count));
  }

  // Coarse grid seed.
  static constexpr double kNugget[] = {0.0, 0.05, 0.15, 0.3, 0.5, 0.7};
  static constexpr double kSill[] = {0.1, 0.3, 0.5, 0.7, 0.9, 1.1};
  static constexpr double kRange[] = {0.05, 0.1, 0.2, 0.3, 0.5, 0.75, 1.0, 1.5, 2.0};
  Vec3 best{0.1, 0.9, 0.0};
  double best_f = std::numeric_limits<double>::infinity();
  for (double n : kNugget)
    for (double s : kSill)
      for (double r : kRange) {
        const Vec3 p{n, s, std::log(r)};
        const double f = problem(p);
        if (f < best_f) {
          best_f = f;
          best = p;
        }
      }

  // Local refinement; restart from the incumbent until it stops moving.
  for (int restart = 0; restart < 8; ++restart) {
    const auto r = nelder_mead(problem, best, options.rel_tol, options.max_iterations);
    const bool improved = r.f < best_f;
    double moved = 0.0;
    for (int d = 0; d < 3; ++d) {
      const double scale = d == 2 ? 1.0 : std::max(std::abs(best[d]), 1e-3);
      moved = std::max(moved, std::abs(r.x[d] - best[d]) / scale);
    }
    if (improved) {
      best = r.x;
      best_f = r.f;
    }
    if (!improved || moved < options.rel_tol) break;
  }

  VariogramModel m;
  m.nugget = std::abs(best[0]) * gmax;
  m.partial_sill = std::abs(best[1]) * gmax;
  m.range = std::exp(best[2]) * hmax;
  return m;
}

// ---------------------------------------------------------------------------
// Neighbour search

namespace {

class PointIndex {
 public:
  PointIndex(std::span<const PlanarPoint> pts, double bucket_hint) : pts_(pts) {
    minx_ = miny_ = std::numeric_limits<double>::infinity();
    double maxx = -minx_, maxy = -miny_;
    for (const auto& p : pts) {
      minx_ = std::min(minx_, p.x);
      miny_ = std::min(miny_, p.y);
      maxx = std::max(maxx, p.x);
      maxy = std::max(maxy, p.y);
    }
    const double span = std::max({maxx - minx_, maxy - miny_, 1e-9});
    // Keep the bucket count within a few per point.
    const double min_bucket = span / std::sqrt(4.0 * static_cast<double>(pts.size()) + 1.0);
    bucket_ = std::max(bucket_hint > 0.0 && std::isfinite(bucket_hint) ? bucket_hint : 0.0, min_bucket);
    nx_ = static_cast<long>(std::floor((maxx - minx_) / bucket_)) + 1;
    ny_ = static_cast<long>(std::floor((maxy - miny_) / bucket_)) + 1;
    cells_.assign(static_cast<std::size_t>(nx_ * ny_), {});
    for (std::size_t i = 0; i < pts.size(); ++i)
      cells_[static_cast<std::size_t>(cell_y(pts[i].y) * nx_ + cell_x(pts[i].x))].push_back(i);
  }

  /// Up to k nearest within radius, ordered by (distance, index).
  std::vector<std::pair<double, std::size_t>> query(double x, double y, std::size_t k,
                                                    double radius) const {
    std::vector<std::pair<double, std::size_t>> cand;
    const long bx = static_cast<long>(std::floor((x - minx_) / bucket_));
    const long by = static_cast<long>(std::floor((y - miny_) / bucket_));
    const double r2 = radius * radius;
    const long max_ring = std::max({std::abs(bx) + nx_, std::abs(by) + ny_}) + 1;
    for (long ring = 0; ring <= max_ring; ++ring) {
      const double ring_min = (static_cast<double>(ring) - 1.0) * bucket_;
      if (ring_min > radius) break;
      if (cand.size() >= k && ring_min > 0.0) {
        std::nth_element(cand.begin(), cand.begin() + static_cast<long>(k - 1), cand.end());
        if (cand[k - 1].first <= ring_min * ring_min) break;
      }
      for (long cy = by - ring; cy <= by + ring; ++cy) {
        if (cy < 0 || cy >= ny_) continue;
        const bool edge_row = cy == by - ring || cy == by + ring;
        for (long cx = bx - ring; cx <= bx + ring; cx += edge_row ? 1 : 2 * ring) {
          if (cx >= 0 && cx < nx_) {
            for (std::size_t i : cells_[static_cast<std::size_t>(cy * nx_ + cx)]) {
              const double dx = pts_[i].x - x, dy = pts_[i].y - y;
              const double d2 = dx * dx + dy * dy;
              if (d2 <= r2) cand.emplace_back(d2, i);
            }
          }
          if (!edge_row && ring == 0) break;
        }
      }
    }
    const std::size_t take = std::min(k, cand.size());
    std::partial_sort(cand.begin(), cand.begin() + static_cast<long>(take), cand.end());
    cand.resize(take);
    for (auto& c : cand) c.first = std::sqrt(c.first);
    return cand;
  }

 private:
  long cell_x(double x) const {
    return std::clamp(static_cast<long>(std::floor((x - minx_) / bucket_)), 0L, nx_ - 1);
  }
  long cell_y(double y) const {
    return std::clamp(static_cast<long>(std::floor((y - miny_) / bucket_)), 0L, ny_ - 1);
  }

  std::span<const PlanarPoint> pts_;
  double minx_, miny_, bucket_ = 1.0;
  long nx_ = 1, ny_ = 1;
  std::vector<std::vector<std::size_t>> cells_;
};

double median(std::vector<double> v) {
  if (v.empty()) throw InputError("median of empty set");
  const auto mid = v.begin() + static_cast<long>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (v.size() % 2 == 1) return *mid;
  const double hi = *mid;
  const double lo = *std::max_element(v.begin(), mid);
  return 0.5 * (lo + hi);
}

}  // namespace

std::vector<PlanarPoint> deduplicate(std::span<const PlanarPoint> points) {
  std::map<std::pair<double, double>, std::size_t> slot;
  std::vector<PlanarPoint> out;
  std::vector<std::size_t> counts;
  for (const auto& p : points) {
    const auto [it, inserted] = slot.try_emplace({p.x, p.y}, out.size());
    if (inserted) {
      out.push_back(p);
      counts.push_back(1);
    } else {
      out[it->second].z += p.z;
      ++counts[it->second];
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i].z /= static_cast<double>(counts[i]);
  return out;
}

Neighborhood default_neighborhood(std::span<const PlanarPoint> points) {
  const auto unique = deduplicate(points);
  if (unique.size() < 2) return {16, std::numeric_limits<double>::infinity()};
  PointIndex index(unique, 0.0);
  std::vector<double> nn;
  nn.reserve(unique.size());
  for (std::size_t i = 0; i < unique.size(); ++i) {
    const auto q = index.query(unique[i].x, unique[i].y, 2, std::numeric_limits<double>::infinity());
    for (const auto& [d, j] : q)
      if (j != i) {
        nn.push_back(d);
        break;
      }
  }
  return {16, 10.0 * median(nn)};
}

GridSpec default_grid(const PlanarTrack& track, double cell_size) {
  const auto& pts = track.points;
  if (pts.size() < 2) throw InputError("default_grid: need at least 2 samples");
  std::vector<double> steps;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double d = std::hypot(pts[i].x - pts[i - 1].x, pts[i].y - pts[i - 1].y);
    if (d > 0.0) steps.push_back(d);
  }
  if (steps.empty()) throw InputError("default_grid: all samples share one location");
  if (cell_size < 0.0 || !std::isfinite(cell_size)) throw InputError("default_grid: cell size must be positive");
  GridSpec g;
  g.zone = track.zone;
  g.cell_size = cell_size > 0.0 ? cell_size : median(steps);
  double minx = pts[0].x, maxx = pts[0].x, miny = pts[0].y, maxy = pts[0].y;
  for (const auto& p : pts) {
    minx = std::min(minx, p.x);
    maxx = std::max(maxx, p.x);
    miny = std::min(miny, p.y);
    maxy = std::max(maxy, p.y);
  }
  // The first cell centre of the unpadded box sits on (minx, miny).
  g.ncols = static_cast<std::size_t>(std::ceil((maxx - minx) / g.cell_size)) + 5;
  g.nrows = static_cast<std::size_t>(std::ceil((maxy - miny) / g.cell_size)) + 5;
  g.xll = minx - 2.5 * g.cell_size;
  g.yll = miny - 2.5 * g.cell_size;
  if (g.cell_count() > 25'000'000)
    throw InputError("default_grid: " + std::to_string(g.cell_count()) +
                     " cells; choose a larger cell size");
  return g;
}

// ---------------------------------------------------------------------------
// Ordinary kriging

namespace {

std::optional<KrigingPrediction> solve_cell(std::span<const PlanarPoint> pts, const PointIndex& index,
                                            const VariogramModel& model, double x, double y,
                                            const Neighborhood& nb, bool& singular) {
  singular = false;
  const auto near = index.query(x, y, nb.k_nearest, nb.max_radius > 0.0 ? nb.max_radius
                                                                        : std::numeric_limits<double>::infinity());
  if (near.empty()) return std::nullopt;
  const auto m = static_cast<Eigen::Index>(near.size());
  Eigen::MatrixXd a(m + 1, m + 1);
  Eigen::VectorXd b(m + 1);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& pi = pts[near[static_cast<std::size_t>(i)].second];
    for (Eigen::Index j = i; j < m; ++j) {
      const auto& pj = pts[near[static_cast<std::size_t>(j)].second];
      const double g = i == j ? 0.0 : model.gamma(std::hypot(pi.x - pj.x, pi.y - pj.y));
      a(i, j) = g;
      a(j, i) = g;
    }
    a(i, m) = 1.0;
    a(m, i) = 1.0;
    b(i) = model.gamma(near[static_cast<std::size_t>(i)].first);
  }
  a(m, m) = 0.0;
  b(m) = 1.0;

  const Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (!lu.isInvertible()) {
    singular = true;
    return std::nullopt;
  }
  const Eigen::VectorXd w = lu.solve(b);
  KrigingPrediction pred;
  pred.lagrange = w(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto idx = near[static_cast<std::size_t>(i)].second;
    pred.neighbors.push_back(idx);
    pred.weights.push_back(w(i));
    pred.value += w(i) * pts[idx].z;
  }
  return pred;
}

}  // namespace

std::optional<KrigingPrediction> krige_at(std::span<const PlanarPoint> unique_points,
                                          const VariogramModel& model, double x, double y,
                                          const Neighborhood& nb) {
  validate(model);
  if (unique_points.empty()) throw InputError("krige_at: no samples");
  if (nb.k_nearest < 1) throw InputError("krige_at: k_nearest must be >= 1");
  const PointIndex index(unique_points, nb.max_radius > 0.0 ? nb.max_radius / 2.0 : 0.0);
  bool singular = false;
  auto pred = solve_cell(unique_points, index, model, x, y, nb, singular);
  if (singular) throw NumericalError("singular kriging system at (" + std::to_string(x) + ", " +
                                     std::to_string(y) + ")");
  return pred;
}

KrigingResult ordinary_kriging(std::span<const PlanarPoint> points, const VariogramModel& model,
                               const GridSpec& grid, const Neighborhood& nb, unsigned threads) {
  validate(model);
  if (points.size() < 2) throw InputError("ordinary_kriging: need at least 2 samples");
  if (nb.k_nearest < 2) throw InputError("ordinary_kriging: k_nearest must be >= 2");
  if (!(grid.cell_size > 0.0) || grid.ncols == 0 || grid.nrows == 0)
    throw InputError("ordinary_kriging: empty or invalid grid");
  const auto unique = deduplicate(points);
  const PointIndex index(unique, nb.max_radius > 0.0 && std::isfinite(nb.max_radius)
                                     ? nb.max_radius / 2.0
                                     : 0.0);

  KrigingResult result;
  result.raster.spec = grid;
  result.raster.values.assign(grid.cell_count(), result.raster.nodata);
  std::vector<double> weight_err(grid.cell_count(), 0.0);
  std::vector<char> predicted(grid.cell_count(), 0);

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, grid.nrows));
  std::vector<std::size_t> failed_cell(threads, std::numeric_limits<std::size_t>::max());
  std::vector<std::exception_ptr> failure(threads);

  const auto work = [&](unsigned t) {
    try {
      for (std::size_t row = t; row < grid.nrows; row += threads) {
        for (std::size_t col = 0; col < grid.ncols; ++col) {
          const std::size_t cell = row * grid.ncols + col;
          bool singular = false;
          const auto pred = solve_cell(unique, index, model, grid.center_x(col), grid.center_y(row),
                                       nb, singular);
          if (singular) {
            failed_cell[t] = cell;
            return;
          }
          if (!pred) continue;
          double wsum = 0.0;
          for (double w : pred->weights) wsum += w;
          result.raster.values[cell] = pred->value;
          weight_err[cell] = std::abs(wsum - 1.0);
          predicted[cell] = 1;
        }
      }
    } catch (...) {
      failure[t] = std::current_exception();
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
  }
  for (const auto& f : failure)
    if (f) std::rethrow_exception(f);
  const auto first_fail = *std::min_element(failed_cell.begin(), failed_cell.end());
  if (first_fail != std::numeric_limits<std::size_t>::max())
    throw NumericalError("singular kriging matrix at cell " + std::to_string(first_fail) + " (col " +
                         std::to_string(first_fail % grid.ncols) + ", row " +
                         std::to_string(first_fail / grid.ncols) + ")");
  for (std::size_t c = 0; c < grid.cell_count(); ++c) {
    if (!predicted[c]) continue;
    ++result.predicted_cells;
    result.max_weight_sum_error = std::max(result.max_weight_sum_error, weight_err[c]);
  }
  return result;
}

KrigingResult ordinary_kriging(const SurveyTrack& track, const VariogramModel& model,
                               const GridSpec& grid, const Neighborhood& nb, unsigned threads) {
  const auto planar = project_track(track);
  if (!(planar.zone == grid.zone)) throw InputError("ordinary_kriging: track and grid zones differ");
  return ordinary_kriging(planar.points, model, grid, nb, threads);
}

// ---------------------------------------------------------------------------
// Raster statistics

RasterCorrelation raster_pearson(const RasterGrid& a, const RasterGrid& b) {
  validate(a);
  validate(b);
  if (!a.spec.same_geometry(b.spec)) throw InputError("raster_pearson: grid geometry mismatch");
  std::vector<double> xa, xb;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    if (a.is_nodata(a.values[i]) || b.is_nodata(b.values[i])) continue;
    xa.push_back(a.values[i]);
    xb.push_back(b.values[i]);
  }
  if (xa.size() < 2)
    throw InputError("raster_pearson: overlap of " + std::to_string(xa.size()) +
                     " cells, need at least 2");
  return {pearson(xa, xb), xa.size()};
}

MapStats map_stats(const RasterGrid& r) {
  std::vector<double> v;
  for (double x : r.values)
    if (!r.is_nodata(x)) v.push_back(x);
  if (v.size() < 2) throw InputError("map_stats: fewer than 2 data cells");
  MapStats s;
  s.stats = column_stats(v);
  s.min = *std::min_element(v.begin(), v.end());
  s.max = *std::max_element(v.begin(), v.end());
  return s;
}

// ---------------------------------------------------------------------------
// Synthetic fields

SyntheticField::SyntheticField(std::uint64_t seed, double mean, double variance,
                               double correlation_length, std::size_t modes)
    : mean_(mean), variance_(variance) {
  if (!(correlation_length > 0.0) || variance < 0.0 || modes == 0)
    throw InputError("SyntheticField: bad parameters");
  Rng rng(seed);
  amplitude_ = std::sqrt(2.0 * variance / static_cast<double>(modes));
  modes_.reserve(modes);
  for (std::size_t i = 0; i < modes; ++i) {
    Mode m;
    m.kx = rng.normal() / correlation_length;
    m.ky = rng.normal() / correlation_length;
    m.phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    modes_.push_back(m);
  }
}

double SyntheticField::operator()(double x, double y) const {
  double sum = 0.0;
  for (const auto& m : modes_) sum += std::cos(m.kx * x + m.ky * y + m.phase);
  return mean_ + amplitude_ * sum;
}

std::vector<double> simulate_exponential_field(std::span<const PlanarPoint> locations,
                                               const VariogramModel& model, std::uint64_t seed) {
  validate(model);
  const auto n = static_cast<Eigen::Index>(locations.size());
  Eigen::MatrixXd c(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const auto& p = locations[static_cast<std::size_t>(i)];
      const auto& q = locations[static_cast<std::size_t>(j)];
      const double h = std::hypot(p.x - q.x, p.y - q.y);
      const double cov = i == j ? model.sill() : model.sill() - model.gamma(h);
      c(i, j) = cov;
      c(j, i) = cov;
    }
    c(i, i) += 1e-10 * std::max(model.sill(), 1.0);
  }
  const Eigen::LLT<Eigen::MatrixXd> llt(c);
  if (llt.info() != Eigen::Success) throw NumericalError("covariance matrix is not positive definite");
  Rng rng(seed);
  Eigen::VectorXd e(n);
  for (Eigen::Index i = 0; i < n; ++i) e(i) = rng.normal();
  const Eigen::VectorXd z = llt.matrixL() * e;
  return {z.data(), z.data() + n};
}

}  // namespace ecasurvey::geostat
