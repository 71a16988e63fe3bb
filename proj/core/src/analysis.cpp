#include "farp/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace farp {

std::uint64_t OccupancyGrid::max_count() const {
  return counts.empty() ? 0 : *std::max_element(counts.begin(), counts.end());
}

std::uint64_t OccupancyGrid::total_count() const {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

std::vector<std::uint64_t> OccupancyGrid::masked_counts() const {
  const double cutoff = mask_threshold * static_cast<double>(max_count());
  std::vector<std::uint64_t> masked = counts;
  for (std::uint64_t& c : masked) {
    if (static_cast<double>(c) < cutoff) c = 0;
  }
  return masked;
}

OccupancyGrid occupancy_heatmap(std::span<const std::pair<double, double>> positions,
                                double origin_x, double origin_y, double cell_size,
                                std::uint32_t width, std::uint32_t height,
                                double mask_threshold) {
  if (!(cell_size > 0.0)) throw std::invalid_argument("cell_size must be positive");
  if (width == 0 || height == 0) {
    throw std::invalid_argument("grid dimensions must be positive");
  }
  if (mask_threshold < 0.0) {
    throw std::invalid_argument("mask_threshold must be non-negative");
  }

  OccupancyGrid grid;
  grid.origin_x = origin_x;
  grid.origin_y = origin_y;
  grid.cell_size = cell_size;
  grid.width = width;
  grid.height = height;
  grid.mask_threshold = mask_threshold;
  grid.counts.assign(static_cast<std::size_t>(width) * height, 0);

  for (const auto& [x, y] : positions) {
    if (!std::isfinite(x) || !std::isfinite(y)) {
      throw std::invalid_argument("non-finite position");
    }
    const double fx = std::floor((x - origin_x) / cell_size);
    const double fy = std::floor((y - origin_y) / cell_size);
    if (fx < 0.0 || fy < 0.0 || fx >= static_cast<double>(width) ||
        fy >= static_cast<double>(height)) {
      ++grid.out_of_bounds;
      continue;
    }
    const std::size_t cx = static_cast<std::size_t>(fx);
    const std::size_t cy = static_cast<std::size_t>(fy);
    ++grid.counts[cy * width + cx];
  }
  return grid;
}

EmpiricalDistribution camera_series(const Replay& replay, int order,
                                    CameraAxis axis) {
  if (order < 1 || order > 3) throw std::invalid_argument("order must be 1, 2 or 3");
  if (replay.frames.size() < static_cast<std::size_t>(order)) {
    throw std::invalid_argument("replay too short for order " + std::to_string(order));
  }

  std::vector<double> series;
  series.reserve(replay.frames.size());
  for (const FrameRecord& f : replay.frames) {
    series.push_back(axis == CameraAxis::turn
                         ? static_cast<double>(f.action.mouse_x)
                         : static_cast<double>(f.action.mouse_y));
  }
  for (int k = 1; k < order; ++k) {
    for (std::size_t i = 0; i + 1 < series.size(); ++i) {
      series[i] = series[i + 1] - series[i];
    }
    series.pop_back();
  }
  return {std::move(series), order};
}

Histogram histogram(const EmpiricalDistribution& dist, std::size_t bin_count,
                    double lo, double hi) {
  if (dist.samples.empty()) throw std::invalid_argument("empty distribution");
  if (!(lo < hi)) throw std::invalid_argument("histogram range must have lo < hi");
  if (bin_count == 0) throw std::invalid_argument("bin_count must be >= 1");

  Histogram h;
  h.lo = lo;
  h.hi = hi;
  h.counts.assign(bin_count, 0);
  const double width = (hi - lo) / static_cast<double>(bin_count);
  for (double v : dist.samples) {
    double idx = std::floor((v - lo) / width);
    // out-of-range values are clipped into the end bins
    idx = std::clamp(idx, 0.0, static_cast<double>(bin_count - 1));
    ++h.counts[static_cast<std::size_t>(idx)];
  }
  return h;
}

Histogram default_camera_histogram(const EmpiricalDistribution& dist) {
  constexpr std::size_t kBins = 61;  // odd, so zero sits at a bin centre
  if (dist.order == 1) return histogram(dist, kBins, -15.0, 15.0);
  double extent = 0.0;
  for (double v : dist.samples) extent = std::max(extent, std::abs(v));
  if (extent == 0.0) extent = 1.0;
  return histogram(dist, kBins, -extent, extent);
}

GaussianFit fit_gaussian(const EmpiricalDistribution& dist) {
  if (dist.samples.size() < 2) {
    throw std::invalid_argument("need at least 2 samples for a Gaussian fit");
  }
  const double n = static_cast<double>(dist.samples.size());
  const double mean =
      std::accumulate(dist.samples.begin(), dist.samples.end(), 0.0) / n;
  double var = 0.0;
  for (double v : dist.samples) var += (v - mean) * (v - mean);
  var /= n;  // population variance
  return {mean, std::sqrt(var)};
}

double wasserstein1(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
  if (a.samples.empty() || b.samples.empty()) {
    throw std::invalid_argument("wasserstein1 needs non-empty distributions");
  }
  std::vector<double> xs = a.samples;
  std::vector<double> ys = b.samples;
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());

  // integral of |F_a - F_b| over the merged support; both CDFs are
  // piecewise constant so each segment contributes exactly
  const double na = static_cast<double>(xs.size());
  const double nb = static_cast<double>(ys.size());
  std::size_t i = 0, j = 0;
  double distance = 0.0;
  double prev = std::min(xs[0], ys[0]);
  while (i < xs.size() || j < ys.size()) {
    const double next =
        j == ys.size() ? xs[i] : i == xs.size() ? ys[j] : std::min(xs[i], ys[j]);
    distance += std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb) *
                (next - prev);
    prev = next;
    while (i < xs.size() && xs[i] == next) ++i;
    while (j < ys.size() && ys[j] == next) ++j;
  }
  return distance;
}

EmpiricalDistribution synth_camera_stream(CameraProfile profile, std::size_t n,
                                          std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("need at least one sample");
  std::mt19937_64 rng(seed);
  std::vector<double> samples;
  samples.reserve(n);

  if (profile == CameraProfile::human_like) {
    std::normal_distribution<double> slow(0.0, 1.5);
    for (std::size_t k = 0; k < n; ++k) samples.push_back(slow(rng));
  } else {
    // wide clamped Gaussian plus point masses at the discrete extremes
    std::normal_distribution<double> fast(0.0, 6.0);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (std::size_t k = 0; k < n; ++k) {
      const double u = coin(rng);
      if (u < 0.15) {
        samples.push_back(-15.0);
      } else if (u < 0.30) {
        samples.push_back(15.0);
      } else {
        samples.push_back(std::clamp(fast(rng), -15.0, 15.0));
      }
    }
  }
  return {std::move(samples), 1};
}

// --- exports -----------------------------------------------------------------

std::vector<Polyline> read_map_outline(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open map outline " + path.string());
  std::vector<Polyline> walls;
  std::string line;
  while (std::getline(in, line)) {
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream row(line);
    Polyline poly;
    std::string pair;
    while (row >> pair) {
      const std::size_t comma = pair.find(',');
      if (comma == std::string::npos) {
        throw std::runtime_error("bad outline point '" + pair + "' in " + path.string());
      }
      poly.emplace_back(std::stod(pair.substr(0, comma)),
                        std::stod(pair.substr(comma + 1)));
    }
    if (!poly.empty()) walls.push_back(std::move(poly));
  }
  return walls;
}

void write_grid_csv(std::ostream& out, const OccupancyGrid& grid, bool masked) {
  const std::vector<std::uint64_t> cells = masked ? grid.masked_counts() : grid.counts;
  for (std::uint32_t y = 0; y < grid.height; ++y) {
    for (std::uint32_t x = 0; x < grid.width; ++x) {
      if (x) out << ',';
      out << cells[static_cast<std::size_t>(y) * grid.width + x];
    }
    out << '\n';
  }
}

void write_grid_csv(const std::filesystem::path& path, const OccupancyGrid& grid,
                    bool masked) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_grid_csv(out, grid, masked);
}

std::vector<std::vector<std::uint64_t>> read_grid_csv(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<std::vector<std::uint64_t>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::uint64_t> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) row.push_back(std::stoull(cell));
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw std::runtime_error("ragged grid csv " + path.string());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_histogram_csv(std::ostream& out, const Histogram& hist) {
  out << "bin_lo,bin_hi,count\n";
  const double width = hist.bin_width();
  for (std::size_t i = 0; i < hist.counts.size(); ++i) {
    out << (hist.lo + width * static_cast<double>(i)) << ','
        << (hist.lo + width * static_cast<double>(i + 1)) << ',' << hist.counts[i]
        << '\n';
  }
}

void write_histogram_csv(const std::filesystem::path& path, const Histogram& hist) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_histogram_csv(out, hist);
}

Histogram read_histogram_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "bin_lo,bin_hi,count") {
    throw std::runtime_error("not a histogram csv: " + path.string());
  }
  Histogram h;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream cells(line);
    std::string lo, hi, count;
    if (!std::getline(cells, lo, ',') || !std::getline(cells, hi, ',') ||
        !std::getline(cells, count)) {
      throw std::runtime_error("bad histogram row in " + path.string());
    }
    if (first) {
      h.lo = std::stod(lo);
      first = false;
    }
    h.hi = std::stod(hi);
    h.counts.push_back(std::stoull(count));
  }
  return h;
}

void write_heatmap_svg(const std::filesystem::path& path, const OccupancyGrid& grid,
                       const std::vector<Polyline>& walls) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");

  constexpr double kPixelsPerCell = 8.0;
  const double w = grid.width * kPixelsPerCell;
  const double h = grid.height * kPixelsPerCell;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\""
      << h << "\" viewBox=\"0 0 " << w << ' ' << h << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"black\"/>\n";

  const std::vector<std::uint64_t> cells = grid.masked_counts();
  const std::uint64_t max = grid.max_count();
  for (std::uint32_t y = 0; y < grid.height; ++y) {
    for (std::uint32_t x = 0; x < grid.width; ++x) {
      const std::uint64_t c = cells[static_cast<std::size_t>(y) * grid.width + x];
      if (c == 0) continue;
      const int level = static_cast<int>(
          std::lround(255.0 * static_cast<double>(c) / static_cast<double>(max)));
      out << "<rect x=\"" << x * kPixelsPerCell << "\" y=\"" << y * kPixelsPerCell
          << "\" width=\"" << kPixelsPerCell << "\" height=\"" << kPixelsPerCell
          << "\" fill=\"rgb(" << level << ',' << level << ',' << level << ")\"/>\n";
    }
  }

  // walls are in map units; project through the grid transform
  for (const Polyline& poly : walls) {
    if (poly.size() < 2) continue;
    out << "<polyline fill=\"none\" stroke=\"red\" stroke-width=\"1\" points=\"";
    for (std::size_t k = 0; k < poly.size(); ++k) {
      const double px = (poly[k].first - grid.origin_x) / grid.cell_size * kPixelsPerCell;
      const double py = (poly[k].second - grid.origin_y) / grid.cell_size * kPixelsPerCell;
      if (k) out << ' ';
      out << px << ',' << py;
    }
    out << "\"/>\n";
  }
  out << "</svg>\n";
}

}  // namespace farp
