#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <utility>
#include <vector>

#include "farp/replay.hpp"

namespace farp {

// 2-D visit-frequency grid over map coordinates. Cells with a count below
// mask_threshold * max(counts) are zeroed in the masked view; raw counts
// are kept so masking stays non-destructive.
struct OccupancyGrid {
  double origin_x = 0.0;
  double origin_y = 0.0;
  double cell_size = 1.0;
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::vector<std::uint64_t> counts;  // row-major, index = y * width + x
  double mask_threshold = 0.005;      // fraction of the max cell count
  std::uint64_t out_of_bounds = 0;

  std::uint64_t at(std::uint32_t x, std::uint32_t y) const {
    return counts[static_cast<std::size_t>(y) * width + x];
  }
  std::uint64_t max_count() const;
  std::uint64_t total_count() const;  // in-bounds ingests
  std::vector<std::uint64_t> masked_counts() const;
};

OccupancyGrid occupancy_heatmap(
    std::span<const std::pair<double, double>> positions, double origin_x,
    double origin_y, double cell_size, std::uint32_t width, std::uint32_t height,
    double mask_threshold = 0.005);

// Camera-movement samples at derivative order 1 (per-frame turn deltas,
// angular velocity), 2 (acceleration) or 3 (jerk).
struct EmpiricalDistribution {
  std::vector<double> samples;
  int order = 1;
};

enum class CameraAxis { turn, look };  // mouse_x / mouse_y

EmpiricalDistribution camera_series(const Replay& replay, int order,
                                    CameraAxis axis = CameraAxis::turn);

struct Histogram {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<std::uint64_t> counts;

  double bin_width() const { return (hi - lo) / static_cast<double>(counts.size()); }
};

// Equal-width bins over [lo, hi); out-of-range samples are clipped into the
// end bins so the counts always sum to the sample count.
Histogram histogram(const EmpiricalDistribution& dist, std::size_t bin_count,
                    double lo, double hi);

// 61 bins over (-15, 15) for order 1; symmetric max-|sample| range for the
// higher orders.
Histogram default_camera_histogram(const EmpiricalDistribution& dist);

struct GaussianFit {
  double mean = 0.0;
  double std = 0.0;  // population standard deviation
};

GaussianFit fit_gaussian(const EmpiricalDistribution& dist);

// Exact 1-D Wasserstein distance between the two empirical distributions:
// the integral of |CDF_a - CDF_b| over the merged support. Handles unequal
// sample counts without subsampling.
double wasserstein1(const EmpiricalDistribution& a,
                    const EmpiricalDistribution& b);

// Seeded order-1 camera streams for desk-testing the behavioural
// comparison: human_like is a narrow zero-centred Gaussian, rl_like a wide
// clamped mixture with point masses at the discrete-action extremes +-15.
enum class CameraProfile { human_like, rl_like };

EmpiricalDistribution synth_camera_stream(CameraProfile profile, std::size_t n,
                                          std::uint64_t seed);

// --- exports ---------------------------------------------------------------

using Polyline = std::vector<std::pair<double, double>>;

// Map outline file: one polyline per line as comma-separated x,y pairs
// separated by spaces; '#' starts a comment.
std::vector<Polyline> read_map_outline(const std::filesystem::path& path);

void write_grid_csv(std::ostream& out, const OccupancyGrid& grid,
                    bool masked = true);
void write_grid_csv(const std::filesystem::path& path, const OccupancyGrid& grid,
                    bool masked = true);
std::vector<std::vector<std::uint64_t>> read_grid_csv(
    const std::filesystem::path& path);

void write_histogram_csv(std::ostream& out, const Histogram& hist);
void write_histogram_csv(const std::filesystem::path& path, const Histogram& hist);
Histogram read_histogram_csv(const std::filesystem::path& path);

// Grayscale cell map of the masked grid, walls drawn as polylines on top.
void write_heatmap_svg(const std::filesystem::path& path, const OccupancyGrid& grid,
                       const std::vector<Polyline>& walls = {});

}  // namespace farp
