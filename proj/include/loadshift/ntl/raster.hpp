#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace loadshift::ntl {

using Grid = Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using FlagGrid = Eigen::Array<int, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct LunarInfo {
  double illumination = 0.0;  // lit fraction of the moon, 0..1
  double angle_deg = 0.0;     // lunar zenith angle applied to every pixel
};

/// Radiance grid (nW cm^-2 sr^-1), rows are image lines. Flags of 0 mark
/// good pixels.
struct Raster {
  Grid intensity;
  FlagGrid flags;
  std::optional<LunarInfo> lunar;
  std::string colormap = "inferno";

  Eigen::Index width() const { return intensity.cols(); }
  Eigen::Index height() const { return intensity.rows(); }
  // kSize when flags exist with other dimensions.
  void validate() const;
};

Raster make_raster(Grid intensity);

// Rows [row, row + height), columns [col, col + width). kSize when outside.
Raster crop(const Raster& r, Eigen::Index row, Eigen::Index col, Eigen::Index height, Eigen::Index width);

struct RepairResult {
  Raster raster;
  // Flagged pixels without a good neighbour; they are set to 0.
  std::vector<std::pair<Eigen::Index, Eigen::Index>> isolated;
};

// Each flagged pixel takes the mean of its good 8-neighbours (original
// values). Flags are cleared on output.
RepairResult repair_pixels(const Raster& r);

// min(1, max(0, cos(angle))).
double angle_factor(double angle_deg);
// Divides by 1 + illumination * angle_factor. kMetadata without lunar info.
Raster lunar_scale(const Raster& r);

// Pixels below `floor` become 0.
Raster threshold_floor(const Raster& r, double floor = 10.0);

// 5x5 mean with edge-replicated borders. kSize below 5x5.
Raster lowpass_5x5(const Raster& r);

struct PipelineReport {
  Raster raster;
  std::vector<std::pair<Eigen::Index, Eigen::Index>> isolated;
};

// repair -> lunar scale -> floor -> 5x5 low-pass.
PipelineReport process(const Raster& r, double floor = 10.0);

// "width height" then one line per row of space-separated shortest
// round-trip values.
std::string write_grid(const Grid& g);
Grid read_grid(std::string_view text);
std::string write_flags(const FlagGrid& g);
FlagGrid read_flags(std::string_view text);

// Sidecar key/value text: illumination, lunar_angle, colormap.
std::string write_metadata(const Raster& r);
void apply_metadata(Raster& r, std::string_view text);

}  // namespace loadshift::ntl
