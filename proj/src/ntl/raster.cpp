#include "loadshift/ntl/raster.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "loadshift/util/config.hpp"
#include "loadshift/util/error.hpp"
#include "loadshift/util/format.hpp"

namespace loadshift::ntl {

void Raster::validate() const {
  if (flags.size() > 0 && (flags.rows() != intensity.rows() || flags.cols() != intensity.cols())) {
    throw Error(ErrorCode::kSize, "flag grid dimensions differ from intensity grid");
  }
}

Raster make_raster(Grid intensity) {
  Raster r;
  r.flags = FlagGrid::Zero(intensity.rows(), intensity.cols());
  r.intensity = std::move(intensity);
  return r;
}

Raster crop(const Raster& r, Eigen::Index row, Eigen::Index col, Eigen::Index height, Eigen::Index width) {
  r.validate();
  if (row < 0 || col < 0 || height <= 0 || width <= 0 || row + height > r.height() || col + width > r.width()) {
    throw Error(ErrorCode::kSize, "crop rectangle outside raster");
  }
  Raster out = r;
  out.intensity = r.intensity.block(row, col, height, width);
  if (r.flags.size() > 0) out.flags = r.flags.block(row, col, height, width);
  return out;
}

RepairResult repair_pixels(const Raster& r) {
  r.validate();
  RepairResult res{r, {}};
  if (r.flags.size() == 0) return res;
  const auto H = r.height(), W = r.width();
  for (Eigen::Index y = 0; y < H; ++y) {
    for (Eigen::Index x = 0; x < W; ++x) {
      if (r.flags(y, x) == 0) continue;
      double sum = 0.0;
      int count = 0;
      for (Eigen::Index dy = -1; dy <= 1; ++dy) {
        for (Eigen::Index dx = -1; dx <= 1; ++dx) {
          const auto yy = y + dy, xx = x + dx;
          if ((dy == 0 && dx == 0) || yy < 0 || xx < 0 || yy >= H || xx >= W) continue;
          if (r.flags(yy, xx) != 0) continue;
          sum += r.intensity(yy, xx);
          ++count;
        }
      }
      if (count == 0) {
        res.raster.intensity(y, x) = 0.0;
        res.isolated.emplace_back(y, x);
      } else {
        res.raster.intensity(y, x) = sum / count;
      }
    }
  }
  res.raster.flags.setZero();
  return res;
}

double angle_factor(double angle_deg) {
  return std::clamp(std::cos(angle_deg * std::numbers::pi / 180.0), 0.0, 1.0);
}

Raster lunar_scale(const Raster& r) {
  if (!r.lunar) throw Error(ErrorCode::kMetadata, "raster has no lunar metadata");
  const auto& l = *r.lunar;
  if (!(l.illumination >= 0.0 && l.illumination <= 1.0) || !std::isfinite(l.angle_deg)) {
    throw Error(ErrorCode::kMetadata, "lunar illumination must be in [0, 1] with a finite angle");
  }
  Raster out = r;
  out.intensity = r.intensity / (1.0 + l.illumination * angle_factor(l.angle_deg));
  return out;
}

Raster threshold_floor(const Raster& r, double floor) {
  Raster out = r;
  out.intensity = (r.intensity < floor).select(0.0, r.intensity);
  return out;
}

Raster lowpass_5x5(const Raster& r) {
  const auto H = r.height(), W = r.width();
  if (H < 5 || W < 5) throw Error(ErrorCode::kSize, "5x5 filter needs a raster of at least 5x5");
  Raster out = r;
  for (Eigen::Index y = 0; y < H; ++y) {
    for (Eigen::Index x = 0; x < W; ++x) {
      double sum = 0.0;
      for (Eigen::Index dy = -2; dy <= 2; ++dy) {
        const auto yy = std::clamp<Eigen::Index>(y + dy, 0, H - 1);
        for (Eigen::Index dx = -2; dx <= 2; ++dx) sum += r.intensity(yy, std::clamp<Eigen::Index>(x + dx, 0, W - 1));
      }
      out.intensity(y, x) = sum / 25.0;
    }
  }
  return out;
}

PipelineReport process(const Raster& r, double floor) {
  auto repaired = repair_pixels(r);
  auto scaled = lunar_scale(repaired.raster);
  return {lowpass_5x5(threshold_floor(scaled, floor)), std::move(repaired.isolated)};
}

namespace {

template <typename Array, typename Cell>
std::string write_cells(const Array& g, Cell cell) {
  std::string out = std::to_string(g.cols()) + " " + std::to_string(g.rows()) + "\n";
  for (Eigen::Index y = 0; y < g.rows(); ++y) {
    for (Eigen::Index x = 0; x < g.cols(); ++x) {
      if (x) out += ' ';
      out += cell(g(y, x));
    }
    out += '\n';
  }
  return out;
}

template <typename Array, typename Parse>
Array read_cells(std::string_view text, Parse parse) {
  std::istringstream is{std::string(text)};
  long w = 0, h = 0;
  if (!(is >> w >> h) || w <= 0 || h <= 0) throw Error(ErrorCode::kSchema, "grid header must be 'width height'");
  Array g(h, w);
  std::string token;
  for (long i = 0; i < w * h; ++i) {
    if (!(is >> token)) throw Error(ErrorCode::kSize, "grid has fewer cells than width x height");
    g(i / w, i % w) = parse(token);
  }
  if (is >> token) throw Error(ErrorCode::kSize, "grid has more cells than width x height");
  return g;
}

}  // namespace

std::string write_grid(const Grid& g) {
  return write_cells(g, [](double v) { return format_double(v); });
}

Grid read_grid(std::string_view text) {
  return read_cells<Grid>(text, [](const std::string& t) { return parse_double(t); });
}

std::string write_flags(const FlagGrid& g) {
  return write_cells(g, [](int v) { return std::to_string(v); });
}

FlagGrid read_flags(std::string_view text) {
  return read_cells<FlagGrid>(text, [](const std::string& t) { return parse_int(t); });
}

std::string write_metadata(const Raster& r) {
  std::ostringstream os;
  if (r.lunar) {
    os << "illumination = " << format_double(r.lunar->illumination) << '\n';
    os << "lunar_angle = " << format_double(r.lunar->angle_deg) << '\n';
  }
  os << "colormap = " << r.colormap << '\n';
  return os.str();
}

void apply_metadata(Raster& r, std::string_view text) {
  const auto kv = KeyValueConfig::parse(text);
  const auto illum = kv.get("", "illumination");
  const auto angle = kv.get("", "lunar_angle");
  if (illum || angle) {
    if (!illum || !angle) throw Error(ErrorCode::kMetadata, "sidecar needs both illumination and lunar_angle");
    r.lunar = LunarInfo{parse_double(*illum), parse_double(*angle)};
  }
  r.colormap = kv.get_or("", "colormap", r.colormap);
}

}  // namespace loadshift::ntl
