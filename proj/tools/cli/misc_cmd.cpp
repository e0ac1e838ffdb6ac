#include <ostream>
#include <sstream>

#include "cli/commands.hpp"
#include "cli/svg.hpp"
#include "loadshift/core/trend.hpp"
#include "loadshift/ntl/raster.hpp"
#include "loadshift/util/error.hpp"
#include "loadshift/util/format.hpp"

namespace loadshift::cli {

int cmd_trend(RunContext& ctx, const CommandOptions& opts) {
  const auto input = setting(ctx, opts.input, "trend", "input");
  if (input.empty()) throw Error(ErrorCode::kConfig, "trend needs --input or [trend] input");
  const auto frame = read_frame_csv(ctx.read_input(ctx.resolve(input)));
  const auto column = setting(ctx, opts.column, "trend", "column", frame.cols() ? frame.names()[0] : "");
  const int period = opts.period > 0 ? opts.period : static_cast<int>(ctx.config.get_int("trend", "period", 7));
  const double tolerance =
      std::isnan(opts.tolerance) ? ctx.config.get_double("trend", "tolerance", 0.02) : opts.tolerance;
  const auto mode_text = to_lower(setting(ctx, opts.mode, "trend", "mode", "mean"));
  TransitionMode mode;
  if (mode_text == "mean") mode = TransitionMode::kClosestToMean;
  else if (mode_text == "valley") mode = TransitionMode::kBelowPreviousValley;
  else throw Error(ErrorCode::kParameter, "trend mode must be 'mean' or 'valley'");

  const auto t = trend_transition(frame, column, period, mode, tolerance);
  const auto values = frame.column(column);
  std::ostringstream os;
  os << "date," << column << ",trend\n";
  std::vector<std::string> labels;
  LineSeries raw{column, {}}, trend{"trend", {}};
  for (std::size_t i = 0; i < frame.rows(); ++i) {
    const auto e = static_cast<Eigen::Index>(i);
    os << format_date(frame.dates()[i]) << ',' << format_double(values(e)) << ',' << format_double(t.trend(e)) << '\n';
    labels.push_back(format_date(frame.dates()[i]).substr(5));
    raw.values.push_back(values(e));
    trend.values.push_back(t.trend(e));
  }
  ctx.write_output("trend.csv", os.str());
  std::ostringstream tr;
  tr << "column,begin,end,days,degenerate\n"
     << column << ',' << format_date(t.transition.begin) << ',' << format_date(t.transition.end) << ','
     << (t.transition.end - t.transition.begin).count() << ',' << (t.degenerate ? "true" : "false") << '\n';
  ctx.write_output("transition.csv", tr.str());
  ctx.write_output("trend.svg", line_chart("Trend of " + column, labels, {raw, trend}));
  if (ctx.log) {
    *ctx.log << "transition " << format_date(t.transition.begin) << " .. " << format_date(t.transition.end) << '\n';
  }
  return kExitOk;
}

namespace {

ntl::Raster load_raster(RunContext& ctx, const std::string& grid, const std::string& flags, const std::string& meta) {
  ntl::Raster r = ntl::make_raster(ntl::read_grid(ctx.read_input(ctx.resolve(grid))));
  if (!flags.empty()) r.flags = ntl::read_flags(ctx.read_input(ctx.resolve(flags)));
  if (!meta.empty()) ntl::apply_metadata(r, ctx.read_input(ctx.resolve(meta)));
  r.validate();
  return r;
}

std::string isolated_csv(const std::vector<std::pair<Eigen::Index, Eigen::Index>>& cells) {
  std::ostringstream os;
  os << "row,col\n";
  for (const auto& [y, x] : cells) os << y << ',' << x << '\n';
  return os.str();
}

}  // namespace

int cmd_ntl(RunContext& ctx, const CommandOptions& opts) {
  const auto input = setting(ctx, opts.input, "ntl", "input");
  if (input.empty()) throw Error(ErrorCode::kConfig, "ntl needs --input or [ntl] input");
  const auto flags = setting(ctx, opts.flags, "ntl", "flags");
  const auto meta = setting(ctx, opts.meta, "ntl", "meta");
  const double floor = std::isnan(opts.floor) ? ctx.config.get_double("ntl", "floor", 10.0) : opts.floor;
  const auto crop_text = setting(ctx, opts.crop, "ntl", "crop");
  std::vector<double> crop;
  if (!crop_text.empty()) {
    crop = parse_double_list(crop_text);
    if (crop.size() != 4) throw Error(ErrorCode::kParameter, "crop needs row,col,height,width");
  }
  auto prepare = [&](ntl::Raster r) {
    if (!crop.empty()) {
      r = ntl::crop(r, static_cast<Eigen::Index>(crop[0]), static_cast<Eigen::Index>(crop[1]),
                    static_cast<Eigen::Index>(crop[2]), static_cast<Eigen::Index>(crop[3]));
    }
    return ntl::process(r, floor);
  };

  const auto after = prepare(load_raster(ctx, input, flags, meta));
  ctx.write_output("ntl.txt", ntl::write_grid(after.raster.intensity));
  ctx.write_output("ntl_isolated.csv", isolated_csv(after.isolated));
  std::string sidecar = "colormap = " + after.raster.colormap + "\nfloor = " + format_double(floor) + "\n";

  const auto reference = setting(ctx, opts.reference, "ntl", "reference");
  if (!reference.empty()) {
    const auto before = prepare(load_raster(ctx, reference, setting(ctx, {}, "ntl", "reference_flags"),
                                            setting(ctx, {}, "ntl", "reference_meta", meta)));
    if (before.raster.height() != after.raster.height() || before.raster.width() != after.raster.width()) {
      throw Error(ErrorCode::kSize, "reference raster dimensions differ from input");
    }
    ctx.write_output("ntl_reference.txt", ntl::write_grid(before.raster.intensity));
    ctx.write_output("ntl_difference.txt", ntl::write_grid(after.raster.intensity - before.raster.intensity));
    sidecar += "difference_colormap = RdBu\n";
  }
  ctx.write_output("ntl.meta", sidecar);
  return kExitOk;
}

}  // namespace loadshift::cli
