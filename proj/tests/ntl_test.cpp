#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "loadshift/ntl/raster.hpp"
#include "loadshift/util/error.hpp"

using namespace loadshift;
using namespace loadshift::ntl;

namespace {

using Rows = std::vector<std::vector<double>>;

Grid to_grid(const Rows& rows) {
  Grid g(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t y = 0; y < rows.size(); ++y)
    for (std::size_t x = 0; x < rows[y].size(); ++x) g(y, x) = rows[y][x];
  return g;
}

// Straightforward replicated-edge mean, row by row.
Rows oracle_lowpass(const Rows& in) {
  const int H = static_cast<int>(in.size()), W = static_cast<int>(in[0].size());
  Rows out(H, std::vector<double>(W));
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      double s = 0.0;
      for (int i = y - 2; i <= y + 2; ++i) {
        for (int j = x - 2; j <= x + 2; ++j) {
          int yy = i < 0 ? 0 : (i >= H ? H - 1 : i);
          int xx = j < 0 ? 0 : (j >= W ? W - 1 : j);
          s += in[yy][xx];
        }
      }
      out[y][x] = s / 25.0;
    }
  }
  return out;
}

Rows oracle_floor(const Rows& in, double floor) {
  Rows out = in;
  for (auto& row : out)
    for (auto& v : row)
      if (v < floor) v = 0.0;
  return out;
}

// 8x8 scene: bright core, a dim suburb ring and sub-threshold noise.
const Rows kHand = {
    {0.5, 1.25, 3, 9.99, 10, 4, 0, 2.5},       {2, 12.5, 14, 15.75, 13, 11, 3, 0},
    {1, 13, 40.5, 55, 47.25, 16, 10.5, 0.75},  {0, 14.5, 61, 120.125, 88, 21, 9, 1},
    {3.5, 11, 52, 97.5, 73.75, 18.5, 12, 0},   {0.25, 10, 19, 24, 20.5, 14, 6, 2},
    {0, 4, 10.01, 12, 11.5, 9.5, 1.5, 0},      {1.75, 0, 2, 3.25, 0.125, 0, 0.5, 7}};

}  // namespace

TEST(Repair, Examples) {
  auto r = make_raster(Grid::Constant(5, 5, 10.0));
  EXPECT_TRUE((repair_pixels(r).raster.intensity == r.intensity).all());

  r.intensity(2, 2) = 500.0;
  r.flags(2, 2) = 1;
  auto fixed = repair_pixels(r);
  EXPECT_DOUBLE_EQ(fixed.raster.intensity(2, 2), 10.0);
  EXPECT_TRUE(fixed.isolated.empty());
  EXPECT_EQ(fixed.raster.flags.abs().sum(), 0);

  Raster m = make_raster(Grid::Zero(3, 3));
  m.intensity << 0, 0, 0, 0, -1, 8, 8, 8, 8;
  m.intensity(0, 0) = 0;
  m.flags(1, 1) = 1;
  // Neighbours 0,0,0,0,8,8,8,8.
  EXPECT_DOUBLE_EQ(repair_pixels(m).raster.intensity(1, 1), 4.0);
}

TEST(Repair, IsolatedReported) {
  auto r = make_raster(Grid::Constant(4, 4, 20.0));
  r.flags.block(0, 0, 2, 2).setOnes();
  r.flags(0, 2) = 1;
  r.flags(1, 2) = 1;
  r.flags(2, 0) = r.flags(2, 1) = r.flags(2, 2) = 1;
  // Flagged 3x3 corner block: only its inner 2x2 lacks a good neighbour.
  const auto res = repair_pixels(r);
  ASSERT_EQ(res.isolated.size(), 4u);
  EXPECT_EQ(res.isolated[0], std::make_pair(Eigen::Index{0}, Eigen::Index{0}));
  EXPECT_EQ(res.isolated[3], std::make_pair(Eigen::Index{1}, Eigen::Index{1}));
  EXPECT_EQ(res.raster.intensity(1, 1), 0.0);
  EXPECT_EQ(res.raster.intensity(2, 2), 20.0);
  EXPECT_EQ(res.raster.intensity(0, 2), 20.0);
}

TEST(Repair, UsesOriginalNeighbourValues) {
  auto r = make_raster(Grid::Zero(1, 5));
  r.intensity << 6, 100, 100, 0, 3;
  r.flags << 0, 1, 1, 0, 0;
  const auto out = repair_pixels(r).raster.intensity;
  EXPECT_DOUBLE_EQ(out(0, 1), 6.0);
  EXPECT_DOUBLE_EQ(out(0, 2), 0.0);
}

TEST(Lunar, Examples) {
  auto r = make_raster(Grid::Constant(3, 3, 42.0));
  try {
    lunar_scale(r);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMetadata);
  }
  r.lunar = LunarInfo{0.0, 10.0};
  EXPECT_TRUE((lunar_scale(r).intensity == 42.0).all());
  r.lunar = LunarInfo{1.0, 0.0};
  EXPECT_TRUE((lunar_scale(r).intensity == 21.0).all());
  r.lunar = LunarInfo{1.0, 120.0};
  EXPECT_DOUBLE_EQ(angle_factor(120.0), 0.0);
  EXPECT_TRUE((lunar_scale(r).intensity == 42.0).all());
  r.lunar = LunarInfo{0.5, 60.0};
  EXPECT_NEAR(lunar_scale(r).intensity(0, 0), 42.0 / 1.25, 1e-12);
  auto zero = make_raster(Grid::Zero(3, 3));
  zero.lunar = LunarInfo{0.7, 20.0};
  EXPECT_TRUE((lunar_scale(zero).intensity == 0.0).all());
  r.lunar = LunarInfo{1.5, 0.0};
  EXPECT_THROW(lunar_scale(r), Error);
}

TEST(Floor, Examples) {
  auto r = make_raster(Grid::Zero(1, 4));
  r.intensity << 9.99, 10.0, -3.0, 250.0;
  const auto out = threshold_floor(r).intensity;
  EXPECT_EQ(out(0, 0), 0.0);
  EXPECT_EQ(out(0, 1), 10.0);
  EXPECT_EQ(out(0, 2), 0.0);
  EXPECT_EQ(out(0, 3), 250.0);
  const auto z = make_raster(Grid::Zero(3, 3));
  EXPECT_TRUE((threshold_floor(z).intensity == 0.0).all());
}

TEST(FloorProperty, Idempotent) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-5.0, 40.0);
  for (int trial = 0; trial < 100; ++trial) {
    Grid g(1 + rng() % 9, 1 + rng() % 9);
    for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = u(rng);
    const double floor = u(rng);
    const auto once = threshold_floor(make_raster(g), floor);
    const auto twice = threshold_floor(once, floor);
    EXPECT_TRUE((once.intensity == twice.intensity).all());
    EXPECT_TRUE(((once.intensity == 0.0) || (once.intensity >= floor)).all());
  }
}

TEST(Lowpass, Examples) {
  const auto c = lowpass_5x5(make_raster(Grid::Constant(6, 7, 3.5)));
  EXPECT_TRUE((c.intensity == 3.5).all());

  Grid impulse = Grid::Zero(9, 9);
  impulse(4, 4) = 1.0;
  const auto out = lowpass_5x5(make_raster(impulse)).intensity;
  for (int y = 0; y < 9; ++y)
    for (int x = 0; x < 9; ++x) {
      const bool inside = std::abs(y - 4) <= 2 && std::abs(x - 4) <= 2;
      EXPECT_EQ(out(y, x), inside ? 1.0 / 25.0 : 0.0);
    }
  EXPECT_THROW(lowpass_5x5(make_raster(Grid::Zero(4, 9))), Error);
  try {
    lowpass_5x5(make_raster(Grid::Zero(9, 4)));
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSize);
  }
}

TEST(LowpassProperty, InteriorImpulseConserved) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const auto H = 5 + static_cast<Eigen::Index>(rng() % 8), W = 5 + static_cast<Eigen::Index>(rng() % 8);
    Grid g = Grid::Zero(H, W);
    const auto y = 2 + static_cast<Eigen::Index>(rng() % (H - 4)), x = 2 + static_cast<Eigen::Index>(rng() % (W - 4));
    g(y, x) = 1.0 + static_cast<double>(rng() % 1000);
    EXPECT_NEAR(lowpass_5x5(make_raster(g)).intensity.sum(), g(y, x), 1e-9 * g(y, x));
  }
}

TEST(Golden, HandRasterBitExact) {
  const auto floored = threshold_floor(make_raster(to_grid(kHand)));
  const auto want_floor = to_grid(oracle_floor(kHand, 10.0));
  EXPECT_TRUE((floored.intensity == want_floor).all());
  EXPECT_EQ(write_grid(floored.intensity),
            "8 8\n"
            "0 0 0 0 10 0 0 0\n"
            "0 12.5 14 15.75 13 11 0 0\n"
            "0 13 40.5 55 47.25 16 10.5 0\n"
            "0 14.5 61 120.125 88 21 0 0\n"
            "0 11 52 97.5 73.75 18.5 12 0\n"
            "0 10 19 24 20.5 14 0 0\n"
            "0 0 10.01 12 11.5 0 0 0\n"
            "0 0 0 0 0 0 0 0\n");

  const auto smooth = lowpass_5x5(floored);
  const auto want = to_grid(oracle_lowpass(oracle_floor(kHand, 10.0)));
  for (Eigen::Index y = 0; y < 8; ++y)
    for (Eigen::Index x = 0; x < 8; ++x) EXPECT_EQ(smooth.intensity(y, x), want(y, x)) << y << "," << x;
  EXPECT_EQ(write_grid(smooth.intensity), write_grid(want));

  const auto raw = lowpass_5x5(make_raster(to_grid(kHand)));
  EXPECT_TRUE((raw.intensity == to_grid(oracle_lowpass(kHand))).all());
}

TEST(GridIo, RoundTripBitExact) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 300.0);
  Grid g(6, 9);
  for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = u(rng);
  const auto text = write_grid(g);
  EXPECT_TRUE((read_grid(text) == g).all());
  EXPECT_EQ(write_grid(read_grid(text)), text);
  EXPECT_EQ(text.substr(0, 4), "9 6\n");

  FlagGrid f = FlagGrid::Zero(2, 3);
  f(1, 2) = 4;
  EXPECT_EQ(write_flags(f), "3 2\n0 0 0\n0 0 4\n");
  EXPECT_TRUE((read_flags(write_flags(f)) == f).all());

  EXPECT_THROW(read_grid("3 2\n1 2 3\n4 5\n"), Error);
  EXPECT_THROW(read_grid("3 2\n1 2 3\n4 5 6 7\n"), Error);
  EXPECT_THROW(read_grid("x\n"), Error);
}

TEST(Metadata, SidecarRoundTrip) {
  auto r = make_raster(Grid::Constant(5, 5, 30.0));
  apply_metadata(r, "illumination = 0.25\nlunar_angle = 45\ncolormap = viridis\n");
  ASSERT_TRUE(r.lunar);
  EXPECT_DOUBLE_EQ(r.lunar->illumination, 0.25);
  EXPECT_EQ(r.colormap, "viridis");
  Raster back = make_raster(r.intensity);
  apply_metadata(back, write_metadata(r));
  EXPECT_EQ(back.lunar->angle_deg, 45.0);
  EXPECT_THROW(apply_metadata(back, "illumination = 0.5\n"), Error);
}

TEST(Pipeline, DeterministicAndNonNegative) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-2.0, 90.0);
  Raster r = make_raster(Grid(12, 10));
  for (Eigen::Index i = 0; i < r.intensity.size(); ++i) r.intensity.data()[i] = u(rng);
  r.flags(3, 4) = 1;
  r.lunar = LunarInfo{0.6, 35.0};
  const auto a = process(r);
  const auto b = process(r);
  EXPECT_EQ(write_grid(a.raster.intensity), write_grid(b.raster.intensity));
  EXPECT_TRUE((a.raster.intensity >= 0.0).all());
}

TEST(Crop, Bounds) {
  Grid g(4, 6);
  for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = static_cast<double>(i);
  const auto c = crop(make_raster(g), 1, 2, 2, 3);
  EXPECT_EQ(c.height(), 2);
  EXPECT_EQ(c.width(), 3);
  EXPECT_EQ(c.intensity(0, 0), g(1, 2));
  EXPECT_THROW(crop(make_raster(g), 3, 0, 2, 2), Error);
}
