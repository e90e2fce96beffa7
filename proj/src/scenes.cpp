#include "vifnet/scenes.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace vifnet {

uint64_t derive_seed(uint64_t global_seed, uint64_t index) {
  uint64_t z = global_seed + 0x9e3779b97f4a7c15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

namespace {

struct Rgb {
  float r, g, b;
};

struct Billboard {
  bool is_disc = false;
  float cx = 0, cy = 0;    // center, pixels
  float hw = 0, hh = 0;    // half extents (radius for discs)
  float depth = 0;         // meters
  Rgb color{0.5f, 0.5f, 0.5f};
  Rgb alt{0.5f, 0.5f, 0.5f};
  int stripe_px = 0;       // 0 = flat fill, else two-tone stripes
  bool vertical_stripes = false;
};

}  // namespace

RenderedScene render_scene(const SceneSpec& spec) {
  const int64_t h = spec.height, w = spec.width;
  std::mt19937_64 rng(spec.seed);
  auto uni = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };
  auto uni_int = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  auto rand_color = [&](double lo, double hi) {
    return Rgb{static_cast<float>(uni(lo, hi)), static_cast<float>(uni(lo, hi)),
               static_cast<float>(uni(lo, hi))};
  };

  const int64_t horizon = static_cast<int64_t>(h * uni(0.35, 0.55));
  const Rgb sky_top = {static_cast<float>(uni(0.45, 0.65)), static_cast<float>(uni(0.55, 0.75)),
                       static_cast<float>(uni(0.75, 0.95))};
  const Rgb sky_bot = {sky_top.r * 0.85f, sky_top.g * 0.9f, sky_top.b * 0.95f};
  const Rgb ground_a = rand_color(0.15, 0.55);
  const Rgb ground_b = rand_color(0.15, 0.55);
  const double ground_near = uni(1.5, 3.0);  // depth at the bottom row, meters
  const int ground_stripes = uni_int(6, 14);

  auto albedo = torch::empty({3, h, w}, torch::kFloat32);
  auto depth = torch::empty({h, w}, torch::kFloat32);
  auto alb = albedo.accessor<float, 3>();
  auto dep = depth.accessor<float, 2>();

  // Background: sky above the horizon, striped ground plane below. Ground
  // depth grows toward the horizon, reaching depth_max there.
  for (int64_t y = 0; y < h; ++y) {
    if (y <= horizon) {
      const float f = horizon > 0 ? static_cast<float>(y) / horizon : 0.f;
      const Rgb c = {sky_top.r + (sky_bot.r - sky_top.r) * f,
                     sky_top.g + (sky_bot.g - sky_top.g) * f,
                     sky_top.b + (sky_bot.b - sky_top.b) * f};
      for (int64_t x = 0; x < w; ++x) {
        alb[0][y][x] = c.r;
        alb[1][y][x] = c.g;
        alb[2][y][x] = c.b;
        dep[y][x] = static_cast<float>(spec.depth_max);
      }
    } else {
      const double f = static_cast<double>(y - horizon) / (h - 1 - horizon);  // 0 horizon, 1 bottom
      // perspective-like falloff: near at the bottom, depth_max at the horizon
      const double d = ground_near + (spec.depth_max - ground_near) * std::pow(1.0 - f, 1.8);
      const int band = static_cast<int>(std::floor(std::log1p(d) * ground_stripes)) % 2;
      const Rgb& c = band == 0 ? ground_a : ground_b;
      for (int64_t x = 0; x < w; ++x) {
        alb[0][y][x] = c.r;
        alb[1][y][x] = c.g;
        alb[2][y][x] = c.b;
        dep[y][x] = static_cast<float>(d);
      }
    }
  }

  // Objects, far to near so closer ones overwrite.
  const int n_obj = uni_int(5, 9);
  std::vector<Billboard> objs(n_obj);
  for (auto& o : objs) {
    o.is_disc = uni(0, 1) < 0.4;
    o.depth = static_cast<float>(uni(3.0, spec.depth_max * 0.9));
    const double size_scale = 26.0 / std::sqrt(o.depth);  // nearer objects look bigger
    o.hw = static_cast<float>(uni(0.5, 1.4) * size_scale);
    o.hh = o.is_disc ? o.hw : static_cast<float>(uni(0.6, 1.8) * size_scale);
    o.cx = static_cast<float>(uni(0.05, 0.95) * w);
    // rest objects loosely on the ground band matching their depth
    const double f = 1.0 - std::pow((o.depth - ground_near) / (spec.depth_max - ground_near),
                                    1.0 / 1.8);
    o.cy = static_cast<float>(horizon + std::clamp(f, 0.02, 0.98) * (h - 1 - horizon) - o.hh * 0.5);
    o.color = rand_color(0.1, 0.9);
    o.alt = rand_color(0.1, 0.9);
    o.stripe_px = uni(0, 1) < 0.6 ? uni_int(3, 9) : 0;
    o.vertical_stripes = uni(0, 1) < 0.5;
  }
  std::sort(objs.begin(), objs.end(),
            [](const Billboard& a, const Billboard& b) { return a.depth > b.depth; });

  for (const auto& o : objs) {
    const int64_t y0 = std::max<int64_t>(0, static_cast<int64_t>(o.cy - o.hh));
    const int64_t y1 = std::min<int64_t>(h - 1, static_cast<int64_t>(o.cy + o.hh));
    const int64_t x0 = std::max<int64_t>(0, static_cast<int64_t>(o.cx - o.hw));
    const int64_t x1 = std::min<int64_t>(w - 1, static_cast<int64_t>(o.cx + o.hw));
    for (int64_t y = y0; y <= y1; ++y) {
      for (int64_t x = x0; x <= x1; ++x) {
        if (o.is_disc) {
          const float dx = (x - o.cx) / o.hw, dy = (y - o.cy) / o.hh;
          if (dx * dx + dy * dy > 1.f) continue;
        }
        bool alt = false;
        if (o.stripe_px > 0) {
          const int64_t k = o.vertical_stripes ? x : y;
          alt = (k / o.stripe_px) % 2 == 1;
        }
        const Rgb& c = alt ? o.alt : o.color;
        alb[0][y][x] = c.r;
        alb[1][y][x] = c.g;
        alb[2][y][x] = c.b;
        dep[y][x] = o.depth;
      }
    }
  }

  return RenderedScene{ImageTensor(albedo.clamp(0.0, 1.0), ColorSpace::kRgb), DepthMap(depth)};
}

}  // namespace vifnet
