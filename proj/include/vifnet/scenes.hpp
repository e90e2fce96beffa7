#pragma once

#include <cstdint>

#include "vifnet/haze.hpp"
#include "vifnet/image.hpp"

namespace vifnet {

// Procedural stand-in for a captured scene: a ground plane receding to the
// horizon, a sky band, and a handful of textured boxes and spheres at random
// depths. Deterministic per seed.
struct SceneSpec {
  int64_t height = 160;
  int64_t width = 160;
  uint64_t seed = 0;
  double depth_max = kDepthMaxMeters;
};

struct RenderedScene {
  ImageTensor albedo;  // clean radiance J, 3 channels
  DepthMap depth;      // meters, 0..depth_max
};

RenderedScene render_scene(const SceneSpec& spec);

// Seed for image index i under a dataset-level seed (splitmix64 mix).
uint64_t derive_seed(uint64_t global_seed, uint64_t index);

}  // namespace vifnet
