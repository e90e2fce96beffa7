#pragma once

#include <torch/torch.h>

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "vifnet/errors.hpp"
#include "vifnet/image.hpp"

namespace vifnet {

// Per-pixel scene depth in meters, (H,W) float32, all values finite and >= 0.
class DepthMap {
 public:
  explicit DepthMap(torch::Tensor hw);
  const torch::Tensor& data() const { return data_; }
  int64_t height() const { return data_.size(0); }
  int64_t width() const { return data_.size(1); }

 private:
  torch::Tensor data_;
};

// Scattering coefficient beta (1/m) and global atmospheric light A per channel.
struct HazeParams {
  double beta = 0.0;
  std::array<double, 3> atmo{1.0, 1.0, 1.0};

  HazeParams() = default;
  HazeParams(double beta, double atmo_scalar);
  HazeParams(double beta, std::array<double, 3> atmo);
  double atmo_mean() const { return (atmo[0] + atmo[1] + atmo[2]) / 3.0; }
};

struct FogPreset {
  std::string name;
  double beta = 0.0;
};

// mist < medium < dense; depth is normalized to [0, 30] m by the generator.
const std::vector<FogPreset>& fog_presets();
const FogPreset& fog_preset(const std::string& name);

constexpr double kDepthMaxMeters = 30.0;
constexpr double kInfraredBetaRatio = 0.1;  // beta_ir = 0.1 * beta
constexpr double kDefaultTransmissionFloor = 0.05;

// t(x) = exp(-beta * d(x)), single channel, in (0,1], exactly 1 where d = 0.
ImageTensor transmission_from_depth(const DepthMap& d, const HazeParams& p);

// I(x) = J(x) t(x) + A (1 - t(x)); a per-pixel convex combination of J and A.
ImageTensor apply_scattering(const ImageTensor& j, const ImageTensor& t, const HazeParams& p);

// Inverse of apply_scattering: J = (I - A(1-t)) / t, clamped to [0,1].
// Throws DegenerateTransmissionError if any t falls below t_floor.
ImageTensor analytic_dehaze(const ImageTensor& i, const ImageTensor& t, const HazeParams& p,
                            double t_floor = kDefaultTransmissionFloor);

// Deterministic pseudo-infrared channel: Rec.601 luminance of J scattered with
// the much weaker beta_ir, so structure survives where the visible image fogs
// over. noise_sigma > 0 adds seeded Gaussian sensor noise.
ImageTensor synth_infrared(const ImageTensor& j, const DepthMap& d, double beta_ir,
                           double atmo, uint64_t seed = 0, double noise_sigma = 0.0);

}  // namespace vifnet
