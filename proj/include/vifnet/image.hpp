#pragma once

#include <torch/torch.h>

#include <array>
#include <string>

#include "vifnet/errors.hpp"

namespace vifnet {

enum class ColorSpace { kRgb, kInfrared, kGray };

std::string to_string(ColorSpace cs);

// A single image with unit-interval intensities. Stored CHW, float32, CPU.
// Construction validates the invariants: finite values in [0,1], H and W at
// least 8, channel count 1 or 3.
class ImageTensor {
 public:
  ImageTensor(torch::Tensor chw, ColorSpace space);
  static ImageTensor from_hwc(const torch::Tensor& hwc, ColorSpace space);

  const torch::Tensor& chw() const { return data_; }
  torch::Tensor hwc() const { return data_.permute({1, 2, 0}).contiguous(); }
  int64_t channels() const { return data_.size(0); }
  int64_t height() const { return data_.size(1); }
  int64_t width() const { return data_.size(2); }
  ColorSpace color_space() const { return space_; }

 private:
  torch::Tensor data_;
  ColorSpace space_;
};

// One feature map inside a 3-scale pyramid. data is (N,K,H,W) float; scale i
// means the spatial extent is full resolution / 2^(i-1).
struct FeatureMap {
  torch::Tensor data;
  int scale = 1;

  FeatureMap(torch::Tensor nchw, int scale);
  int64_t batch() const { return data.size(0); }
  int64_t channels() const { return data.size(1); }
  int64_t height() const { return data.size(2); }
  int64_t width() const { return data.size(3); }
};

struct FeaturePyramid {
  std::array<FeatureMap, 3> maps;  // scales 1..3, spatial dims halving

  FeaturePyramid(FeatureMap s1, FeatureMap s2, FeatureMap s3);
  const FeatureMap& at_scale(int scale) const { return maps.at(scale - 1); }
};

// Differentiable Sobel gradient magnitude of an (N,C,H,W) tensor, per channel.
// Reflect padding; each component normalized by the kernel's max response (4);
// magnitude sqrt(gx^2 + gy^2 + eps) - sqrt(eps) so constant inputs map to an
// exactly-zero edge map while the gradient stays defined at zero; clamped to
// [0,1]. hard_threshold > 0 switches to a binarized map (evaluation only, not
// differentiable).
torch::Tensor sobel_magnitude(const torch::Tensor& nchw, double hard_threshold = 0.0);

ImageTensor sobel_edges(const ImageTensor& img);

// 2x2 mean pooling (floor on odd dims); scale index moves one level down.
FeatureMap downsample2x(const FeatureMap& f);

// Bilinear upsampling by 2 (half-pixel centers); scale index moves one level up.
FeatureMap upsample2x(const FeatureMap& f);

// Channel concatenation of two maps with identical spatial dims and scale;
// a's channels come first.
FeatureMap concat_channels(const FeatureMap& a, const FeatureMap& b);

}  // namespace vifnet
