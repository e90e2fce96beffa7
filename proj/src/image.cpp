#include "vifnet/image.hpp"

#include <cmath>

namespace vifnet {

namespace {

constexpr double kSobelEps = 1e-8;

void check_image_invariants(const torch::Tensor& chw) {
  if (chw.dim() != 3) {
    throw ShapeError("ImageTensor expects a (C,H,W) tensor, got dim=" +
                     std::to_string(chw.dim()));
  }
  const auto c = chw.size(0), h = chw.size(1), w = chw.size(2);
  if (c != 1 && c != 3) {
    throw ShapeError("ImageTensor channel count must be 1 or 3, got " + std::to_string(c));
  }
  if (h < 8 || w < 8) {
    throw ShapeError("ImageTensor spatial dims must be at least 8x8, got " +
                     std::to_string(h) + "x" + std::to_string(w));
  }
  if (!chw.isfinite().all().item<bool>()) {
    throw InvalidInputError("ImageTensor contains non-finite values");
  }
  const double lo = chw.min().item<double>();
  const double hi = chw.max().item<double>();
  if (lo < 0.0 || hi > 1.0) {
    throw InvalidInputError("ImageTensor values outside [0,1]: min=" + std::to_string(lo) +
                            " max=" + std::to_string(hi));
  }
}

}  // namespace

std::string to_string(ColorSpace cs) {
  switch (cs) {
    case ColorSpace::kRgb: return "rgb";
    case ColorSpace::kInfrared: return "infrared-1ch";
    case ColorSpace::kGray: return "gray";
  }
  return "unknown";
}

ImageTensor::ImageTensor(torch::Tensor chw, ColorSpace space)
    : data_(chw.to(torch::kFloat32).contiguous()), space_(space) {
  check_image_invariants(data_);
  if (space_ == ColorSpace::kInfrared && data_.size(0) != 1) {
    throw ShapeError("infrared images are single-channel");
  }
}

ImageTensor ImageTensor::from_hwc(const torch::Tensor& hwc, ColorSpace space) {
  if (hwc.dim() != 3) {
    throw ShapeError("from_hwc expects a (H,W,C) tensor");
  }
  return ImageTensor(hwc.permute({2, 0, 1}).contiguous(), space);
}

FeatureMap::FeatureMap(torch::Tensor nchw, int scale_in) : data(std::move(nchw)), scale(scale_in) {
  if (data.dim() != 4) {
    throw ShapeError("FeatureMap expects a (N,K,H,W) tensor, got dim=" +
                     std::to_string(data.dim()));
  }
  if (scale < 1 || scale > 3) {
    throw ShapeError("FeatureMap scale must be in {1,2,3}, got " + std::to_string(scale));
  }
}

FeaturePyramid::FeaturePyramid(FeatureMap s1, FeatureMap s2, FeatureMap s3)
    : maps{std::move(s1), std::move(s2), std::move(s3)} {
  for (int i = 0; i < 3; ++i) {
    if (maps[i].scale != i + 1) {
      throw ShapeError("FeaturePyramid entries must carry scales 1,2,3 in order");
    }
  }
  for (int i = 1; i < 3; ++i) {
    if (maps[i].height() != maps[i - 1].height() / 2 ||
        maps[i].width() != maps[i - 1].width() / 2) {
      throw ShapeError("FeaturePyramid spatial dims must halve between scales");
    }
  }
}

torch::Tensor sobel_magnitude(const torch::Tensor& nchw, double hard_threshold) {
  if (nchw.dim() != 4) {
    throw ShapeError("sobel_magnitude expects (N,C,H,W)");
  }
  const int64_t c = nchw.size(1);
  auto opts = torch::TensorOptions().dtype(nchw.dtype());
  auto gx = torch::tensor({{-1.f, 0.f, 1.f}, {-2.f, 0.f, 2.f}, {-1.f, 0.f, 1.f}}, opts)
                .view({1, 1, 3, 3})
                .repeat({c, 1, 1, 1});
  auto gy = gx.transpose(2, 3).contiguous();
  auto padded = torch::reflection_pad2d(nchw, {1, 1, 1, 1});
  auto dx = torch::conv2d(padded, gx, {}, 1, 0, 1, c) / 4.0;
  auto dy = torch::conv2d(padded, gy, {}, 1, 0, 1, c) / 4.0;
  auto mag = torch::sqrt(dx * dx + dy * dy + kSobelEps) - std::sqrt(kSobelEps);
  mag = mag.clamp(0.0, 1.0);
  if (hard_threshold > 0.0) {
    mag = (mag > hard_threshold).to(nchw.dtype());
  }
  return mag;
}

ImageTensor sobel_edges(const ImageTensor& img) {
  auto mag = sobel_magnitude(img.chw().unsqueeze(0)).squeeze(0);
  return ImageTensor(mag, img.color_space());
}

FeatureMap downsample2x(const FeatureMap& f) {
  if (f.height() < 2 || f.width() < 2) {
    throw InvalidInputError("downsample2x needs spatial dims >= 2");
  }
  if (f.scale >= 3) {
    throw InvalidInputError("downsample2x would leave the 3-scale pyramid");
  }
  auto pooled = torch::avg_pool2d(f.data, 2, 2);
  return FeatureMap(pooled, f.scale + 1);
}

FeatureMap upsample2x(const FeatureMap& f) {
  if (f.scale <= 1) {
    throw InvalidInputError("upsample2x would exceed full resolution");
  }
  auto up = torch::upsample_bilinear2d(f.data, {f.height() * 2, f.width() * 2},
                                       /*align_corners=*/false);
  return FeatureMap(up, f.scale - 1);
}

FeatureMap concat_channels(const FeatureMap& a, const FeatureMap& b) {
  if (a.scale != b.scale) {
    throw ShapeError("concat_channels scale mismatch: " + std::to_string(a.scale) + " vs " +
                     std::to_string(b.scale));
  }
  if (a.batch() != b.batch() || a.height() != b.height() || a.width() != b.width()) {
    throw ShapeError("concat_channels spatial/batch mismatch");
  }
  return FeatureMap(torch::cat({a.data, b.data}, 1), a.scale);
}

}  // namespace vifnet
