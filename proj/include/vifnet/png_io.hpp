#pragma once

#include <string>

#include "vifnet/haze.hpp"
#include "vifnet/image.hpp"

namespace vifnet {

// 8-bit PNG round trips for images; 16-bit PNG and raw float32 containers for
// depth. All binary layouts are fixed little-endian.

ImageTensor read_image_png(const std::string& path);
void write_image_png(const ImageTensor& img, const std::string& path);

// Single map in [0,1] written as 8-bit grayscale (structure-map visualization).
void write_gray_png(const torch::Tensor& hw, const std::string& path);

// Raw float32 depth: magic "VIFDEPTH", u32 version, u32 height, u32 width,
// then height*width float32 row-major, all little-endian.
void write_depth_bin(const DepthMap& d, const std::string& path);
DepthMap read_depth_bin(const std::string& path);

// 16-bit grayscale PNG with meters = pixel_value * meters_per_unit.
void write_depth_png16(const DepthMap& d, const std::string& path, double meters_per_unit);
DepthMap read_depth_png16(const std::string& path, double meters_per_unit);

}  // namespace vifnet
