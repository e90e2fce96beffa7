#include "vifnet/png_io.hpp"

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

namespace vifnet {

namespace {

constexpr char kDepthMagic[8] = {'V', 'I', 'F', 'D', 'E', 'P', 'T', 'H'};
constexpr uint32_t kDepthVersion = 1;

template <typename T>
void write_le(std::ostream& os, T v) {
  static_assert(std::is_trivially_copyable_v<T>);
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_le(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  return v;
}

}  // namespace

ImageTensor read_image_png(const std::string& path) {
  cv::Mat m = cv::imread(path, cv::IMREAD_UNCHANGED);
  if (m.empty()) {
    throw IoError("cannot read image: " + path);
  }
  if (m.depth() != CV_8U) {
    throw IoError("expected 8-bit image: " + path);
  }
  const int h = m.rows, w = m.cols, c = m.channels();
  if (c != 1 && c != 3) {
    throw IoError("expected 1 or 3 channels, got " + std::to_string(c) + ": " + path);
  }
  auto chw = torch::empty({c, h, w}, torch::kFloat32);
  auto acc = chw.accessor<float, 3>();
  for (int y = 0; y < h; ++y) {
    const uint8_t* row = m.ptr<uint8_t>(y);
    for (int x = 0; x < w; ++x) {
      if (c == 1) {
        acc[0][y][x] = row[x] / 255.f;
      } else {
        // OpenCV loads BGR
        acc[0][y][x] = row[x * 3 + 2] / 255.f;
        acc[1][y][x] = row[x * 3 + 1] / 255.f;
        acc[2][y][x] = row[x * 3 + 0] / 255.f;
      }
    }
  }
  return ImageTensor(chw, c == 1 ? ColorSpace::kGray : ColorSpace::kRgb);
}

void write_image_png(const ImageTensor& img, const std::string& path) {
  const int c = static_cast<int>(img.channels());
  const int h = static_cast<int>(img.height());
  const int w = static_cast<int>(img.width());
  auto u8 = (img.chw() * 255.0).round().clamp(0, 255).to(torch::kUInt8).contiguous();
  auto acc = u8.accessor<uint8_t, 3>();
  cv::Mat m(h, w, c == 1 ? CV_8UC1 : CV_8UC3);
  for (int y = 0; y < h; ++y) {
    uint8_t* row = m.ptr<uint8_t>(y);
    for (int x = 0; x < w; ++x) {
      if (c == 1) {
        row[x] = acc[0][y][x];
      } else {
        row[x * 3 + 0] = acc[2][y][x];
        row[x * 3 + 1] = acc[1][y][x];
        row[x * 3 + 2] = acc[0][y][x];
      }
    }
  }
  if (!cv::imwrite(path, m)) {
    throw IoError("cannot write image: " + path);
  }
}

void write_gray_png(const torch::Tensor& hw, const std::string& path) {
  if (hw.dim() != 2) {
    throw ShapeError("write_gray_png expects (H,W)");
  }
  auto u8 = (hw.detach().to(torch::kFloat32) * 255.0).round().clamp(0, 255).to(torch::kUInt8);
  u8 = u8.contiguous();
  cv::Mat m(static_cast<int>(hw.size(0)), static_cast<int>(hw.size(1)), CV_8UC1);
  std::memcpy(m.data, u8.data_ptr<uint8_t>(), u8.numel());
  if (!cv::imwrite(path, m)) {
    throw IoError("cannot write image: " + path);
  }
}

void write_depth_bin(const DepthMap& d, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) {
    throw IoError("cannot open for write: " + path);
  }
  os.write(kDepthMagic, sizeof(kDepthMagic));
  write_le<uint32_t>(os, kDepthVersion);
  write_le<uint32_t>(os, static_cast<uint32_t>(d.height()));
  write_le<uint32_t>(os, static_cast<uint32_t>(d.width()));
  auto flat = d.data().contiguous();
  os.write(reinterpret_cast<const char*>(flat.data_ptr<float>()), flat.numel() * sizeof(float));
  if (!os) {
    throw IoError("short write: " + path);
  }
}

DepthMap read_depth_bin(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) {
    throw IoError("cannot open: " + path);
  }
  char magic[8];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kDepthMagic, sizeof(magic)) != 0) {
    throw IoError("bad depth magic: " + path);
  }
  const auto version = read_le<uint32_t>(is);
  if (version != kDepthVersion) {
    throw IoError("unsupported depth version " + std::to_string(version) + ": " + path);
  }
  const auto h = read_le<uint32_t>(is);
  const auto w = read_le<uint32_t>(is);
  auto hw = torch::empty({static_cast<int64_t>(h), static_cast<int64_t>(w)}, torch::kFloat32);
  is.read(reinterpret_cast<char*>(hw.data_ptr<float>()),
          static_cast<std::streamsize>(hw.numel() * sizeof(float)));
  if (!is) {
    throw IoError("short read: " + path);
  }
  return DepthMap(hw);
}

void write_depth_png16(const DepthMap& d, const std::string& path, double meters_per_unit) {
  if (meters_per_unit <= 0) {
    throw ConfigError("meters_per_unit must be positive");
  }
  auto u16 = (d.data() / meters_per_unit).round().clamp(0, 65535).to(torch::kInt32).contiguous();
  const int h = static_cast<int>(d.height()), w = static_cast<int>(d.width());
  cv::Mat m(h, w, CV_16UC1);
  auto acc = u16.accessor<int32_t, 2>();
  for (int y = 0; y < h; ++y) {
    uint16_t* row = m.ptr<uint16_t>(y);
    for (int x = 0; x < w; ++x) {
      row[x] = static_cast<uint16_t>(acc[y][x]);
    }
  }
  if (!cv::imwrite(path, m)) {
    throw IoError("cannot write image: " + path);
  }
}

DepthMap read_depth_png16(const std::string& path, double meters_per_unit) {
  if (meters_per_unit <= 0) {
    throw ConfigError("meters_per_unit must be positive");
  }
  cv::Mat m = cv::imread(path, cv::IMREAD_UNCHANGED);
  if (m.empty()) {
    throw IoError("cannot read image: " + path);
  }
  if (m.type() != CV_16UC1) {
    throw IoError("expected 16-bit single-channel PNG: " + path);
  }
  auto hw = torch::empty({m.rows, m.cols}, torch::kFloat32);
  auto acc = hw.accessor<float, 2>();
  for (int y = 0; y < m.rows; ++y) {
    const uint16_t* row = m.ptr<uint16_t>(y);
    for (int x = 0; x < m.cols; ++x) {
      acc[y][x] = static_cast<float>(row[x] * meters_per_unit);
    }
  }
  return DepthMap(hw);
}

}  // namespace vifnet
