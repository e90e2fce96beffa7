#include "vifnet/haze.hpp"

namespace vifnet {

namespace {

torch::Tensor atmo_tensor(const HazeParams& p, int64_t channels) {
  if (channels == 1) {
    return torch::tensor({static_cast<float>(p.atmo_mean())}).view({1, 1, 1});
  }
  return torch::tensor({static_cast<float>(p.atmo[0]), static_cast<float>(p.atmo[1]),
                        static_cast<float>(p.atmo[2])})
      .view({3, 1, 1});
}

void check_haze_params(const HazeParams& p) {
  if (!(p.beta >= 0.0) || !std::isfinite(p.beta)) {
    throw InvalidInputError("scattering coefficient beta must be finite and >= 0");
  }
  for (double a : p.atmo) {
    if (!(a > 0.0 && a <= 1.0)) {
      throw InvalidInputError("atmospheric light components must lie in (0,1]");
    }
  }
}

}  // namespace

DepthMap::DepthMap(torch::Tensor hw) : data_(hw.to(torch::kFloat32).contiguous()) {
  if (data_.dim() != 2) {
    throw ShapeError("DepthMap expects a (H,W) tensor");
  }
  if (!data_.isfinite().all().item<bool>()) {
    throw InvalidInputError("DepthMap contains non-finite values");
  }
  if (data_.min().item<double>() < 0.0) {
    throw InvalidInputError("DepthMap contains negative depth");
  }
}

HazeParams::HazeParams(double beta_in, double atmo_scalar)
    : beta(beta_in), atmo{atmo_scalar, atmo_scalar, atmo_scalar} {
  check_haze_params(*this);
}

HazeParams::HazeParams(double beta_in, std::array<double, 3> atmo_in)
    : beta(beta_in), atmo(atmo_in) {
  check_haze_params(*this);
}

const std::vector<FogPreset>& fog_presets() {
  static const std::vector<FogPreset> presets{
      {"mist", 0.06}, {"medium", 0.12}, {"dense", 0.24}};
  return presets;
}

const FogPreset& fog_preset(const std::string& name) {
  for (const auto& p : fog_presets()) {
    if (p.name == name) return p;
  }
  throw ConfigError("unknown fog preset: " + name);
}

ImageTensor transmission_from_depth(const DepthMap& d, const HazeParams& p) {
  check_haze_params(p);
  auto t = torch::exp(-p.beta * d.data()).unsqueeze(0);
  return ImageTensor(t, ColorSpace::kGray);
}

ImageTensor apply_scattering(const ImageTensor& j, const ImageTensor& t, const HazeParams& p) {
  check_haze_params(p);
  if (t.channels() != 1) {
    throw ShapeError("transmission map must be single-channel");
  }
  if (t.height() != j.height() || t.width() != j.width()) {
    throw ShapeError("apply_scattering: J and t spatial dims differ");
  }
  auto atmo = atmo_tensor(p, j.channels());
  auto hazy = j.chw() * t.chw() + atmo * (1.0 - t.chw());
  return ImageTensor(hazy.clamp(0.0, 1.0), j.color_space());
}

ImageTensor analytic_dehaze(const ImageTensor& i, const ImageTensor& t, const HazeParams& p,
                            double t_floor) {
  check_haze_params(p);
  if (t.channels() != 1) {
    throw ShapeError("transmission map must be single-channel");
  }
  if (t.height() != i.height() || t.width() != i.width()) {
    throw ShapeError("analytic_dehaze: I and t spatial dims differ");
  }
  const double t_min = t.chw().min().item<double>();
  if (t_min < t_floor) {
    throw DegenerateTransmissionError("transmission " + std::to_string(t_min) +
                                      " below floor " + std::to_string(t_floor));
  }
  auto atmo = atmo_tensor(p, i.channels());
  auto j = (i.chw() - atmo * (1.0 - t.chw())) / t.chw();
  return ImageTensor(j.clamp(0.0, 1.0), i.color_space());
}

ImageTensor synth_infrared(const ImageTensor& j, const DepthMap& d, double beta_ir,
                           double atmo, uint64_t seed, double noise_sigma) {
  if (j.height() != d.height() || j.width() != d.width()) {
    throw ShapeError("synth_infrared: image and depth dims differ");
  }
  torch::Tensor lum;
  if (j.channels() == 3) {
    auto chw = j.chw();
    lum = 0.299 * chw[0] + 0.587 * chw[1] + 0.114 * chw[2];
  } else {
    lum = j.chw()[0];
  }
  auto t_ir = torch::exp(-beta_ir * d.data());
  auto ir = lum * t_ir + atmo * (1.0 - t_ir);
  if (noise_sigma > 0.0) {
    auto gen = torch::make_generator<torch::CPUGeneratorImpl>(seed);
    ir = ir + noise_sigma * torch::randn(ir.sizes(), gen);
  }
  return ImageTensor(ir.clamp(0.0, 1.0).unsqueeze(0), ColorSpace::kInfrared);
}

}  // namespace vifnet
