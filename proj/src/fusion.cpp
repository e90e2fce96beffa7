#include "vifnet/fusion.hpp"

namespace vifnet {

namespace {

torch::nn::Conv2d conv3x3(int in, int out, int stride = 1) {
  return torch::nn::Conv2d(torch::nn::Conv2dOptions(in, out, 3).stride(stride).padding(1));
}

torch::nn::Conv2d conv1x1(int in, int out) {
  return torch::nn::Conv2d(torch::nn::Conv2dOptions(in, out, 1));
}

torch::Tensor bilinear2x(const torch::Tensor& x) {
  return torch::upsample_bilinear2d(x, {x.size(2) * 2, x.size(3) * 2}, false);
}

void check_same_shape(const FeatureMap& a, const FeatureMap& b, const char* what) {
  if (a.scale != b.scale || !a.data.sizes().equals(b.data.sizes())) {
    throw ShapeError(std::string(what) + ": shape/scale mismatch");
  }
}

}  // namespace

void FusionWeights::validate() const {
  if (!(alpha >= 0.0) || !(beta_w >= 0.0) || !(alpha + beta_w > 0.0)) {
    throw ConfigError("fusion weights must be nonnegative with a positive sum");
  }
}

torch::Tensor inconsistency(const torch::Tensor& s_vi, const torch::Tensor& s_in,
                            const FusionWeights& w) {
  w.validate();
  return w.alpha * s_vi * s_in + w.beta_w * (1.0 - s_vi) * (1.0 - s_in);
}

FeatureMap inconsistency_map(const FeatureMap& s_vi, const FeatureMap& s_in,
                             const FusionWeights& w) {
  check_same_shape(s_vi, s_in, "inconsistency_map");
  return FeatureMap(inconsistency(s_vi.data, s_in.data, w), s_vi.scale);
}

FeatureMap weighted_structure(const FeatureMap& f, const FeatureMap& s_in) {
  check_same_shape(f, s_in, "weighted_structure");
  return FeatureMap(f.data * s_in.data, f.scale);
}

std::string to_string(FusionVariant v) {
  switch (v) {
    case FusionVariant::kBasicConcat: return "basic";
    case FusionVariant::kDsfeOnly: return "dsfe";
    case FusionVariant::kDsfeInconsistency: return "dsfe+inconsistency";
  }
  return "unknown";
}

FusionVariant fusion_variant_from_string(const std::string& s) {
  if (s == "basic") return FusionVariant::kBasicConcat;
  if (s == "dsfe") return FusionVariant::kDsfeOnly;
  if (s == "dsfe+inconsistency") return FusionVariant::kDsfeInconsistency;
  throw ConfigError("unknown fusion variant: " + s);
}

void VifnetConfig::validate() const {
  branch.validate();
  fusion.validate();
  if (dsfe_width < 8 || dsfe_width % 8 != 0) {
    throw ConfigError("dsfe_width must be a positive multiple of 8");
  }
}

Encoder2Impl::Encoder2Impl(const BranchConfig& cfg, std::array<int, 3> fusion_channels) {
  const int c = cfg.base_channels, r = cfg.cpab_reduction;
  stem = register_module("stem", conv3x3(3, c));
  stack1 = register_module("stack1", ScaleStack(c, cfg.enc_blocks, r));
  expand1 = register_module("expand1", conv1x1(fusion_channels[0], c));
  down1 = register_module("down1", conv3x3(2 * c, 2 * c, 2));
  stack2 = register_module("stack2", ScaleStack(2 * c, cfg.enc_blocks, r));
  expand2 = register_module("expand2", conv1x1(fusion_channels[1], 2 * c));
  down2 = register_module("down2", conv3x3(4 * c, 4 * c, 2));
  stack3 = register_module("stack3", ScaleStack(4 * c, cfg.enc_blocks, r));
  expand3 = register_module("expand3", conv1x1(fusion_channels[2], 4 * c));
  merge3 = register_module("merge3", conv3x3(8 * c, 4 * c));
}

Encoder2Impl::Raw Encoder2Impl::forward(const torch::Tensor& x,
                                        const std::array<torch::Tensor, 3>& fused) {
  auto e1 = stack1->forward(stem->forward(x));
  auto s1 = torch::cat({e1, expand1->forward(fused[0])}, 1);
  auto e2 = stack2->forward(down1->forward(s1));
  auto s2 = torch::cat({e2, expand2->forward(fused[1])}, 1);
  auto e3 = stack3->forward(down2->forward(s2));
  auto s3 = torch::cat({e3, expand3->forward(fused[2])}, 1);
  return Raw{s1, s2, merge3->forward(s3)};
}

Decoder2Impl::Decoder2Impl(const BranchConfig& cfg) {
  const int c = cfg.base_channels, r = cfg.cpab_reduction;
  dec3 = register_module("dec3", ScaleStack(4 * c, cfg.dec_blocks, r));
  up2 = register_module("up2", conv1x1(4 * c, 2 * c));
  merge2 = register_module("merge2", conv3x3(6 * c, 2 * c));
  dec2 = register_module("dec2", ScaleStack(2 * c, cfg.dec_blocks, r));
  up1 = register_module("up1", conv1x1(2 * c, c));
  merge1 = register_module("merge1", conv3x3(3 * c, c));
  dec1 = register_module("dec1", ScaleStack(c, cfg.dec_blocks, r));
  head = register_module("head", conv3x3(c, 3));
}

torch::Tensor Decoder2Impl::forward(const Encoder2Impl::Raw& enc) {
  auto d3 = dec3->forward(enc.bottleneck);
  auto d2 = dec2->forward(merge2->forward(torch::cat({bilinear2x(up2->forward(d3)), enc.s2}, 1)));
  auto d1 = dec1->forward(merge1->forward(torch::cat({bilinear2x(up1->forward(d2)), enc.s1}, 1)));
  return torch::sigmoid(head->forward(d1));
}

VifnetImpl::VifnetImpl(const VifnetConfig& cfg_in) : cfg(cfg_in) {
  cfg.validate();
  const int c = cfg.branch.base_channels;
  visible_branch = register_module("visible_branch", Branch(cfg.branch, 3, 3));
  infrared_branch = register_module("infrared_branch", Branch(cfg.branch, 3, 3));
  std::array<int, 3> fusion_channels{1, 1, 1};
  if (cfg.variant == FusionVariant::kBasicConcat) {
    fusion_channels = {c, 2 * c, 4 * c};  // raw infrared encoder widths
  } else {
    const std::array<int, 3> ed{2 * c, 4 * c, 8 * c};
    dsfe_vi = register_module("dsfe_vi", Dsfe(ed, cfg.dsfe_width, cfg.branch.cpab_reduction));
    dsfe_in = register_module("dsfe_in", Dsfe(ed, cfg.dsfe_width, cfg.branch.cpab_reduction));
  }
  encoder2 = register_module("encoder2", Encoder2(cfg.branch, fusion_channels));
  decoder2 = register_module("decoder2", Decoder2(cfg.branch));
}

torch::Tensor VifnetImpl::forward(const torch::Tensor& visible, const torch::Tensor& infrared) {
  return forward_detail(visible, infrared).output;
}

VifnetImpl::Detail VifnetImpl::forward_detail(const torch::Tensor& visible,
                                              const torch::Tensor& infrared) {
  if (!visible.sizes().equals(infrared.sizes())) {
    throw ShapeError("visible/infrared batches must be aligned");
  }
  if (visible.size(2) % 4 != 0 || visible.size(3) % 4 != 0) {
    throw ShapeError("input dims must be divisible by 4");
  }

  // Stage 1: coarse features per modality.
  auto vi = visible_branch->forward(visible);
  auto in = infrared_branch->forward(infrared);

  Detail det;
  std::array<torch::Tensor, 3> fused;
  if (cfg.variant == FusionVariant::kBasicConcat) {
    fused = {in.en[0], in.en[1], in.en[2]};
  } else {
    std::vector<torch::Tensor> ed_vi, ed_in;
    for (int i = 0; i < 3; ++i) {
      ed_vi.push_back(torch::cat({vi.en[i], vi.de[i]}, 1));
      ed_in.push_back(torch::cat({in.en[i], in.de[i]}, 1));
    }
    auto stru_vi = dsfe_vi->forward(ed_vi);
    auto stru_in = dsfe_in->forward(ed_in);
    det.stru_vi = stru_vi;
    det.stru_in = stru_in;
    // Stage 2: inconsistency-weighted infrared structure.
    for (int i = 0; i < 3; ++i) {
      if (cfg.variant == FusionVariant::kDsfeInconsistency) {
        det.fmap[i] = inconsistency(stru_vi[i], stru_in[i], cfg.fusion);
        det.weighted[i] = det.fmap[i] * stru_in[i];
      } else {
        det.weighted[i] = stru_in[i];
      }
      fused[i] = det.weighted[i];
    }
  }

  // Stage 3: dehazing encoder/decoder over the visible sum.
  auto enc = encoder2->forward(visible + vi.coarse, fused);
  det.output = decoder2->forward(enc);
  return det;
}

void check_model_finite(Vifnet& model) {
  for (const auto& p : model->parameters()) {
    if (!p.isfinite().all().item<bool>()) {
      throw CorruptModelError("model parameters contain non-finite values");
    }
  }
}

ImageTensor vifnet_forward(const ImageTensor& visible, const ImageTensor& infrared,
                           Vifnet& model) {
  if (visible.channels() != 3) {
    throw ShapeError("visible input must be 3-channel");
  }
  if (visible.height() != infrared.height() || visible.width() != infrared.width()) {
    throw ShapeError("visible/infrared dims must be aligned");
  }
  check_model_finite(model);
  auto ir = infrared.chw();
  if (ir.size(0) == 1) {
    ir = ir.repeat({3, 1, 1});
  }
  torch::NoGradGuard no_grad;
  auto out = model->forward(visible.chw().unsqueeze(0), ir.unsqueeze(0)).squeeze(0);
  return ImageTensor(out, ColorSpace::kRgb);
}

}  // namespace vifnet
