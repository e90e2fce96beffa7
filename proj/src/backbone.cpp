#include "vifnet/backbone.hpp"

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

}  // namespace

void BranchConfig::validate() const {
  if (base_channels < 4) {
    throw ConfigError("base_channels must be >= 4");
  }
  if (n_scales != 3) {
    throw ConfigError("n_scales is fixed at 3");
  }
  if (cpab_reduction < 1 || base_channels % cpab_reduction != 0) {
    throw ConfigError("cpab_reduction must divide base_channels");
  }
  if (enc_blocks < 1 || dec_blocks < 1) {
    throw ConfigError("residual block counts must be >= 1");
  }
}

FeatureMap prelu(const FeatureMap& x, const PReLUParams& p) {
  if (p.slopes.dim() != 1 || p.slopes.size(0) != x.channels()) {
    throw ShapeError("prelu slope count must equal channel count");
  }
  return FeatureMap(torch::prelu(x.data, p.slopes.to(x.data.dtype())), x.scale);
}

CpabImpl::CpabImpl(int channels, int reduction) {
  if (reduction < 1 || channels % reduction != 0) {
    throw ConfigError("CPAB reduction must divide the channel count");
  }
  const int mid = channels / reduction;
  ca_down = register_module("ca_down", conv1x1(channels, mid));
  ca_act = register_module("ca_act", torch::nn::PReLU(torch::nn::PReLUOptions().num_parameters(mid)));
  ca_up = register_module("ca_up", conv1x1(mid, channels));
  pa_down = register_module("pa_down", conv1x1(channels, mid));
  pa_act = register_module("pa_act", torch::nn::PReLU(torch::nn::PReLUOptions().num_parameters(mid)));
  pa_up = register_module("pa_up", conv1x1(mid, 1));
}

torch::Tensor CpabImpl::forward(const torch::Tensor& x) {
  auto ca = torch::adaptive_avg_pool2d(x, {1, 1});
  ca = torch::sigmoid(ca_up->forward(ca_act->forward(ca_down->forward(ca))));
  auto y = x * ca;
  auto pa = torch::sigmoid(pa_up->forward(pa_act->forward(pa_down->forward(y))));
  return y * pa;
}

ResBlockImpl::ResBlockImpl(int channels) {
  conv1 = register_module("conv1", conv3x3(channels, channels));
  act = register_module("act", torch::nn::PReLU(torch::nn::PReLUOptions().num_parameters(channels)));
  conv2 = register_module("conv2", conv3x3(channels, channels));
}

torch::Tensor ResBlockImpl::forward(const torch::Tensor& x) {
  return x + conv2->forward(act->forward(conv1->forward(x)));
}

ScaleStackImpl::ScaleStackImpl(int channels, int n_blocks, int reduction)
    : blocks(torch::nn::ModuleList()) {
  for (int i = 0; i < n_blocks; ++i) {
    blocks->push_back(ResBlock(channels));
  }
  register_module("blocks", blocks);
  cpab = register_module("cpab", Cpab(channels, reduction));
}

torch::Tensor ScaleStackImpl::forward(torch::Tensor x) {
  for (auto& b : *blocks) {
    x = b->as<ResBlockImpl>()->forward(x);
  }
  return cpab->forward(x);
}

BranchImpl::BranchImpl(const BranchConfig& cfg_in, int in_channels, int out_channels)
    : cfg(cfg_in) {
  cfg.validate();
  const int c = cfg.base_channels, r = cfg.cpab_reduction;
  stem = register_module("stem", conv3x3(in_channels, c));
  enc1 = register_module("enc1", ScaleStack(c, cfg.enc_blocks, r));
  down1 = register_module("down1", conv3x3(c, 2 * c, 2));
  enc2 = register_module("enc2", ScaleStack(2 * c, cfg.enc_blocks, r));
  down2 = register_module("down2", conv3x3(2 * c, 4 * c, 2));
  enc3 = register_module("enc3", ScaleStack(4 * c, cfg.enc_blocks, r));

  dec3 = register_module("dec3", ScaleStack(4 * c, cfg.dec_blocks, r));
  up2 = register_module("up2", conv1x1(4 * c, 2 * c));
  merge2 = register_module("merge2", conv3x3(4 * c, 2 * c));
  dec2 = register_module("dec2", ScaleStack(2 * c, cfg.dec_blocks, r));
  up1 = register_module("up1", conv1x1(2 * c, c));
  merge1 = register_module("merge1", conv3x3(2 * c, c));
  dec1 = register_module("dec1", ScaleStack(c, cfg.dec_blocks, r));
  head = register_module("head", conv3x3(c, out_channels));
}

BranchImpl::Raw BranchImpl::forward(const torch::Tensor& nchw) {
  auto e1 = enc1->forward(stem->forward(nchw));
  auto e2 = enc2->forward(down1->forward(e1));
  auto e3 = enc3->forward(down2->forward(e2));

  auto d3 = dec3->forward(e3);
  auto d2 = dec2->forward(merge2->forward(torch::cat({bilinear2x(up2->forward(d3)), e2}, 1)));
  auto d1 = dec1->forward(merge1->forward(torch::cat({bilinear2x(up1->forward(d2)), e1}, 1)));

  Raw out;
  out.en = {e1, e2, e3};
  out.de = {d1, d2, d3};
  out.coarse = head->forward(d1);
  return out;
}

BranchOutputs branch_forward(const ImageTensor& img, Branch& branch) {
  if (img.height() % 4 != 0 || img.width() % 4 != 0) {
    throw ShapeError("branch_forward needs H and W divisible by 4");
  }
  auto raw = branch->forward(img.chw().unsqueeze(0));
  for (const auto& t : {raw.en[0], raw.en[1], raw.en[2], raw.de[0], raw.de[1], raw.de[2],
                        raw.coarse}) {
    if (!t.isfinite().all().item<bool>()) {
      throw CorruptModelError("branch produced non-finite features");
    }
  }
  return BranchOutputs{
      FeaturePyramid(FeatureMap(raw.en[0], 1), FeatureMap(raw.en[1], 2), FeatureMap(raw.en[2], 3)),
      FeaturePyramid(FeatureMap(raw.de[0], 1), FeatureMap(raw.de[1], 2), FeatureMap(raw.de[2], 3)),
      FeatureMap(raw.coarse, 1)};
}

}  // namespace vifnet
