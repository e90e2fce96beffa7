#include "vifnet/dsfe.hpp"

namespace vifnet {

namespace {

// keeps sigmoid outputs strictly inside (0,1) even when the logits saturate
constexpr double kStrictEps = 1e-6;

torch::Tensor squash(const torch::nn::Conv2d& conv, const torch::Tensor& x) {
  return torch::sigmoid(conv->forward(x)).clamp(kStrictEps, 1.0 - kStrictEps);
}

torch::Tensor pool2x(const torch::Tensor& x) { return torch::avg_pool2d(x, 2, 2); }

}  // namespace

FeatureMap fuse_scale(const FeatureMap& en, const FeatureMap& de) {
  return concat_channels(en, de);
}

StructureBlockImpl::StructureBlockImpl(int in_channels, int width, int reduction) {
  conv = register_module(
      "conv", torch::nn::Conv2d(torch::nn::Conv2dOptions(in_channels, width, 3).padding(1)));
  act = register_module("act",
                        torch::nn::PReLU(torch::nn::PReLUOptions().num_parameters(width)));
  cpab = register_module("cpab", Cpab(width, reduction));
}

torch::Tensor StructureBlockImpl::forward(const torch::Tensor& x) {
  return cpab->forward(act->forward(conv->forward(x)));
}

DsfeImpl::DsfeImpl(std::array<int, 3> ed, int width, int reduction) {
  b1 = register_module("b1", StructureBlock(ed[0], width, reduction));
  b2 = register_module("b2", StructureBlock(ed[0] + ed[1], width, reduction));
  b3 = register_module("b3", StructureBlock(width, width, reduction));
  b4 = register_module("b4", StructureBlock(width + ed[2], width, reduction));
  b5 = register_module("b5", StructureBlock(width, width, reduction));
  auto sig_conv = [&](const char* name) {
    return register_module(
        name, torch::nn::Conv2d(torch::nn::Conv2dOptions(width, 1, 3).padding(1)));
  };
  sig1 = sig_conv("sig1");
  sig2 = sig_conv("sig2");
  sig3 = sig_conv("sig3");
}

std::array<torch::Tensor, 3> DsfeImpl::forward(const std::vector<torch::Tensor>& f_ed) {
  const auto& ed1 = f_ed.at(0);
  const auto& ed2 = f_ed.at(1);
  const auto& ed3 = f_ed.at(2);

  auto stru1 = squash(sig1, b1->forward(ed1));
  auto mid = b2->forward(torch::cat({pool2x(ed1), ed2}, 1));
  auto stru2 = squash(sig2, b3->forward(mid));
  auto stru3 = squash(sig3, b5->forward(b4->forward(torch::cat({pool2x(mid), ed3}, 1))));
  return {stru1, stru2, stru3};
}

StructureMaps dsfe_forward(const std::vector<FeatureMap>& f_ed, Dsfe& module) {
  if (f_ed.size() != 3) {
    throw ShapeError("dsfe_forward expects exactly 3 scales");
  }
  for (int i = 0; i < 3; ++i) {
    if (f_ed[i].scale != i + 1) {
      throw ShapeError("dsfe_forward scales must be 1,2,3 in order");
    }
    if (i > 0 && (f_ed[i].height() != f_ed[i - 1].height() / 2 ||
                  f_ed[i].width() != f_ed[i - 1].width() / 2)) {
      throw ShapeError("dsfe_forward spatial dims must halve between scales");
    }
  }
  auto out = module->forward({f_ed[0].data, f_ed[1].data, f_ed[2].data});
  return StructureMaps{{FeatureMap(out[0], 1), FeatureMap(out[1], 2), FeatureMap(out[2], 3)}};
}

}  // namespace vifnet
