#pragma once

#include <torch/torch.h>

#include <array>
#include <vector>

#include "vifnet/backbone.hpp"
#include "vifnet/image.hpp"

namespace vifnet {

// Three single-channel deep structure maps, one per scale, values in (0,1).
struct StructureMaps {
  std::array<FeatureMap, 3> stru;
};

// Same-scale encoder/decoder concatenation, F_EDi = F_Eni (+) F_Dei.
FeatureMap fuse_scale(const FeatureMap& en, const FeatureMap& de);

// conv3x3 -> PReLU -> CPAB, the repeated block of the structure cascade. The
// conv reconciles the channel counts created by concatenation; its output
// width is fixed.
class StructureBlockImpl : public torch::nn::Module {
 public:
  StructureBlockImpl(int in_channels, int width, int reduction);
  torch::Tensor forward(const torch::Tensor& x);

  torch::nn::Conv2d conv{nullptr};
  torch::nn::PReLU act{nullptr};
  Cpab cpab{nullptr};
};
TORCH_MODULE(StructureBlock);

// Deep Structure Feature Extraction. With B a structure block, D mean pooling
// and S a 3x3 conv to one channel plus sigmoid:
//   Stru_1 = S1(B1(F_ED1))
//   mid    = B2(D(F_ED1) (+) F_ED2)
//   Stru_2 = S2(B3(mid))
//   Stru_3 = S3(B5(B4(D(mid) (+) F_ED3)))
class DsfeImpl : public torch::nn::Module {
 public:
  // ed_channels: channel counts of F_ED1..3; width: internal block width.
  DsfeImpl(std::array<int, 3> ed_channels, int width = 32, int reduction = 8);

  std::array<torch::Tensor, 3> forward(const std::vector<torch::Tensor>& f_ed);

  StructureBlock b1{nullptr}, b2{nullptr}, b3{nullptr}, b4{nullptr}, b5{nullptr};
  torch::nn::Conv2d sig1{nullptr}, sig2{nullptr}, sig3{nullptr};
};
TORCH_MODULE(Dsfe);

// Validating entry point over typed maps; outputs strictly inside (0,1).
StructureMaps dsfe_forward(const std::vector<FeatureMap>& f_ed, Dsfe& module);

}  // namespace vifnet
