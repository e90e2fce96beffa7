#pragma once

#include <torch/torch.h>

#include <vector>

#include "vifnet/errors.hpp"
#include "vifnet/image.hpp"

namespace vifnet {

struct BranchConfig {
  int base_channels = 24;   // encoder widths are (c, 2c, 4c)
  int n_scales = 3;         // fixed
  int cpab_reduction = 8;   // channel-attention bottleneck ratio
  int enc_blocks = 2;       // residual blocks per encoder scale
  int dec_blocks = 2;       // residual blocks per decoder scale

  void validate() const;
};

// Per-channel PReLU slopes for the functional form.
struct PReLUParams {
  torch::Tensor slopes;  // (C,)
};

// P(k) = k if k > 0 else a_c * k, slope per channel of a (N,C,H,W) map.
FeatureMap prelu(const FeatureMap& x, const PReLUParams& p);

// Channel-Pixel Attention Block: squeeze-excite style channel gate followed by
// a single-channel pixel gate, both sigmoid-bounded, PReLU inside.
class CpabImpl : public torch::nn::Module {
 public:
  CpabImpl(int channels, int reduction);
  torch::Tensor forward(const torch::Tensor& x);

  torch::nn::Conv2d ca_down{nullptr}, ca_up{nullptr};
  torch::nn::PReLU ca_act{nullptr};
  torch::nn::Conv2d pa_down{nullptr}, pa_up{nullptr};
  torch::nn::PReLU pa_act{nullptr};
};
TORCH_MODULE(Cpab);

class ResBlockImpl : public torch::nn::Module {
 public:
  explicit ResBlockImpl(int channels);
  torch::Tensor forward(const torch::Tensor& x);

  torch::nn::Conv2d conv1{nullptr}, conv2{nullptr};
  torch::nn::PReLU act{nullptr};
};
TORCH_MODULE(ResBlock);

// Residual blocks followed by a CPAB; the repeated per-scale unit.
class ScaleStackImpl : public torch::nn::Module {
 public:
  ScaleStackImpl(int channels, int blocks, int reduction);
  torch::Tensor forward(torch::Tensor x);

  torch::nn::ModuleList blocks;
  Cpab cpab{nullptr};
};
TORCH_MODULE(ScaleStack);

struct BranchOutputs {
  FeaturePyramid encoded;  // F_En1..3 at channels (c, 2c, 4c)
  FeaturePyramid decoded;  // F_De1..3, same widths per scale
  FeatureMap coarse;       // full-resolution reconstruction, input channel count
};

// One modality's coarse extractor: 3-scale encoder, mirrored decoder with
// skip concatenation, linear reconstruction head.
class BranchImpl : public torch::nn::Module {
 public:
  BranchImpl(const BranchConfig& cfg, int in_channels, int out_channels);

  struct Raw {
    std::vector<torch::Tensor> en;  // scales 1..3
    std::vector<torch::Tensor> de;  // scales 1..3
    torch::Tensor coarse;
  };
  Raw forward(const torch::Tensor& nchw);

  BranchConfig cfg;
  torch::nn::Conv2d stem{nullptr}, down1{nullptr}, down2{nullptr};
  ScaleStack enc1{nullptr}, enc2{nullptr}, enc3{nullptr};
  ScaleStack dec3{nullptr}, dec2{nullptr}, dec1{nullptr};
  torch::nn::Conv2d up2{nullptr}, up1{nullptr};      // 1x1 channel cuts before bilinear
  torch::nn::Conv2d merge2{nullptr}, merge1{nullptr};
  torch::nn::Conv2d head{nullptr};
};
TORCH_MODULE(Branch);

// Public, validating entry point: H and W must be divisible by 4.
BranchOutputs branch_forward(const ImageTensor& img, Branch& branch);

}  // namespace vifnet
