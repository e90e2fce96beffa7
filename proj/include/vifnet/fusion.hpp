#pragma once

#include <torch/torch.h>

#include <array>
#include <optional>
#include <string>

#include "vifnet/backbone.hpp"
#include "vifnet/dsfe.hpp"
#include "vifnet/image.hpp"

namespace vifnet {

// Coefficients of the inconsistency weighting. beta_w avoids a name clash with
// the scattering coefficient.
struct FusionWeights {
  double alpha = 0.5;
  double beta_w = 0.5;

  void validate() const;
};

// F = alpha * s_vi * s_in + beta_w * (1 - s_vi) * (1 - s_in), elementwise.
torch::Tensor inconsistency(const torch::Tensor& s_vi, const torch::Tensor& s_in,
                            const FusionWeights& w);
FeatureMap inconsistency_map(const FeatureMap& s_vi, const FeatureMap& s_in,
                             const FusionWeights& w);

// f = F * s_in, elementwise.
FeatureMap weighted_structure(const FeatureMap& f, const FeatureMap& s_in);

// Which fusion pathway feeds Encoder2. BasicConcat injects raw infrared
// encoder features; DsfeOnly injects the infrared structure maps; full
// inconsistency gates them first. The ablation grid sweeps these.
enum class FusionVariant { kBasicConcat, kDsfeOnly, kDsfeInconsistency };

std::string to_string(FusionVariant v);
FusionVariant fusion_variant_from_string(const std::string& s);

struct VifnetConfig {
  BranchConfig branch;
  FusionWeights fusion;
  FusionVariant variant = FusionVariant::kDsfeInconsistency;
  int dsfe_width = 32;

  void validate() const;
};

// Second-stage encoder: consumes (visible image + coarse visible features) and
// concatenates the per-scale fusion maps before each downsampling step.
class Encoder2Impl : public torch::nn::Module {
 public:
  Encoder2Impl(const BranchConfig& cfg, std::array<int, 3> fusion_channels);

  struct Raw {
    torch::Tensor s1, s2;      // post-concat skip features (2c, 4c)
    torch::Tensor bottleneck;  // 4c at scale 3
  };
  Raw forward(const torch::Tensor& x, const std::array<torch::Tensor, 3>& fused);

  torch::nn::Conv2d stem{nullptr}, down1{nullptr}, down2{nullptr}, merge3{nullptr};
  torch::nn::Conv2d expand1{nullptr}, expand2{nullptr}, expand3{nullptr};
  ScaleStack stack1{nullptr}, stack2{nullptr}, stack3{nullptr};
};
TORCH_MODULE(Encoder2);

// Mirrored decoder with skips onto Encoder2's fusion features, sigmoid head.
class Decoder2Impl : public torch::nn::Module {
 public:
  explicit Decoder2Impl(const BranchConfig& cfg);
  torch::Tensor forward(const Encoder2Impl::Raw& enc);

  ScaleStack dec3{nullptr}, dec2{nullptr}, dec1{nullptr};
  torch::nn::Conv2d up2{nullptr}, up1{nullptr}, merge2{nullptr}, merge1{nullptr}, head{nullptr};
};
TORCH_MODULE(Decoder2);

// The full three-stage network: dual coarse branches, per-modality structure
// extraction, inconsistency-weighted fusion, and the dehazing encoder/decoder.
class VifnetImpl : public torch::nn::Module {
 public:
  explicit VifnetImpl(const VifnetConfig& cfg);

  // visible (N,3,H,W), infrared (N,3,H,W) with the single channel replicated.
  torch::Tensor forward(const torch::Tensor& visible, const torch::Tensor& infrared);

  struct Detail {
    torch::Tensor output;
    std::array<torch::Tensor, 3> stru_vi{}, stru_in{};  // empty for BasicConcat
    std::array<torch::Tensor, 3> fmap{}, weighted{};    // Eq. 6 / Eq. 7 products
  };
  Detail forward_detail(const torch::Tensor& visible, const torch::Tensor& infrared);

  VifnetConfig cfg;
  Branch visible_branch{nullptr}, infrared_branch{nullptr};
  Dsfe dsfe_vi{nullptr}, dsfe_in{nullptr};
  Encoder2 encoder2{nullptr};
  Decoder2 decoder2{nullptr};
};
TORCH_MODULE(Vifnet);

// Validating single-image entry point. The infrared image is single-channel
// and gets replicated to the branch input width here.
ImageTensor vifnet_forward(const ImageTensor& visible, const ImageTensor& infrared,
                           Vifnet& model);

// Throws CorruptModelError when any parameter is non-finite.
void check_model_finite(Vifnet& model);

}  // namespace vifnet
