#pragma once

#include <torch/torch.h>

#include <vector>

#include "vifnet/errors.hpp"
#include "vifnet/image.hpp"

namespace vifnet {

struct LossWeights {
  double lambda1 = 1.0;   // L1
  double lambda2 = 0.2;   // MS-SSIM
  double lambda3 = 0.05;  // Dice edge

  void validate() const;  // all >= 0, at least one > 0
};

// Multi-scale SSIM configuration. Exponents are the standard five-scale
// weights truncated to M entries and renormalized to sum to one; the luminance
// factor applies at the coarsest scale only.
struct MsSsimConfig {
  int scales = 5;
  std::vector<double> exponents;  // beta_m = gamma_m
  double c1 = 0.01 * 0.01;
  double c2 = 0.03 * 0.03;

  static MsSsimConfig make(int scales);
  void validate() const;
  // smallest input extent this config accepts: 2^(M-1) * 11
  int64_t min_extent() const;
  // largest valid scale count for an image extent, capped at 5
  static int max_scales_for(int64_t min_dim);
};

constexpr double kDiceSmoothing = 1.0;  // C3
constexpr int kSsimWindow = 11;
constexpr double kSsimSigma = 1.5;

// Mean absolute error over all elements.
torch::Tensor l1_loss(const torch::Tensor& x, const torch::Tensor& y);

// 1 - prod_m cs_m^{w_m} * l_M^{w_M}; gaussian 11x11 windows, valid positions,
// 2x2 mean pooling between scales. In [0,2], zero iff x == y.
torch::Tensor ms_ssim_loss(const torch::Tensor& x, const torch::Tensor& y,
                           const MsSsimConfig& cfg);

// Sum over the 3 channels of (sum e_out^2 + sum e_gt^2 + C3) /
// (2 sum e_out*e_gt + C3) on Sobel edge maps; >= 3 with equality iff the edge
// maps agree. hard_threshold switches to binarized maps (evaluation only).
torch::Tensor dice_edge_loss(const torch::Tensor& x, const torch::Tensor& y,
                             double hard_threshold = 0.0);

torch::Tensor total_loss(const torch::Tensor& x, const torch::Tensor& y, const LossWeights& w,
                         const MsSsimConfig& cfg);

// Evaluation metrics, computed in double precision.
double psnr(const torch::Tensor& x, const torch::Tensor& y);
double ssim(const torch::Tensor& x, const torch::Tensor& y);

double psnr(const ImageTensor& x, const ImageTensor& y);
double ssim(const ImageTensor& x, const ImageTensor& y);

}  // namespace vifnet
