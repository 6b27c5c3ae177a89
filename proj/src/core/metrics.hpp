#pragma once

#include "core/image.hpp"

namespace vofd {

// 10*log10(255^2 / MSE), symmetric in its arguments. Returns +infinity when
// the images are identical (zero MSE); callers that serialize must map the
// infinity to a distinguished token.
double psnr(const Image& img, const Image& reference);

struct SsimParams {
  double window_sigma = 1.5;
  int window_radius = 5;  // 11x11 window
  double c1 = (0.01 * 255.0) * (0.01 * 255.0);
  double c2 = (0.03 * 255.0) * (0.03 * 255.0);
};

// Per-pixel SSIM map from Gaussian-weighted local statistics, reflect
// boundary. Requires min(w, h) >= window side.
Image ssim_map(const Image& img, const Image& reference,
               const SsimParams& params = {});

// Mean of the SSIM map, in [-1, 1].
double ssim(const Image& img, const Image& reference,
            const SsimParams& params = {});

}  // namespace vofd
