#pragma once

#include <vector>

#include "core/image.hpp"

namespace vofd {

// Square (2*radius+1)^2 stencil, row-major, indexed by (dy, dx) offsets.
struct Kernel2D {
  int radius = 0;
  std::vector<double> weights;  // (2*radius+1)^2

  Kernel2D() : weights(1, 0.0) {}
  explicit Kernel2D(int r)
      : radius(r),
        weights(static_cast<std::size_t>(2 * r + 1) * (2 * r + 1), 0.0) {}

  int side() const { return 2 * radius + 1; }
  double at(int dy, int dx) const {
    return weights[static_cast<std::size_t>(dy + radius) * side() + (dx + radius)];
  }
  double& at(int dy, int dx) {
    return weights[static_cast<std::size_t>(dy + radius) * side() + (dx + radius)];
  }
  double weight_sum() const;
};

// Sampled 2D Gaussian, renormalized to sum exactly 1. sigma > 0, radius >= 1.
Kernel2D gaussian_kernel(double sigma, int radius);

// radius = min(ceil(3*sigma), min(width, height) - 1): the 3-sigma default
// truncated so the reflected index stays inside the image.
int auto_radius(double sigma, int width, int height);

// 2D correlation with reflect-without-repeat boundary padding (index -k maps
// to k). Output shape equals input shape. Requires radius < min(w, h).
Image convolve(const Image& img, const Kernel2D& kernel);

struct GaborParams {
  double wavelength = 0.0;   // pixels (1/frequency)
  double orientation = 0.0;  // radians in [0, pi)
  double sigma = 0.0;        // envelope std, pixels
};

// Oriented band-pass bank: Gaussian envelope times cosine carrier,
//   H(x) = exp(-|x|^2 / (2 sigma^2)) * cos(2 pi f (cos th, sin th) . x),
// sampled without normalization or DC correction. Center frequencies are
// geometrically spaced from freq_low to freq_high across scales; envelope
// widths follow the half-peak overlap rule, sigma = (a+1) sqrt(2 ln 2) /
// (2 pi (a-1) f) with a the frequency ratio. All filters share one grid.
struct GaborBank {
  std::vector<Kernel2D> filters;
  std::vector<GaborParams> params;
  int radius = 0;

  int count() const { return static_cast<int>(filters.size()); }
  double max_sigma() const;
};

GaborBank gabor_bank(int orientations, int scales, double freq_low,
                     double freq_high, int radius);

// Sum of all bank kernels (they share a grid).
Kernel2D summed_kernel(const GaborBank& bank);

// Texture feature h = (sum_k H_k) * f, reflect boundary.
Image texture_feature(const Image& f, const GaborBank& bank);

}  // namespace vofd
