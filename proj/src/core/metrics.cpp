#include "core/metrics.hpp"

#include <cmath>
#include <limits>

#include "core/filters.hpp"

namespace vofd {

double psnr(const Image& img, const Image& reference) {
  require_same_shape(img, reference, "psnr");
  double sum = 0.0, comp = 0.0;
  const double* a = img.data();
  const double* b = reference.data();
  for (std::size_t i = 0; i < img.size(); ++i) {
    const double d = a[i] - b[i];
    const double x = d * d;
    const double t = sum + x;
    comp += (std::abs(sum) >= x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  const double mse = (sum + comp) / static_cast<double>(img.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

namespace {

Image elementwise_product(const Image& a, const Image& b) {
  Image out(a.width(), a.height());
  const double* pa = a.data();
  const double* pb = b.data();
  double* po = out.data();
  for (std::size_t i = 0; i < a.size(); ++i) po[i] = pa[i] * pb[i];
  return out;
}

}  // namespace

Image ssim_map(const Image& img, const Image& reference, const SsimParams& params) {
  require_same_shape(img, reference, "ssim");
  const int side = 2 * params.window_radius + 1;
  if (std::min(img.width(), img.height()) < side)
    throw DimensionError("ssim: image smaller than the " + std::to_string(side) +
                         "x" + std::to_string(side) + " window");

  const Kernel2D w = gaussian_kernel(params.window_sigma, params.window_radius);
  const Image mu_x = convolve(img, w);
  const Image mu_y = convolve(reference, w);
  const Image xx = convolve(elementwise_product(img, img), w);
  const Image yy = convolve(elementwise_product(reference, reference), w);
  const Image xy = convolve(elementwise_product(img, reference), w);

  Image map(img.width(), img.height());
  for (std::size_t i = 0; i < map.size(); ++i) {
    const double mx = mu_x.data()[i], my = mu_y.data()[i];
    const double var_x = xx.data()[i] - mx * mx;
    const double var_y = yy.data()[i] - my * my;
    const double cov = xy.data()[i] - mx * my;
    map.data()[i] = ((2.0 * mx * my + params.c1) * (2.0 * cov + params.c2)) /
                    ((mx * mx + my * my + params.c1) * (var_x + var_y + params.c2));
  }
  return map;
}

double ssim(const Image& img, const Image& reference, const SsimParams& params) {
  return mean(ssim_map(img, reference, params));
}

}  // namespace vofd
