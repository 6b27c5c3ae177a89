#include "core/filters.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "core/parallel.hpp"

namespace vofd {

double Kernel2D::weight_sum() const { return compensated_sum(weights); }

Kernel2D gaussian_kernel(double sigma, int radius) {
  if (!(sigma > 0.0)) throw ConfigError("gaussian_kernel: sigma must be positive");
  if (radius < 1) throw ConfigError("gaussian_kernel: radius must be >= 1");
  Kernel2D k(radius);
  const double inv = 1.0 / (2.0 * sigma * sigma);
  for (int dy = -radius; dy <= radius; ++dy)
    for (int dx = -radius; dx <= radius; ++dx)
      k.at(dy, dx) = std::exp(-(static_cast<double>(dx) * dx + static_cast<double>(dy) * dy) * inv);
  const double total = compensated_sum(k.weights);
  for (double& w : k.weights) w /= total;
  return k;
}

int auto_radius(double sigma, int width, int height) {
  const int r = static_cast<int>(std::ceil(3.0 * sigma));
  return std::max(1, std::min(r, std::min(width, height) - 1));
}

namespace {

inline int reflect(int idx, int n) {
  if (idx < 0) return -idx;
  if (idx >= n) return 2 * (n - 1) - idx;
  return idx;
}

}  // namespace

Image convolve(const Image& img, const Kernel2D& kernel) {
  const int w = img.width(), h = img.height(), r = kernel.radius;
  if (r >= std::min(w, h))
    throw DimensionError("convolve: kernel too large for image");
  Image out(w, h);
  parallel_for(h, [&](int row_begin, int row_end) {
    for (int i = row_begin; i < row_end; ++i) {
      for (int j = 0; j < w; ++j) {
        double acc = 0.0;
        for (int dy = -r; dy <= r; ++dy) {
          const int ii = reflect(i + dy, h);
          for (int dx = -r; dx <= r; ++dx)
            acc += kernel.at(dy, dx) * img(ii, reflect(j + dx, w));
        }
        out(i, j) = acc;
      }
    }
  });
  return out;
}

double GaborBank::max_sigma() const {
  double m = 0.0;
  for (const auto& p : params) m = std::max(m, p.sigma);
  return m;
}

GaborBank gabor_bank(int orientations, int scales, double freq_low,
                     double freq_high, int radius) {
  if (orientations < 1) throw ConfigError("gabor_bank: orientations must be >= 1");
  if (scales < 1) throw ConfigError("gabor_bank: scales must be >= 1");
  if (!(freq_low > 0.0 && freq_low < freq_high && freq_high < 0.5))
    throw ConfigError("gabor_bank: need 0 < freq_low < freq_high < 0.5");
  if (radius < 1) throw ConfigError("gabor_bank: radius must be >= 1");

  // Single scale gets a one-octave bandwidth; otherwise a is the geometric
  // spacing ratio between adjacent center frequencies.
  const double a = scales > 1
                       ? std::pow(freq_high / freq_low, 1.0 / (scales - 1))
                       : 2.0;
  const double half_peak = std::sqrt(2.0 * std::numbers::ln2);

  GaborBank bank;
  bank.radius = radius;
  bank.filters.reserve(static_cast<std::size_t>(orientations) * scales);
  bank.params.reserve(bank.filters.capacity());

  for (int s = 0; s < scales; ++s) {
    const double freq = freq_low * std::pow(a, s);
    const double sigma =
        (a + 1.0) * half_peak / (2.0 * std::numbers::pi * (a - 1.0) * freq);
    for (int o = 0; o < orientations; ++o) {
      const double theta = std::numbers::pi * o / orientations;
      const double bx = std::cos(theta), by = std::sin(theta);
      Kernel2D k(radius);
      const double env = 1.0 / (2.0 * sigma * sigma);
      for (int dy = -radius; dy <= radius; ++dy) {
        for (int dx = -radius; dx <= radius; ++dx) {
          const double r2 = static_cast<double>(dx) * dx + static_cast<double>(dy) * dy;
          const double carrier =
              2.0 * std::numbers::pi * freq * (bx * dx + by * dy);
          k.at(dy, dx) = std::exp(-r2 * env) * std::cos(carrier);
        }
      }
      bank.filters.push_back(std::move(k));
      bank.params.push_back({1.0 / freq, theta, sigma});
    }
  }
  return bank;
}

Kernel2D summed_kernel(const GaborBank& bank) {
  if (bank.filters.empty()) throw ConfigError("summed_kernel: empty bank");
  Kernel2D sum(bank.radius);
  for (const auto& f : bank.filters)
    for (std::size_t i = 0; i < sum.weights.size(); ++i)
      sum.weights[i] += f.weights[i];
  return sum;
}

Image texture_feature(const Image& f, const GaborBank& bank) {
  return convolve(f, summed_kernel(bank));
}

}  // namespace vofd
