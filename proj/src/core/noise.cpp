#include "core/noise.hpp"

#include <algorithm>
#include <cmath>

#include "core/parallel.hpp"

namespace vofd {

void NoiseSpec::validate() const {
  if (looks < 1) throw ConfigError("noise.looks: must be a positive integer");
}

double SplitMix64::next_normal() {
  for (;;) {
    const double u = 2.0 * next_unit() - 1.0;
    const double v = 2.0 * next_unit() - 1.0;
    const double s = u * u + v * v;
    if (s >= 1.0 || s == 0.0) continue;
    return u * std::sqrt(-2.0 * std::log(s) / s);
  }
}

double gamma_sample(SplitMix64& rng, double shape) {
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = rng.next_normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.next_unit();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

Image gamma_noise_field(int width, int height, const NoiseSpec& spec) {
  spec.validate();
  Image out(width, height);
  const double shape = static_cast<double>(spec.looks);
  const double scale = 1.0 / shape;
  double* data = out.data();
  parallel_for(height, [&](int row_begin, int row_end) {
    for (int i = row_begin; i < row_end; ++i) {
      for (int j = 0; j < width; ++j) {
        const std::uint64_t index =
            static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(width) + j;
        SplitMix64 rng(splitmix64_at(spec.seed, index));
        data[index] = gamma_sample(rng, shape) * scale;
      }
    }
  });
  return out;
}

Image apply_multiplicative(const Image& img, const Image& noise) {
  require_same_shape(img, noise, "apply_multiplicative");
  Image out(img.width(), img.height());
  const double* a = img.data();
  const double* b = noise.data();
  double* o = out.data();
  for (std::size_t i = 0; i < img.size(); ++i) o[i] = std::max(0.0, a[i] * b[i]);
  return out;
}

}  // namespace vofd
