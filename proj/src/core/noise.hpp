#pragma once

#include <cstdint>

#include "core/image.hpp"

namespace vofd {

// Multiplicative Gamma speckle: eta ~ Gamma(shape=looks, scale=1/looks),
// mean 1, variance 1/looks. Smaller looks means heavier noise.
struct NoiseSpec {
  int looks = 4;
  std::uint64_t seed = 42;

  void validate() const;
};

// splitmix64 (Vigna's reference mixer). The integer layer is bit-exact on
// every platform.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// The (index+1)-th output of the splitmix64 sequence seeded with `seed`,
// computed in O(1). Used as the per-pixel stream key, which makes field
// generation counter-based: pixel i depends only on (seed, i).
inline std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t state = seed + (index + 1) * 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() { return splitmix64_next(state_); }

  // Uniform double in [0, 1), 53 random bits.
  double next_unit() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  // Standard normal via the Marsaglia polar method.
  double next_normal();

 private:
  std::uint64_t state_;
};

// Marsaglia-Tsang squeeze sampler; requires shape >= 1 (always true here
// since looks is a positive integer).
double gamma_sample(SplitMix64& rng, double shape);

// I.i.d. Gamma(looks, 1/looks) field, fully determined by (width, height,
// spec); independent of thread count.
Image gamma_noise_field(int width, int height, const NoiseSpec& spec);

// Pointwise product, clamped to be >= 0.
Image apply_multiplicative(const Image& img, const Image& noise);

}  // namespace vofd
