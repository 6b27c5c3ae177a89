#include <doctest.h>

#include <cmath>
#include <numbers>

#include "core/filters.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

using namespace vofd;

TEST_CASE("gaussian kernel: normalization, symmetry, unimodality") {
  const Kernel2D k = gaussian_kernel(1.0, 3);
  CHECK(k.weight_sum() == doctest::Approx(1.0).epsilon(1e-12));
  for (int dy = -3; dy <= 3; ++dy)
    for (int dx = -3; dx <= 3; ++dx) {
      CHECK(k.at(dy, dx) == k.at(-dy, -dx));  // 180-degree symmetry
      CHECK(k.at(0, 0) >= k.at(dy, dx));
    }
  // center/corner ratio from the closed form exp((9+9)/2) = exp(9)
  CHECK(k.at(0, 0) / k.at(3, 3) == doctest::Approx(std::exp(9.0)).epsilon(1e-12));
  CHECK_THROWS_AS(gaussian_kernel(0.0, 3), ConfigError);
  CHECK_THROWS_AS(gaussian_kernel(-1.0, 3), ConfigError);
}

TEST_CASE("convolve: partition of unity and identity kernel") {
  const Image c(10, 8, 42.0);
  const Image out = convolve(c, gaussian_kernel(1.5, 2));
  for (double v : out.pixels()) CHECK(v == doctest::Approx(42.0).epsilon(1e-12));

  Kernel2D identity;  // radius 0
  identity.weights[0] = 1.0;
  const Image img = testing::random_image(9, 9, 3);
  const Image same = convolve(img, identity);
  for (std::size_t i = 0; i < img.size(); ++i)
    CHECK(same.pixels()[i] == img.pixels()[i]);
}

TEST_CASE("convolve matches the quadruple-loop oracle on a ramp") {
  Image ramp(5, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) ramp(i, j) = 10.0 * i + j;
  const Kernel2D k = gaussian_kernel(1.0, 2);
  const Image fast = convolve(ramp, k);
  const Image ref = oracle::naive_convolve(ramp, k);
  for (std::size_t i = 0; i < fast.size(); ++i)
    CHECK(fast.pixels()[i] == doctest::Approx(ref.pixels()[i]).epsilon(1e-12));
}

TEST_CASE("convolve is linear") {
  const Image x = testing::random_image(12, 12, 21);
  const Image y = testing::random_image(12, 12, 22);
  const Kernel2D k = gaussian_kernel(1.0, 3);
  const double a = 0.7, b = -1.3;
  Image combo(12, 12);
  for (std::size_t i = 0; i < combo.size(); ++i)
    combo.pixels()[i] = a * x.pixels()[i] + b * y.pixels()[i];
  const Image lhs = convolve(combo, k);
  const Image cx = convolve(x, k);
  const Image cy = convolve(y, k);
  for (std::size_t i = 0; i < lhs.size(); ++i)
    CHECK(lhs.pixels()[i] ==
          doctest::Approx(a * cx.pixels()[i] + b * cy.pixels()[i]).epsilon(1e-10));
}

TEST_CASE("gaussian convolve never expands the range") {
  const Image img = testing::random_image(20, 20, 9);
  const Image out = convolve(img, gaussian_kernel(2.0, 4));
  const double lo = min_value(img), hi = max_value(img);
  for (double v : out.pixels()) {
    CHECK(v >= lo - 1e-12);
    CHECK(v <= hi + 1e-12);
  }
}

TEST_CASE("kernel too large for the image is rejected") {
  const Image img(6, 6, 1.0);
  CHECK_THROWS_AS(convolve(img, gaussian_kernel(3.0, 6)), DimensionError);
}

TEST_CASE("gabor bank: geometry of the parameter grid") {
  const GaborBank bank = gabor_bank(4, 8, 0.05, 0.4, 9);
  CHECK(bank.count() == 32);

  // frequency ratio a = (0.4/0.05)^(1/7) = 8^(1/7)
  const double a = std::pow(8.0, 1.0 / 7.0);
  CHECK(a == doctest::Approx(1.3459001926323562).epsilon(1e-12));
  CHECK(1.0 / bank.params[0].wavelength == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(1.0 / bank.params[4].wavelength ==
        doctest::Approx(0.05 * a).epsilon(1e-12));
  CHECK(1.0 / bank.params[31].wavelength == doctest::Approx(0.4).epsilon(1e-12));

  // orientations evenly spaced in [0, pi)
  CHECK(bank.params[0].orientation == 0.0);
  CHECK(bank.params[1].orientation ==
        doctest::Approx(std::numbers::pi / 4).epsilon(1e-12));
  CHECK(bank.params[2].orientation ==
        doctest::Approx(std::numbers::pi / 2).epsilon(1e-12));
  CHECK(bank.params[3].orientation ==
        doctest::Approx(3 * std::numbers::pi / 4).epsilon(1e-12));

  // H_k(0) == 1 for every filter
  for (const auto& f : bank.filters) CHECK(f.at(0, 0) == 1.0);

  CHECK_THROWS_AS(gabor_bank(4, 8, 0.4, 0.05, 9), ConfigError);
  CHECK_THROWS_AS(gabor_bank(4, 8, 0.05, 0.6, 9), ConfigError);
}

TEST_CASE("gabor bank construction is deterministic") {
  const GaborBank a = gabor_bank(4, 8, 0.05, 0.4, 7);
  const GaborBank b = gabor_bank(4, 8, 0.05, 0.4, 7);
  for (int k = 0; k < a.count(); ++k)
    for (std::size_t i = 0; i < a.filters[k].weights.size(); ++i)
      CHECK(a.filters[k].weights[i] == b.filters[k].weights[i]);
}

TEST_CASE("texture feature: linearity and the brute-force oracle") {
  const GaborBank bank = gabor_bank(2, 2, 0.1, 0.3, 4);

  SUBCASE("constant image maps to constant * total weight") {
    const Image c(16, 16, 3.0);
    const Image h = texture_feature(c, bank);
    const double expected = 3.0 * summed_kernel(bank).weight_sum();
    for (double v : h.pixels())
      CHECK(v == doctest::Approx(expected).epsilon(1e-10));
  }

  SUBCASE("summing kernels equals summing responses") {
    const Image img = testing::random_image(16, 16, 77);
    const Image via_sum = texture_feature(img, bank);
    Image via_responses(16, 16, 0.0);
    for (const auto& f : bank.filters) {
      const Image r = convolve(img, f);
      for (std::size_t i = 0; i < r.size(); ++i)
        via_responses.pixels()[i] += r.pixels()[i];
    }
    for (std::size_t i = 0; i < via_sum.size(); ++i)
      CHECK(via_sum.pixels()[i] ==
            doctest::Approx(via_responses.pixels()[i]).epsilon(1e-10));
  }

  SUBCASE("checkerboard matches the quadruple-loop oracle") {
    const Image board = testing::checkerboard(16, 16, 2, 20.0, 230.0);
    const Image fast = texture_feature(board, bank);
    const Image ref = oracle::naive_convolve(board, summed_kernel(bank));
    for (std::size_t i = 0; i < fast.size(); ++i)
      CHECK(fast.pixels()[i] == doctest::Approx(ref.pixels()[i]).epsilon(1e-10));
  }
}

TEST_CASE("auto radius caps the 3-sigma rule at the image size") {
  CHECK(auto_radius(1.0, 100, 100) == 3);
  CHECK(auto_radius(15.0, 100, 100) == 45);
  CHECK(auto_radius(15.0, 32, 64) == 31);
  CHECK(auto_radius(25.5, 512, 512) == 77);
}
