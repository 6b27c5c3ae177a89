#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "core/error.hpp"

namespace vofd {

// Row-major grayscale raster with double intensities, nominal range [0,255].
// Immutable-by-convention value type: library operations never mutate their
// inputs, they return fresh images.
class Image {
 public:
  Image() = default;
  Image(int width, int height, double fill = 0.0);
  Image(int width, int height, std::vector<double> data);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double operator()(int row, int col) const {
    return data_[static_cast<std::size_t>(row) * width_ + col];
  }
  double& operator()(int row, int col) {
    return data_[static_cast<std::size_t>(row) * width_ + col];
  }

  std::span<const double> pixels() const { return data_; }
  std::span<double> pixels() { return data_; }
  const double* data() const { return data_.data(); }
  double* data() { return data_.data(); }

  bool same_shape(const Image& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> data_;
};

// Throws DimensionError unless a and b have identical dimensions.
void require_same_shape(const Image& a, const Image& b, const char* what);

// Reads PGM (P2/P5, maxval up to 65535) or grayscale PNG (8/16-bit).
// Intensities are mapped linearly onto [0,255]; 8-bit values map
// identically. Color input is rejected, never converted.
Image load_image(const std::string& path);

// Clamps to [0,255], rounds half-to-even and writes 8-bit grayscale:
// PNG when the extension is .png (case-insensitive), PGM P5 otherwise.
void save_image(const Image& img, const std::string& path);

// Neumaier-compensated sum; deterministic for a fixed input.
double compensated_sum(std::span<const double> values);

double mean(const Image& img);
double min_value(const Image& img);
double max_value(const Image& img);

// (1/n) * sum |a - b|, compensated.
double mean_abs_diff(const Image& a, const Image& b);

// sum |img - value|, compensated.
double l1_distance_to_constant(const Image& img, double value);

}  // namespace vofd
