#include "core/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

#include "core/png_io.hpp"

namespace vofd {

Image::Image(int width, int height, double fill)
    : width_(width), height_(height) {
  if (width < 1 || height < 1)
    throw DimensionError("image dimensions must be at least 1x1");
  data_.assign(static_cast<std::size_t>(width) * height, fill);
}

Image::Image(int width, int height, std::vector<double> data)
    : width_(width), height_(height), data_(std::move(data)) {
  if (width < 1 || height < 1)
    throw DimensionError("image dimensions must be at least 1x1");
  if (data_.size() != static_cast<std::size_t>(width) * height)
    throw DimensionError("pixel buffer size does not match dimensions");
}

void require_same_shape(const Image& a, const Image& b, const char* what) {
  if (!a.same_shape(b))
    throw DimensionError(std::string(what) + ": shape mismatch (" +
                         std::to_string(a.width()) + "x" +
                         std::to_string(a.height()) + " vs " +
                         std::to_string(b.width()) + "x" +
                         std::to_string(b.height()) + ")");
}

namespace {

bool has_png_extension(const std::string& path) {
  if (path.size() < 4) return false;
  std::string ext = path.substr(path.size() - 4);
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext == ".png";
}

// Whitespace-and-comment-aware token scanner for PGM headers.
struct PgmScanner {
  const std::string& bytes;
  std::size_t pos = 0;

  void skip_space_and_comments() {
    while (pos < bytes.size()) {
      unsigned char c = bytes[pos];
      if (c == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(c)) {
        ++pos;
      } else {
        break;
      }
    }
  }

  long next_int(const char* what) {
    skip_space_and_comments();
    std::size_t start = pos;
    while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos])))
      ++pos;
    if (pos == start)
      throw FormatError(std::string("PGM: missing or malformed ") + what);
    long v = 0;
    for (std::size_t i = start; i < pos; ++i) {
      v = v * 10 + (bytes[i] - '0');
      if (v > 1000000000L) throw FormatError(std::string("PGM: ") + what + " out of range");
    }
    return v;
  }
};

Image load_pgm(const std::string& bytes, const std::string& path) {
  const bool binary = bytes[1] == '5';
  PgmScanner scan{bytes, 2};
  const long width = scan.next_int("width");
  const long height = scan.next_int("height");
  const long maxval = scan.next_int("maxval");
  if (width < 1 || height < 1)
    throw FormatError(path + ": PGM dimensions must be positive");
  if (maxval < 1 || maxval > 65535)
    throw FormatError(path + ": PGM maxval must be in [1, 65535]");

  const std::size_t count = static_cast<std::size_t>(width) * height;
  std::vector<double> data(count);
  const double scale = 255.0 / static_cast<double>(maxval);

  if (binary) {
    ++scan.pos;  // single whitespace byte after maxval
    const std::size_t sample_bytes = maxval > 255 ? 2 : 1;
    if (bytes.size() - scan.pos < count * sample_bytes)
      throw FormatError(path + ": truncated PGM pixel data");
    const unsigned char* p =
        reinterpret_cast<const unsigned char*>(bytes.data()) + scan.pos;
    for (std::size_t i = 0; i < count; ++i) {
      unsigned v;
      if (sample_bytes == 2) {
        v = (static_cast<unsigned>(p[2 * i]) << 8) | p[2 * i + 1];
      } else {
        v = p[i];
      }
      data[i] = static_cast<double>(v) * scale;
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      long v = scan.next_int("pixel value");
      if (v > maxval)
        throw FormatError(path + ": PGM pixel value exceeds maxval");
      data[i] = static_cast<double>(v) * scale;
    }
  }
  return Image(static_cast<int>(width), static_cast<int>(height), std::move(data));
}

}  // namespace

Image load_image(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string bytes = buf.str();
  if (bytes.empty()) throw FormatError(path + ": empty file");

  if (bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '2' || bytes[1] == '5'))
    return load_pgm(bytes, path);

  static const unsigned char png_sig[8] = {137, 80, 78, 71, 13, 10, 26, 10};
  if (bytes.size() >= 8 &&
      std::equal(png_sig, png_sig + 8,
                 reinterpret_cast<const unsigned char*>(bytes.data())))
    return load_png(bytes, path);

  throw FormatError(path + ": unsupported format (expected PGM or PNG)");
}

namespace {

std::vector<std::uint8_t> quantize(const Image& img) {
  std::vector<std::uint8_t> out(img.size());
  const double* p = img.data();
  for (std::size_t i = 0; i < img.size(); ++i) {
    const double v = p[i];
    if (!std::isfinite(v)) throw FormatError("cannot save non-finite pixel value");
    const double r = std::nearbyint(v);  // ties to even under default rounding
    out[i] = static_cast<std::uint8_t>(r < 0.0 ? 0.0 : (r > 255.0 ? 255.0 : r));
  }
  return out;
}

}  // namespace

void save_image(const Image& img, const std::string& path) {
  if (img.empty()) throw DimensionError("cannot save an empty image");
  const std::vector<std::uint8_t> bytes = quantize(img);

  if (has_png_extension(path)) {
    save_png(bytes, img.width(), img.height(), path);
    return;
  }

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path + ": cannot open file for writing");
  out << "P5\n" << img.width() << " " << img.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError(path + ": write failed");
}

double compensated_sum(std::span<const double> values) {
  double sum = 0.0;
  double comp = 0.0;
  for (double x : values) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  return sum + comp;
}

double mean(const Image& img) {
  if (img.empty()) throw DimensionError("mean of an empty image");
  return compensated_sum(img.pixels()) / static_cast<double>(img.size());
}

double min_value(const Image& img) {
  if (img.empty()) throw DimensionError("min of an empty image");
  return *std::min_element(img.pixels().begin(), img.pixels().end());
}

double max_value(const Image& img) {
  if (img.empty()) throw DimensionError("max of an empty image");
  return *std::max_element(img.pixels().begin(), img.pixels().end());
}

double mean_abs_diff(const Image& a, const Image& b) {
  require_same_shape(a, b, "mean_abs_diff");
  double sum = 0.0, comp = 0.0;
  const double* pa = a.data();
  const double* pb = b.data();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double x = std::abs(pa[i] - pb[i]);
    const double t = sum + x;
    comp += (std::abs(sum) >= x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  return (sum + comp) / static_cast<double>(a.size());
}

double l1_distance_to_constant(const Image& img, double value) {
  double sum = 0.0, comp = 0.0;
  for (double v : img.pixels()) {
    const double x = std::abs(v - value);
    const double t = sum + x;
    comp += (std::abs(sum) >= x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  return sum + comp;
}

}  // namespace vofd
