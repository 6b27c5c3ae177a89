#include "core/png_io.hpp"

#include <png.h>

#include <cstdio>
#include <cstring>

#include "core/error.hpp"
#include "core/image.hpp"

namespace vofd {

namespace {

struct MemReader {
  const unsigned char* data;
  std::size_t size;
  std::size_t pos;
};

void mem_read(png_structp png, png_bytep out, png_size_t n) {
  MemReader* r = static_cast<MemReader*>(png_get_io_ptr(png));
  if (r->pos + n > r->size) png_error(png, "read past end of buffer");
  std::memcpy(out, r->data + r->pos, n);
  r->pos += n;
}

struct FileCloser {
  std::FILE* f = nullptr;
  ~FileCloser() {
    if (f) std::fclose(f);
  }
};

}  // namespace

Image load_png(const std::string& bytes, const std::string& path) {
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw Error("libpng: failed to allocate read struct");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw Error("libpng: failed to allocate info struct");
  }

  // Buffers live outside the setjmp scope; the error path only destroys
  // libpng state and throws.
  MemReader reader{reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size(), 0};
  std::vector<png_bytep> row_ptrs;
  std::vector<unsigned char> raw;
  int width = 0, height = 0, bit_depth = 0, color_type = 0;

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw FormatError(path + ": invalid PNG data");
  }

  png_set_read_fn(png, &reader, mem_read);
  png_read_info(png, info);
  width = static_cast<int>(png_get_image_width(png, info));
  height = static_cast<int>(png_get_image_height(png, info));
  bit_depth = png_get_bit_depth(png, info);
  color_type = png_get_color_type(png, info);

  if (color_type != PNG_COLOR_TYPE_GRAY) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw FormatError(path + ": only grayscale PNG is supported (color input rejected)");
  }
  if (bit_depth != 8 && bit_depth != 16) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw FormatError(path + ": only 8- or 16-bit grayscale PNG is supported");
  }
  if (width < 1 || height < 1) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw FormatError(path + ": invalid PNG dimensions");
  }

  const std::size_t stride = static_cast<std::size_t>(width) * (bit_depth / 8);
  raw.resize(stride * static_cast<std::size_t>(height));
  row_ptrs.resize(height);
  for (int i = 0; i < height; ++i) row_ptrs[i] = raw.data() + stride * i;
  png_read_image(png, row_ptrs.data());
  png_destroy_read_struct(&png, &info, nullptr);

  std::vector<double> data(static_cast<std::size_t>(width) * height);
  if (bit_depth == 8) {
    for (std::size_t i = 0; i < data.size(); ++i)
      data[i] = static_cast<double>(raw[i]);
  } else {
    const double scale = 255.0 / 65535.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
      const unsigned v = (static_cast<unsigned>(raw[2 * i]) << 8) | raw[2 * i + 1];
      data[i] = static_cast<double>(v) * scale;
    }
  }
  return Image(width, height, std::move(data));
}

void save_png(const std::vector<std::uint8_t>& gray8, int width, int height,
              const std::string& path) {
  FileCloser file;
  file.f = std::fopen(path.c_str(), "wb");
  if (!file.f) throw IoError(path + ": cannot open file for writing");

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw Error("libpng: failed to allocate write struct");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw Error("libpng: failed to allocate info struct");
  }

  std::vector<png_const_bytep> row_ptrs(height);
  for (int i = 0; i < height; ++i)
    row_ptrs[i] = gray8.data() + static_cast<std::size_t>(width) * i;

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError(path + ": PNG write failed");
  }

  png_init_io(png, file.f);
  png_set_compression_level(png, 6);
  png_set_IHDR(png, info, static_cast<png_uint_32>(width),
               static_cast<png_uint_32>(height), 8, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_rows(png, const_cast<png_bytepp>(row_ptrs.data()),
                 static_cast<png_uint_32>(height));
  png_write_end(png, info);
  png_destroy_write_struct(&png, &info);
}

}  // namespace vofd
