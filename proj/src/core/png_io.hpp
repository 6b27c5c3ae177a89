#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace vofd {

class Image;

// Decodes an in-memory grayscale PNG (8 or 16 bit). Color, palette and
// alpha inputs are rejected.
Image load_png(const std::string& bytes, const std::string& path);

// Writes an 8-bit grayscale PNG with fixed encoder settings, so identical
// pixels produce identical files.
void save_png(const std::vector<std::uint8_t>& gray8, int width, int height,
              const std::string& path);

}  // namespace vofd
