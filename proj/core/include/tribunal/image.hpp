#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace tribunal {

// Interleaved float image with samples in [0, 255]. Values are kept
// unquantised until the image is written.
struct Image {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<float> data;

  Image() = default;
  Image(int w, int h, int c, float fill = 0.0f)
      : width(w), height(h), channels(c), data(static_cast<std::size_t>(w) * h * c, fill) {}

  [[nodiscard]] float& at(int x, int y, int c) { return data[(static_cast<std::size_t>(y) * width + x) * channels + c]; }
  [[nodiscard]] float at(int x, int y, int c) const {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  bool operator==(const Image&) const = default;
};

/// PNG, JPEG, or binary PPM/PGM, chosen by file signature. Throws
/// Error{DecodeError} for anything else or a corrupt file.
Image load_image(const std::filesystem::path& path);

/// Format chosen by extension (.png, .jpg/.jpeg, .ppm/.pgm); samples are
/// rounded and clamped to 8 bits.
void save_image(const Image& image, const std::filesystem::path& path);

}  // namespace tribunal
