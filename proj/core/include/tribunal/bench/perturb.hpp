#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "tribunal/image.hpp"

namespace tribunal::bench {

enum class PerturbKind { Blur, Sharpen, Noise };
std::string_view to_string(PerturbKind k);
std::optional<PerturbKind> parse_perturb_kind(std::string_view s);

struct PerturbParams {
  double blur_radius = 2.0;
  double sharpen_factor = 2.0;
  double noise_variance = 2.0;
  std::uint64_t seed = 42;
};

/// Gaussian blur with sigma equal to the radius, clamped edges. Radius 0 is
/// the identity.
Image gaussian_blur(const Image& image, double radius);

/// Blend between the image and a 3x3 smoothed copy:
/// out = smooth + factor * (image - smooth). Border pixels keep their values
/// in the smoothed copy, so factor 1 is the identity.
Image sharpen(const Image& image, double factor);

/// Adds N(0, variance) to every sample, clamped to [0, 255].
Image add_gaussian_noise(const Image& image, double variance, std::uint64_t seed);

Image perturb(const Image& image, PerturbKind kind, const PerturbParams& params = {});

}  // namespace tribunal::bench
