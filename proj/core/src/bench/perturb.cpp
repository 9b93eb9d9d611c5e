#include "tribunal/bench/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "tribunal/error.hpp"

namespace tribunal::bench {

namespace {

std::vector<double> gaussian_kernel(double sigma) {
  const int r = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(static_cast<std::size_t>(2 * r + 1));
  double sum = 0.0;
  for (int i = -r; i <= r; ++i) {
    k[static_cast<std::size_t>(i + r)] = std::exp(-(i * i) / (2.0 * sigma * sigma));
    sum += k[static_cast<std::size_t>(i + r)];
  }
  for (auto& v : k) v /= sum;
  return k;
}

void check(const Image& image) {
  if (image.width <= 0 || image.height <= 0 || image.channels <= 0 ||
      image.data.size() != static_cast<std::size_t>(image.width) * image.height * image.channels) {
    throw Error(ErrorCode::DecodeError, "image buffer does not match its dimensions");
  }
}

}  // namespace

std::string_view to_string(PerturbKind k) {
  switch (k) {
    case PerturbKind::Blur: return "blur";
    case PerturbKind::Sharpen: return "sharpen";
    case PerturbKind::Noise: break;
  }
  return "noise";
}

std::optional<PerturbKind> parse_perturb_kind(std::string_view s) {
  if (s == "blur") return PerturbKind::Blur;
  if (s == "sharpen") return PerturbKind::Sharpen;
  if (s == "noise") return PerturbKind::Noise;
  return std::nullopt;
}

Image gaussian_blur(const Image& image, double radius) {
  check(image);
  if (radius < 0.0) throw Error(ErrorCode::DomainError, "blur radius must not be negative");
  if (radius == 0.0) return image;
  const auto k = gaussian_kernel(radius);
  const int r = static_cast<int>(k.size() / 2);
  const int w = image.width;
  const int h = image.height;
  const int ch = image.channels;

  Image tmp(w, h, ch);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < ch; ++c) {
        double acc = 0.0;
        for (int i = -r; i <= r; ++i) {
          acc += k[static_cast<std::size_t>(i + r)] * image.at(std::clamp(x + i, 0, w - 1), y, c);
        }
        tmp.at(x, y, c) = static_cast<float>(acc);
      }
    }
  }
  Image out(w, h, ch);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < ch; ++c) {
        double acc = 0.0;
        for (int i = -r; i <= r; ++i) {
          acc += k[static_cast<std::size_t>(i + r)] * tmp.at(x, std::clamp(y + i, 0, h - 1), c);
        }
        out.at(x, y, c) = static_cast<float>(acc);
      }
    }
  }
  return out;
}

Image sharpen(const Image& image, double factor) {
  check(image);
  // Smoothing kernel [1 1 1; 1 5 1; 1 1 1] / 13.
  Image smooth = image;
  for (int y = 1; y + 1 < image.height; ++y) {
    for (int x = 1; x + 1 < image.width; ++x) {
      for (int c = 0; c < image.channels; ++c) {
        double acc = 4.0 * image.at(x, y, c);
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) acc += image.at(x + dx, y + dy, c);
        }
        smooth.at(x, y, c) = static_cast<float>(acc / 13.0);
      }
    }
  }
  Image out = image;
  for (std::size_t i = 0; i < out.data.size(); ++i) {
    const double v = image.data[i] * factor + smooth.data[i] * (1.0 - factor);
    out.data[i] = static_cast<float>(std::clamp(v, 0.0, 255.0));
  }
  return out;
}

Image add_gaussian_noise(const Image& image, double variance, std::uint64_t seed) {
  check(image);
  if (variance < 0.0) throw Error(ErrorCode::DomainError, "noise variance must not be negative");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, std::sqrt(variance));
  Image out = image;
  for (auto& v : out.data) v = static_cast<float>(std::clamp(v + dist(rng), 0.0, 255.0));
  return out;
}

Image perturb(const Image& image, PerturbKind kind, const PerturbParams& params) {
  switch (kind) {
    case PerturbKind::Blur: return gaussian_blur(image, params.blur_radius);
    case PerturbKind::Sharpen: return sharpen(image, params.sharpen_factor);
    case PerturbKind::Noise: break;
  }
  return add_gaussian_noise(image, params.noise_variance, params.seed);
}

}  // namespace tribunal::bench
