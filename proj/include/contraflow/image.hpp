// SPDX-License-Identifier: Apache-2.0
#pragma once

/*! \file
 *  \brief Minimal RGB image with PNG load/save (libpng simplified API) and
 *  rectangle drawing for annotated snapshots.
 */

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "contraflow/geometry.hpp"

namespace contraflow {

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
};

struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // row-major RGB

  Image() = default;
  Image(int w, int h, Rgb fill = {}) : width(w), height(h), pixels(static_cast<std::size_t>(w) * h * 3) {
    for (std::size_t i = 0; i < pixels.size(); i += 3) {
      pixels[i] = fill.r;
      pixels[i + 1] = fill.g;
      pixels[i + 2] = fill.b;
    }
  }

  Rgb at(int x, int y) const {
    const auto i = (static_cast<std::size_t>(y) * width + x) * 3;
    return {pixels[i], pixels[i + 1], pixels[i + 2]};
  }

  void set(int x, int y, Rgb c) {
    if (x < 0 || y < 0 || x >= width || y >= height) return;
    const auto i = (static_cast<std::size_t>(y) * width + x) * 3;
    pixels[i] = c.r;
    pixels[i + 1] = c.g;
    pixels[i + 2] = c.b;
  }
};

/// Throws std::runtime_error when the file is missing or not a decodable PNG.
inline Image read_png(const std::filesystem::path& path) {
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&img, path.c_str()))
    throw std::runtime_error("cannot read PNG " + path.string() + ": " + img.message);
  img.format = PNG_FORMAT_RGB;
  Image out;
  out.width = static_cast<int>(img.width);
  out.height = static_cast<int>(img.height);
  out.pixels.resize(PNG_IMAGE_SIZE(img));
  if (!png_image_finish_read(&img, nullptr, out.pixels.data(), 0, nullptr)) {
    std::string msg = img.message;
    png_image_free(&img);
    throw std::runtime_error("cannot decode PNG " + path.string() + ": " + msg);
  }
  return out;
}

inline void write_png(const std::filesystem::path& path, const Image& image) {
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(image.width);
  img.height = static_cast<png_uint_32>(image.height);
  img.format = PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&img, path.c_str(), 0, image.pixels.data(), 0, nullptr))
    throw std::runtime_error("cannot write PNG " + path.string() + ": " + img.message);
}

/// Outline of `box`, `thickness` pixels wide, clipped to the image.
inline void draw_box(Image& image, const BoundingBox& box, Rgb color, int thickness = 2) {
  const int x0 = static_cast<int>(std::floor(box.x_min));
  const int y0 = static_cast<int>(std::floor(box.y_min));
  const int x1 = static_cast<int>(std::ceil(box.x_max));
  const int y1 = static_cast<int>(std::ceil(box.y_max));
  for (int t = 0; t < thickness; ++t) {
    for (int x = x0; x <= x1; ++x) {
      image.set(x, y0 + t, color);
      image.set(x, y1 - t, color);
    }
    for (int y = y0; y <= y1; ++y) {
      image.set(x0 + t, y, color);
      image.set(x1 - t, y, color);
    }
  }
}

/// Frame image lookup in a directory: `<frame>.png`, then `<frame:06>.png`.
inline std::optional<std::filesystem::path> find_frame_image(const std::filesystem::path& dir,
                                                             std::uint64_t frame) {
  const auto plain = std::to_string(frame);
  auto candidate = dir / (plain + ".png");
  if (std::filesystem::exists(candidate)) return candidate;
  if (plain.size() < 6) {
    candidate = dir / (std::string(6 - plain.size(), '0') + plain + ".png");
    if (std::filesystem::exists(candidate)) return candidate;
  }
  return std::nullopt;
}

}  // namespace contraflow
