// Copyright 2026 The snnv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// IDX container (MNIST / Fashion-MNIST): big-endian 32-bit magic and
// dimension words followed by a raw uint8 payload.

#include <cstdint>
#include <fstream>
#include <iterator>
#include <span>
#include <string>
#include <vector>

#include "snnv/errors.hpp"
#include "snnv/snn.hpp"

namespace snnv::io {

inline constexpr std::uint32_t kIdxImagesMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelsMagic = 0x00000801;

// Row-major grayscale image with real-valued pixels.
struct Grid {
  int rows = 0;
  int cols = 0;
  std::vector<double> values;

  double at(int r, int c) const { return values[static_cast<std::size_t>(r) * cols + c]; }
  bool operator==(const Grid&) const = default;
};

struct LabeledImage {
  Grid image;
  int label = 0;
};

namespace detail {

inline std::uint32_t read_be32(std::span<const std::uint8_t> bytes, std::size_t at) {
  if (at + 4 > bytes.size()) throw FormatError("IDX header truncated");
  return (std::uint32_t{bytes[at]} << 24) | (std::uint32_t{bytes[at + 1]} << 16) |
         (std::uint32_t{bytes[at + 2]} << 8) | std::uint32_t{bytes[at + 3]};
}

inline std::vector<std::uint8_t> read_binary_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

}  // namespace detail

inline std::vector<LabeledImage> parse_idx(std::span<const std::uint8_t> images,
                                           std::span<const std::uint8_t> labels) {
  if (detail::read_be32(images, 0) != kIdxImagesMagic) throw FormatError("bad IDX image magic");
  if (detail::read_be32(labels, 0) != kIdxLabelsMagic) throw FormatError("bad IDX label magic");
  const std::uint32_t count = detail::read_be32(images, 4);
  const std::uint32_t rows = detail::read_be32(images, 8);
  const std::uint32_t cols = detail::read_be32(images, 12);
  const std::uint32_t label_count = detail::read_be32(labels, 4);
  if (count != label_count)
    throw FormatError("image count " + std::to_string(count) + " != label count " +
                      std::to_string(label_count));
  if (rows == 0 || cols == 0 || rows > 4096 || cols > 4096) throw FormatError("implausible image size");
  const std::size_t pixels = std::size_t{rows} * cols;
  if (images.size() != 16 + count * pixels) throw FormatError("IDX image payload size mismatch");
  if (labels.size() != 8 + std::size_t{count}) throw FormatError("IDX label payload size mismatch");

  std::vector<LabeledImage> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    LabeledImage li;
    li.image.rows = static_cast<int>(rows);
    li.image.cols = static_cast<int>(cols);
    const auto first = images.begin() + 16 + static_cast<std::ptrdiff_t>(i * pixels);
    li.image.values.assign(first, first + static_cast<std::ptrdiff_t>(pixels));
    li.label = labels[8 + i];
    if (li.label > 9) throw FormatError("label " + std::to_string(li.label) + " outside 0..9");
    out.push_back(std::move(li));
  }
  return out;
}

inline std::vector<LabeledImage> load_idx(const std::string& images_path,
                                          const std::string& labels_path) {
  const auto images = detail::read_binary_file(images_path);
  const auto labels = detail::read_binary_file(labels_path);
  return parse_idx(images, labels);
}

// Block-mean pooling by an integer factor dividing both dimensions.
inline Grid downscale(const Grid& g, int factor) {
  if (factor < 1 || g.rows % factor != 0 || g.cols % factor != 0)
    throw UsageError("downscale factor " + std::to_string(factor) + " does not divide " +
                     std::to_string(g.rows) + "x" + std::to_string(g.cols));
  Grid out;
  out.rows = g.rows / factor;
  out.cols = g.cols / factor;
  out.values.assign(static_cast<std::size_t>(out.rows) * out.cols, 0.0);
  const double area = static_cast<double>(factor) * factor;
  for (int r = 0; r < out.rows; ++r)
    for (int c = 0; c < out.cols; ++c) {
      double sum = 0.0;
      for (int i = 0; i < factor; ++i)
        for (int j = 0; j < factor; ++j) sum += g.at(r * factor + i, c * factor + j);
      out.values[static_cast<std::size_t>(r) * out.cols + c] = sum / area;
    }
  return out;
}

// grayscale -> block pooling -> spike times with x_max = 255.
inline SpikeTimes image_to_input(const Grid& g, int factor, int time_steps) {
  const Grid small = downscale(g, factor);
  return encode_intensities(small.values, 255.0, time_steps);
}

}  // namespace snnv::io
