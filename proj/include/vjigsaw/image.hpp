// Copyright 2026 The Video Jigsaw Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "vjigsaw/error.hpp"
#include "vjigsaw/rng.hpp"

namespace vj {

template <typename Scalar>
using PixelArray = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// H x W x C image, channels interleaved: stored as an H x (W*C) array.
template <typename Scalar>
class Image {
 public:
  Image() = default;
  Image(int height, int width, int channels)
      : data_(PixelArray<Scalar>::Zero(height, width * channels)), channels_(channels) {}
  Image(PixelArray<Scalar> data, int channels) : data_(std::move(data)), channels_(channels) {
    require(channels_ >= 1 && data_.cols() % channels_ == 0, "image: bad channel layout");
  }

  int height() const { return static_cast<int>(data_.rows()); }
  int width() const { return channels_ == 0 ? 0 : static_cast<int>(data_.cols()) / channels_; }
  int channels() const { return channels_; }

  Scalar& at(int r, int c, int ch) { return data_(r, c * channels_ + ch); }
  Scalar at(int r, int c, int ch) const { return data_(r, c * channels_ + ch); }

  const PixelArray<Scalar>& data() const { return data_; }
  PixelArray<Scalar>& data() { return data_; }

  Image block(int r0, int c0, int h, int w) const {
    return Image(PixelArray<Scalar>(data_.block(r0, c0 * channels_, h, w * channels_)),
                 channels_);
  }

  template <typename Other>
  Image<Other> cast() const {
    return Image<Other>(data_.template cast<Other>(), channels_);
  }

  friend bool operator==(const Image& a, const Image& b) {
    return a.channels_ == b.channels_ && a.data_.rows() == b.data_.rows() &&
           a.data_.cols() == b.data_.cols() && (a.data_ == b.data_).all();
  }

 private:
  PixelArray<Scalar> data_;
  int channels_ = 0;
};

using ImageU8 = Image<std::uint8_t>;
using ImageF = Image<float>;

// Crop / grid / patch geometry. Construction through make() validates it.
struct GridSpec {
  int crop = 224;
  int rows = 2;
  int cols = 2;
  int patch = 64;

  static GridSpec make(int crop, int rows, int cols, int patch);

  int cell() const { return crop / rows; }
  int jitter_range() const { return cell() - patch; }
  int patches() const { return rows * cols; }
};

struct PatchSource {
  int frame = 0;  // index within the tuple
  int cell_row = 0;
  int cell_col = 0;
  int jitter_y = 0;
  int jitter_x = 0;

  friend bool operator==(const PatchSource&, const PatchSource&) = default;
};

template <typename Scalar>
struct Patch {
  Image<Scalar> pixels;
  PatchSource source;
};

using RawPatch = Patch<std::uint8_t>;
using NormPatch = Patch<float>;

struct Offset {
  int y = 0;
  int x = 0;
};

// Top-left corner of the crop window: uniform over valid positions, or
// centered when rng is null.
Offset crop_origin(int height, int width, const GridSpec& spec, Rng* rng);

ImageU8 crop_frame(const ImageU8& image, const GridSpec& spec, Rng* rng);

// One jittered patch per grid cell, row-major cell order.
std::vector<RawPatch> sample_patches(const ImageU8& crop, const GridSpec& spec, Rng& rng,
                                     int frame_index = 0);

// BT.601 luma replicated across channels.
void to_grayscale(ImageU8& image);

// With the given probability, converts every patch in the set to
// grayscale; one decision for the whole set. Returns whether it fired.
bool maybe_grayscale(std::span<RawPatch> patches, double probability, Rng& rng);

// Standardizes over all pixels and channels jointly. Patches with stddev
// below 1e-6 come out all zeros.
NormPatch normalize_patch(const RawPatch& p);
NormPatch normalize_patch(const NormPatch& p);

// RGB (or single-channel) 8-bit decode of a PNG/JPEG file.
ImageU8 load_image(const std::filesystem::path& path);
void save_png(const std::filesystem::path& path, const ImageU8& image);

}  // namespace vj
