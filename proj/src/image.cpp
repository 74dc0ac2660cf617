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


#include "vjigsaw/image.hpp"

#include <algorithm>
#include <cmath>
#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>
#include <string>

namespace vj {
namespace {

constexpr double kStdGuard = 1e-6;

template <typename Scalar>
NormPatch standardize(const Patch<Scalar>& p) {
  const auto values = p.pixels.data().template cast<double>();
  const double n = static_cast<double>(values.size());
  const double mean = values.sum() / n;
  const double var = (values - mean).square().sum() / n;
  const double sd = std::sqrt(var);
  NormPatch out{ImageF(p.pixels.height(), p.pixels.width(), p.pixels.channels()), p.source};
  if (sd < kStdGuard) return out;
  out.pixels.data() = ((values - mean) / sd).template cast<float>();
  return out;
}

}  // namespace

GridSpec GridSpec::make(int crop, int rows, int cols, int patch) {
  require(crop >= 1 && rows >= 1 && cols >= 1 && patch >= 1,
          "grid: crop, rows, cols and patch must be positive");
  require(crop % rows == 0 && crop % cols == 0,
          "grid: crop " + std::to_string(crop) + " is not divisible by grid " +
              std::to_string(rows) + "x" + std::to_string(cols));
  require(crop / rows == crop / cols, "grid: cells must be square");
  require(patch <= crop / rows, "grid: patch " + std::to_string(patch) + " exceeds cell " +
                                    std::to_string(crop / rows));
  return GridSpec{crop, rows, cols, patch};
}

Offset crop_origin(int height, int width, const GridSpec& spec, Rng* rng) {
  require(height >= spec.crop && width >= spec.crop,
          "crop: image " + std::to_string(height) + "x" + std::to_string(width) +
              " is smaller than crop " + std::to_string(spec.crop));
  const int slack_y = height - spec.crop;
  const int slack_x = width - spec.crop;
  if (rng == nullptr) return Offset{slack_y / 2, slack_x / 2};
  const int y = static_cast<int>(rng->below(static_cast<std::uint64_t>(slack_y) + 1));
  const int x = static_cast<int>(rng->below(static_cast<std::uint64_t>(slack_x) + 1));
  return Offset{y, x};
}

ImageU8 crop_frame(const ImageU8& image, const GridSpec& spec, Rng* rng) {
  const Offset o = crop_origin(image.height(), image.width(), spec, rng);
  return image.block(o.y, o.x, spec.crop, spec.crop);
}

std::vector<RawPatch> sample_patches(const ImageU8& crop, const GridSpec& spec, Rng& rng,
                                     int frame_index) {
  require(crop.height() == spec.crop && crop.width() == spec.crop,
          "sample_patches: input is not a " + std::to_string(spec.crop) + " square crop");
  const int cell = spec.cell();
  const auto range = static_cast<std::uint64_t>(spec.jitter_range()) + 1;
  std::vector<RawPatch> out;
  out.reserve(static_cast<std::size_t>(spec.patches()));
  for (int r = 0; r < spec.rows; ++r) {
    for (int c = 0; c < spec.cols; ++c) {
      PatchSource src{frame_index, r, c, static_cast<int>(rng.below(range)),
                      static_cast<int>(rng.below(range))};
      out.push_back(RawPatch{crop.block(r * cell + src.jitter_y, c * cell + src.jitter_x,
                                        spec.patch, spec.patch),
                             src});
    }
  }
  return out;
}

void to_grayscale(ImageU8& image) {
  if (image.channels() < 3) return;
  for (int r = 0; r < image.height(); ++r) {
    for (int c = 0; c < image.width(); ++c) {
      const double luma = 0.299 * image.at(r, c, 0) + 0.587 * image.at(r, c, 1) +
                          0.114 * image.at(r, c, 2);
      const auto v = static_cast<std::uint8_t>(std::clamp(std::lround(luma), 0L, 255L));
      for (int ch = 0; ch < image.channels(); ++ch) image.at(r, c, ch) = v;
    }
  }
}

bool maybe_grayscale(std::span<RawPatch> patches, double probability, Rng& rng) {
  require(probability >= 0.0 && probability <= 1.0, "grayscale probability must be in [0,1]");
  // Always draw so the stream position does not depend on the probability.
  const bool fire = rng.unit() < probability;
  if (fire) {
    for (auto& p : patches) to_grayscale(p.pixels);
  }
  return fire;
}

NormPatch normalize_patch(const RawPatch& p) { return standardize(p); }
NormPatch normalize_patch(const NormPatch& p) { return standardize(p); }

ImageU8 load_image(const std::filesystem::path& path) {
  cv::Mat mat;
  try {
    mat = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
  } catch (const cv::Exception& e) {
    fail(ErrorKind::kIo, "cannot decode image " + path.string() + ": " + e.what());
  }
  if (mat.empty()) fail(ErrorKind::kIo, "cannot decode image " + path.string());
  if (mat.depth() != CV_8U) fail(ErrorKind::kFormat, "image is not 8-bit: " + path.string());
  if (mat.channels() == 4) {
    cv::cvtColor(mat, mat, cv::COLOR_BGRA2RGB);
  } else if (mat.channels() == 3) {
    cv::cvtColor(mat, mat, cv::COLOR_BGR2RGB);
  } else if (mat.channels() != 1) {
    fail(ErrorKind::kFormat, "unsupported channel count in " + path.string());
  }
  const int channels = mat.channels();
  ImageU8 out(mat.rows, mat.cols, channels);
  for (int r = 0; r < mat.rows; ++r) {
    const std::uint8_t* src = mat.ptr<std::uint8_t>(r);
    std::copy(src, src + mat.cols * channels, &out.data()(r, 0));
  }
  return out;
}

void save_png(const std::filesystem::path& path, const ImageU8& image) {
  const int type = CV_8UC(image.channels());
  cv::Mat mat(image.height(), image.width(), type);
  for (int r = 0; r < image.height(); ++r) {
    std::copy(&image.data()(r, 0), &image.data()(r, 0) + image.width() * image.channels(),
              mat.ptr<std::uint8_t>(r));
  }
  if (image.channels() == 3) cv::cvtColor(mat, mat, cv::COLOR_RGB2BGR);
  if (!cv::imwrite(path.string(), mat)) fail(ErrorKind::kIo, "cannot write " + path.string());
}

}  // namespace vj
