#pragma once

#include <array>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace cmgn {

// Codewords live in 16-bit containers whatever the declared bit depth.
using Codeword = std::uint16_t;

inline constexpr int kMinBitDepth = 8;
inline constexpr int kMaxBitDepth = 16;

// Row-major 2-D grid.
template <typename T>
class Plane {
 public:
  Plane() = default;
  Plane(int width, int height, T fill = T{})
      : width_(width),
        height_(height),
        data_(static_cast<std::size_t>(width) * height, fill) {
    assert(width >= 0 && height >= 0);
  }

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& at(int x, int y) { return data_[index(x, y)]; }
  const T& at(int x, int y) const { return data_[index(x, y)]; }

  std::span<T> row(int y) {
    return {data_.data() + static_cast<std::size_t>(y) * width_,
            static_cast<std::size_t>(width_)};
  }
  std::span<const T> row(int y) const {
    return {data_.data() + static_cast<std::size_t>(y) * width_,
            static_cast<std::size_t>(width_)};
  }

  std::span<T> values() { return data_; }
  std::span<const T> values() const { return data_; }

  bool operator==(const Plane&) const = default;

 private:
  std::size_t index(int x, int y) const {
    assert(x >= 0 && x < width_ && y >= 0 && y < height_);
    return static_cast<std::size_t>(y) * width_ + x;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

using CodewordPlane = Plane<Codeword>;

enum class Channel : int { kY = 0, kCb = 1, kCr = 2 };
inline constexpr std::array<Channel, 3> kChannels = {Channel::kY, Channel::kCb,
                                                     Channel::kCr};

// Y/Cb/Cr planes at 4:4:4 with a declared bit depth. Immutable once built;
// the constructor rejects mismatched planes and out-of-range codewords.
class PlanarImage {
 public:
  PlanarImage() = default;
  PlanarImage(int width, int height, int bit_depth);
  PlanarImage(std::array<CodewordPlane, 3> planes, int bit_depth);

  int width() const { return planes_[0].width(); }
  int height() const { return planes_[0].height(); }
  int bit_depth() const { return bit_depth_; }
  Codeword max_codeword() const {
    return static_cast<Codeword>((1u << bit_depth_) - 1u);
  }

  const CodewordPlane& plane(Channel c) const {
    return planes_[static_cast<int>(c)];
  }
  const CodewordPlane& luma() const { return plane(Channel::kY); }
  const std::array<CodewordPlane, 3>& planes() const { return planes_; }

  bool operator==(const PlanarImage&) const = default;

 private:
  std::array<CodewordPlane, 3> planes_;
  int bit_depth_ = 10;
};

// Normalized HDR intensities, every value in [0, 1).
class HdrImage {
 public:
  HdrImage() = default;
  explicit HdrImage(std::array<Plane<float>, 3> planes);

  int width() const { return planes_[0].width(); }
  int height() const { return planes_[0].height(); }
  const Plane<float>& plane(Channel c) const {
    return planes_[static_cast<int>(c)];
  }

 private:
  std::array<Plane<float>, 3> planes_;
};

void check_bit_depth(int bit_depth);

// floor(v / 2^drop_bits) * 2^drop_bits on every codeword of every plane.
PlanarImage quantize_codewords(const PlanarImage& img, int drop_bits);
CodewordPlane quantize_plane(const CodewordPlane& plane, int bit_depth,
                             int drop_bits);

// Round half away from zero, then clamp into [0, 2^bit_depth - 1].
Codeword clamp_codeword(double v, int bit_depth);

std::size_t distinct_codewords(const CodewordPlane& plane);

// Horizontal ramp spanning the full codeword range; with width equal to
// 2^bit_depth every column carries its own codeword. Chroma is mid-gray.
PlanarImage make_ramp_image(int width, int height, int bit_depth);

}  // namespace cmgn
