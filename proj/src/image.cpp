#include "cmgn/image.hpp"

#include <cmath>
#include <string>

#include "cmgn/errors.hpp"

namespace cmgn {

void check_bit_depth(int bit_depth) {
  if (bit_depth < kMinBitDepth || bit_depth > kMaxBitDepth) {
    throw InvalidArgument("bit depth must be in [8, 16], got " +
                          std::to_string(bit_depth));
  }
}

PlanarImage::PlanarImage(int width, int height, int bit_depth)
    : bit_depth_(bit_depth) {
  check_bit_depth(bit_depth);
  if (width <= 0 || height <= 0) {
    throw InvalidArgument("image dimensions must be positive");
  }
  for (auto& p : planes_) p = CodewordPlane(width, height, 0);
}

PlanarImage::PlanarImage(std::array<CodewordPlane, 3> planes, int bit_depth)
    : planes_(std::move(planes)), bit_depth_(bit_depth) {
  check_bit_depth(bit_depth);
  const int w = planes_[0].width();
  const int h = planes_[0].height();
  if (w <= 0 || h <= 0) throw InvalidArgument("image dimensions must be positive");
  for (const auto& p : planes_) {
    if (p.width() != w || p.height() != h) {
      throw InvalidArgument("planes must share dimensions (4:4:4 only)");
    }
    for (Codeword v : p.values()) {
      if (v > max_codeword()) {
        throw InvalidArgument("codeword " + std::to_string(v) +
                              " exceeds bit depth " + std::to_string(bit_depth));
      }
    }
  }
}

HdrImage::HdrImage(std::array<Plane<float>, 3> planes)
    : planes_(std::move(planes)) {
  for (const auto& p : planes_) {
    if (p.width() != planes_[0].width() || p.height() != planes_[0].height()) {
      throw InvalidArgument("HDR planes must share dimensions");
    }
    for (float v : p.values()) {
      if (!(v >= 0.0f && v < 1.0f)) {
        throw InvalidArgument("HDR value outside [0, 1)");
      }
    }
  }
}

CodewordPlane quantize_plane(const CodewordPlane& plane, int bit_depth,
                             int drop_bits) {
  if (drop_bits < 0 || drop_bits >= bit_depth) {
    throw InvalidArgument("drop_bits must be in [0, bit_depth), got " +
                          std::to_string(drop_bits));
  }
  CodewordPlane out = plane;
  for (Codeword& v : out.values()) {
    v = static_cast<Codeword>((v >> drop_bits) << drop_bits);
  }
  return out;
}

PlanarImage quantize_codewords(const PlanarImage& img, int drop_bits) {
  std::array<CodewordPlane, 3> planes;
  for (Channel c : kChannels) {
    planes[static_cast<int>(c)] =
        quantize_plane(img.plane(c), img.bit_depth(), drop_bits);
  }
  return PlanarImage(std::move(planes), img.bit_depth());
}

Codeword clamp_codeword(double v, int bit_depth) {
  const double max = static_cast<double>((1u << bit_depth) - 1u);
  if (std::isnan(v)) return 0;
  // std::round is half-away-from-zero.
  const double r = std::round(v);
  if (r <= 0.0) return 0;
  if (r >= max) return static_cast<Codeword>(max);
  return static_cast<Codeword>(r);
}

std::size_t distinct_codewords(const CodewordPlane& plane) {
  std::vector<bool> seen(1u << 16, false);
  std::size_t count = 0;
  for (Codeword v : plane.values()) {
    if (!seen[v]) {
      seen[v] = true;
      ++count;
    }
  }
  return count;
}

PlanarImage make_ramp_image(int width, int height, int bit_depth) {
  check_bit_depth(bit_depth);
  if (width <= 0 || height <= 0) {
    throw InvalidArgument("ramp dimensions must be positive");
  }
  const std::uint64_t levels = 1ull << bit_depth;
  CodewordPlane y(width, height);
  for (int x = 0; x < width; ++x) {
    const auto v = static_cast<Codeword>(x * levels / width);
    for (int r = 0; r < height; ++r) y.at(x, r) = v;
  }
  const auto mid = static_cast<Codeword>(levels / 2);
  return PlanarImage({y, CodewordPlane(width, height, mid),
                      CodewordPlane(width, height, mid)},
                     bit_depth);
}

}  // namespace cmgn
