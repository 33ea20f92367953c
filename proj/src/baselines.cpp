#include "cmgn/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "cmgn/errors.hpp"
#include "cmgn/rng.hpp"

namespace cmgn {

namespace {

CodewordPlane add_field(const CodewordPlane& q, int bit_depth,
                        const Plane<float>& field, double scale) {
  CodewordPlane out(q.width(), q.height());
#pragma omp parallel for schedule(static)
  for (int y = 0; y < q.height(); ++y) {
    const auto src = q.row(y);
    const auto n = field.row(y);
    auto dst = out.row(y);
    for (int x = 0; x < q.width(); ++x) {
      dst[x] = clamp_codeword(src[x] + scale * n[x], bit_depth);
    }
  }
  return out;
}

// Separable box mean with edge clamping.
Plane<float> box_filter(const Plane<float>& in, int radius) {
  const int w = in.width(), h = in.height();
  const double norm = 1.0 / (2 * radius + 1);
  Plane<float> tmp(w, h), out(w, h);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int d = -radius; d <= radius; ++d) {
        acc += in.at(std::clamp(x + d, 0, w - 1), y);
      }
      tmp.at(x, y) = static_cast<float>(acc * norm);
    }
  }
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int d = -radius; d <= radius; ++d) {
        acc += tmp.at(x, std::clamp(y + d, 0, h - 1));
      }
      out.at(x, y) = static_cast<float>(acc * norm);
    }
  }
  return out;
}

}  // namespace

void BaselineConfig::validate() const {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw InvalidArgument("baseline sigma must be finite and non-negative");
  }
  if (kernel_radius < 1) throw InvalidArgument("kernel radius must be at least 1");
}

Plane<float> gaussian_field(int width, int height, std::uint64_t seed) {
  Plane<float> field(width, height);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < height; ++y) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(y)));
    for (float& v : field.row(y)) v = static_cast<float>(rng.gaussian());
  }
  return field;
}

Plane<float> lpf_noise_field(int width, int height, const BaselineConfig& cfg) {
  cfg.validate();
  Plane<float> field =
      box_filter(gaussian_field(width, height, cfg.seed), cfg.kernel_radius);
  double sum = 0.0, sum2 = 0.0;
  for (float v : field.values()) sum += v;
  const double mean = sum / static_cast<double>(field.size());
  for (float v : field.values()) sum2 += (v - mean) * (v - mean);
  const double sd = std::sqrt(sum2 / static_cast<double>(field.size()));
  const double scale = sd > 0.0 ? cfg.sigma / sd : 0.0;
  for (float& v : field.values()) v = static_cast<float>((v - mean) * scale);
  return field;
}

CodewordPlane gaussian_dither(const CodewordPlane& q, int bit_depth,
                              const BaselineConfig& cfg) {
  check_bit_depth(bit_depth);
  cfg.validate();
  if (cfg.sigma == 0.0) return q;
  return add_field(q, bit_depth, gaussian_field(q.width(), q.height(), cfg.seed),
                   cfg.sigma);
}

CodewordPlane lpf_gaussian_dither(const CodewordPlane& q, int bit_depth,
                                  const BaselineConfig& cfg) {
  check_bit_depth(bit_depth);
  cfg.validate();
  if (cfg.sigma == 0.0) return q;
  return add_field(q, bit_depth, lpf_noise_field(q.width(), q.height(), cfg), 1.0);
}

}  // namespace cmgn
