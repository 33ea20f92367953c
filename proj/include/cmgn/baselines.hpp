#pragma once

#include <cstdint>

#include "cmgn/image.hpp"

namespace cmgn {

// Comparator ditherers: plain i.i.d. Gaussian noise, and the same noise
// low-pass filtered with a box kernel and rescaled back to `sigma`.
struct BaselineConfig {
  double sigma = 2.23606797749979;  // sqrt(5): power of the default chain
  int kernel_radius = 2;
  std::uint64_t seed = 0;

  void validate() const;
};

// Unit-variance i.i.d. Gaussian field. Row y draws from its own generator
// seeded with derive_seed(seed, y), so the field is independent of threading.
Plane<float> gaussian_field(int width, int height, std::uint64_t seed);

// Box-filtered (side 2r+1, edge-clamped), centered, and scaled to std sigma.
Plane<float> lpf_noise_field(int width, int height, const BaselineConfig& cfg);

CodewordPlane gaussian_dither(const CodewordPlane& q, int bit_depth,
                              const BaselineConfig& cfg);
CodewordPlane lpf_gaussian_dither(const CodewordPlane& q, int bit_depth,
                                  const BaselineConfig& cfg);

}  // namespace cmgn
