#include "cmgn/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "cmgn/errors.hpp"

namespace cmgn {

int inferred_quantization_step(const CodewordPlane& plane) {
  std::vector<bool> seen(1u << 16, false);
  for (Codeword v : plane.values()) seen[v] = true;
  int step = 0;
  int prev = -1;
  for (int v = 0; v < (1 << 16); ++v) {
    if (!seen[v]) continue;
    if (prev >= 0) step = std::gcd(step, v - prev);
    prev = v;
  }
  return step == 0 ? 1 : step;
}

BandingReport banding_index(const CodewordPlane& plane, bool expected_smooth,
                            const BandingOptions& opts) {
  if (plane.empty()) throw InvalidArgument("banding index needs a non-empty plane");
  if (opts.plateau < 1 || opts.smooth_radius < 1) {
    throw InvalidArgument("plateau and smoothing radius must be positive");
  }
  BandingReport rep;
  rep.quantization_step = inferred_quantization_step(plane);
  rep.threshold = opts.threshold.value_or(rep.quantization_step / 2.0);
  rep.distinct_codewords = distinct_codewords(plane);

  const int w = plane.width(), h = plane.height();
  const int plateau = expected_smooth ? opts.plateau : 1;
  const int radius = opts.smooth_radius;
  std::size_t steps = 0;
  double energy = 0.0, power = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : steps, energy, power)
  for (int y = 0; y < h; ++y) {
    const auto row = plane.row(y);
    for (int x = 0; x + 1 < w; ++x) {
      const double jump = std::abs(static_cast<double>(row[x + 1]) - row[x]);
      if (!(jump > rep.threshold)) continue;
      if (plateau > 1 && (x - (plateau - 1) < 0 || x + plateau >= w)) continue;
      bool flat = true;
      for (int i = 1; i < plateau && flat; ++i) {
        flat = row[x - i] == row[x] && row[x + 1 + i] == row[x + 1];
      }
      if (!flat) continue;
      ++steps;
      energy += jump - rep.threshold;
    }
    // Running mean via prefix sums, edge-clamped window.
    std::vector<double> prefix(w + 1, 0.0);
    for (int x = 0; x < w; ++x) prefix[x + 1] = prefix[x] + row[x];
    for (int x = 0; x < w; ++x) {
      const int lo = std::max(0, x - radius), hi = std::min(w - 1, x + radius);
      const double mean = (prefix[hi + 1] - prefix[lo]) / (hi - lo + 1);
      const double d = row[x] - mean;
      power += d * d;
    }
  }
  rep.step_count = steps;
  rep.step_energy = energy;
  rep.noise_power = power / static_cast<double>(plane.size());
  return rep;
}

PatternStats pattern_stats(const Plane<float>& field) {
  if (field.empty()) throw InvalidArgument("pattern stats need a non-empty field");
  PatternStats st;
  const auto vals = field.values();
  double sum = 0.0;
  for (float v : vals) sum += v;
  st.mean = sum / static_cast<double>(vals.size());
  double ss = 0.0;
  for (float v : vals) ss += (v - st.mean) * (v - st.mean);
  st.variance = ss / static_cast<double>(vals.size());

  const double tan_22_5 = std::tan(std::numbers::pi / 8.0);
  double axis_energy = 0.0, total_energy = 0.0;
  for (int y = 1; y + 1 < field.height(); ++y) {
    for (int x = 1; x + 1 < field.width(); ++x) {
      const double gx = 0.5 * (field.at(x + 1, y) - field.at(x - 1, y));
      const double gy = 0.5 * (field.at(x, y + 1) - field.at(x, y - 1));
      const double e = gx * gx + gy * gy;
      total_energy += e;
      const double lo = std::min(std::abs(gx), std::abs(gy));
      const double hi = std::max(std::abs(gx), std::abs(gy));
      if (lo <= tan_22_5 * hi) axis_energy += e;
    }
  }
  st.orientation_ratio = total_energy > 0.0 ? axis_energy / total_energy : 0.0;

  std::size_t runs = 0;
  for (int y = 0; y < field.height(); ++y) {
    const auto row = field.row(y);
    for (int x = 0; x < field.width(); ++x) {
      if (x == 0 || (row[x] < 0.0f) != (row[x - 1] < 0.0f)) ++runs;
    }
  }
  st.run_length_mean = static_cast<double>(vals.size()) / runs;
  return st;
}

PatternStats pattern_stats(const NoiseBlock& block) {
  return pattern_stats(block.to_plane());
}

double tile_mean_fraction(const Plane<float>& field, int tile, double threshold) {
  if (tile < 1) throw InvalidArgument("tile size must be positive");
  std::size_t tiles = 0, hits = 0;
  for (int ty = 0; ty + tile <= field.height(); ty += tile) {
    for (int tx = 0; tx + tile <= field.width(); tx += tile) {
      double sum = 0.0;
      for (int y = ty; y < ty + tile; ++y) {
        for (int x = tx; x < tx + tile; ++x) sum += field.at(x, y);
      }
      ++tiles;
      if (std::abs(sum / (tile * tile)) > threshold) ++hits;
    }
  }
  return tiles == 0 ? 0.0 : static_cast<double>(hits) / tiles;
}

double mean_sign_run_length(std::span<const double> values) {
  if (values.empty()) return 0.0;
  std::size_t runs = 1;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if ((values[i] < 0.0) != (values[i - 1] < 0.0)) ++runs;
  }
  return static_cast<double>(values.size()) / runs;
}

}  // namespace cmgn
