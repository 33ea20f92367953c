#pragma once

#include <cstdint>
#include <optional>

#include "cmgn/blut.hpp"
#include "cmgn/image.hpp"
#include "cmgn/pattern_gen.hpp"

namespace cmgn {

struct RegionGains {
  double down = 0.0;
  double mid = 1.0;
  double high = 1.0;
  double up = 0.0;

  double operator[](Region r) const {
    switch (r) {
      case Region::kDown:
        return down;
      case Region::kMid:
        return mid;
      case Region::kHigh:
        return high;
      case Region::kUp:
        return up;
    }
    return 0.0;
  }
};

enum class ChromaMode { kOff, kFixed };

struct ChromaPolicy {
  ChromaMode mode = ChromaMode::kFixed;
  int k = 4;
  std::optional<double> gain;  // unset: half of gain_base
};

struct InjectionConfig {
  double gain_base = 1.0;  // s in D = Q + s * N
  RegionGains region_gain;
  ChromaPolicy chroma;
  std::uint64_t frame_index = 0;
  std::uint64_t tile_offset_seed = 0;

  void validate() const;
  double chroma_gain() const { return chroma.gain.value_or(0.5 * gain_base); }
};

struct PatternChoice {
  std::optional<int> k;  // empty: leave the pixel alone
  double gain = 0.0;
};

PatternChoice select_pattern(Codeword t, const RegionPartition& part,
                             const SlopeProfile& prof, const InjectionConfig& cfg);

// Per-frame toroidal offset into the bank blocks.
struct TileOffset {
  int dx = 0;
  int dy = 0;
};
TileOffset frame_offset(const InjectionConfig& cfg, int block_side);

int frame_variant(const PatternBank& bank, const InjectionConfig& cfg);

// Throws InvalidBank if the bank cannot serve injection.
void check_bank(const PatternBank& bank);

// D[x,y] = clamp(Q[x,y] + gain * block(k, variant)[(y+dy) % A][(x+dx) % A]).
// Every output pixel depends only on its own input value and position.
// Rows run in parallel; output is identical for any thread count.
CodewordPlane inject_luma(const CodewordPlane& q, int bit_depth,
                          const RegionPartition& part, const SlopeProfile& prof,
                          const PatternBank& bank, const InjectionConfig& cfg);

CodewordPlane inject_chroma(const CodewordPlane& plane, int bit_depth,
                            const PatternBank& bank, const InjectionConfig& cfg);

// Partition and slopes are derived once, then luma and both chroma planes are
// injected. Luma must be 10-bit to index the BLUT.
PlanarImage inject_frame(const PlanarImage& q, const Blut& blut,
                         const PatternBank& bank, const InjectionConfig& cfg);

// Inverse tone mapping of luma through the BLUT; chroma normalized by
// 2^bit_depth.
HdrImage apply_blut(const PlanarImage& img, const Blut& blut);

// Straight per-pixel loops without lookup tables or threads. Reference for
// the parallel kernels above.
namespace serial {

CodewordPlane inject_luma(const CodewordPlane& q, int bit_depth,
                          const RegionPartition& part, const SlopeProfile& prof,
                          const PatternBank& bank, const InjectionConfig& cfg);
CodewordPlane inject_chroma(const CodewordPlane& plane, int bit_depth,
                            const PatternBank& bank, const InjectionConfig& cfg);
PlanarImage inject_frame(const PlanarImage& q, const Blut& blut,
                         const PatternBank& bank, const InjectionConfig& cfg);

}  // namespace serial

}  // namespace cmgn
