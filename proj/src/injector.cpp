#include "cmgn/injector.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "cmgn/errors.hpp"
#include "cmgn/rng.hpp"

namespace cmgn {

namespace {

void check_luma_depth(int bit_depth) {
  check_bit_depth(bit_depth);
  if (bit_depth != 10) {
    throw InvalidArgument("luma must be 10-bit to index the BLUT, got " +
                          std::to_string(bit_depth));
  }
}

// Shared kernel: per-codeword (k, gain) tables, rows in parallel.
CodewordPlane inject_with_tables(const CodewordPlane& q, int bit_depth,
                                 const PatternBank& bank,
                                 const InjectionConfig& cfg,
                                 const std::vector<std::int8_t>& k_of,
                                 const std::vector<float>& gain_of) {
  const int variant = frame_variant(bank, cfg);
  const TileOffset off = frame_offset(cfg, bank.block_side);
  const int side = bank.block_side;
  const int width = q.width();
  const int height = q.height();
  std::vector<const float*> blocks(kProbabilityCount);
  for (int k = 0; k < kProbabilityCount; ++k) {
    blocks[k] = bank.block(k, variant).values.data();
  }
  // Column index into the block for each x, reused by every row.
  std::vector<int> col(width);
  for (int x = 0; x < width; ++x) col[x] = static_cast<int>((x + off.dx) % side);

  CodewordPlane out(width, height);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < height; ++y) {
    const auto src = q.row(y);
    auto dst = out.row(y);
    const std::size_t block_row =
        static_cast<std::size_t>((y + off.dy) % side) * side;
    for (int x = 0; x < width; ++x) {
      const Codeword t = src[x];
      const int k = k_of[t];
      if (k < 0) {
        dst[x] = t;
        continue;
      }
      const double n = blocks[k][block_row + col[x]];
      dst[x] = clamp_codeword(t + gain_of[t] * n, bit_depth);
    }
  }
  return out;
}

}  // namespace

void InjectionConfig::validate() const {
  if (!(gain_base >= 0.0) || !std::isfinite(gain_base)) {
    throw InvalidArgument("gain must be a finite non-negative number");
  }
  for (double g : {region_gain.down, region_gain.mid, region_gain.high,
                   region_gain.up}) {
    if (!(g >= 0.0) || !std::isfinite(g)) {
      throw InvalidArgument("region gains must be finite and non-negative");
    }
  }
  if (chroma.mode == ChromaMode::kFixed) {
    if (chroma.k < 0 || chroma.k >= kProbabilityCount) {
      throw InvalidArgument("chroma probability index must be in [0, 9]");
    }
    if (!(chroma_gain() >= 0.0) || !std::isfinite(chroma_gain())) {
      throw InvalidArgument("chroma gain must be finite and non-negative");
    }
  }
}

PatternChoice select_pattern(Codeword t, const RegionPartition& part,
                             const SlopeProfile& prof, const InjectionConfig& cfg) {
  if (t >= prof.slope.size()) return {};
  const Region r = part.region(t);
  if (r == Region::kDown || r == Region::kUp) return {};
  if (!(prof.max_slope > 0.0)) return {};
  return {probability_index(prof.slope[t], prof.max_slope),
          cfg.gain_base * cfg.region_gain[r]};
}

TileOffset frame_offset(const InjectionConfig& cfg, int block_side) {
  const std::uint64_t h = derive_seed(cfg.tile_offset_seed, cfg.frame_index);
  const auto side = static_cast<std::uint64_t>(block_side);
  return {static_cast<int>((h & 0xffffffffu) % side),
          static_cast<int>((h >> 32) % side)};
}

int frame_variant(const PatternBank& bank, const InjectionConfig& cfg) {
  return static_cast<int>(cfg.frame_index %
                          static_cast<std::uint64_t>(bank.variant_count));
}

void check_bank(const PatternBank& bank) {
  if (bank.block_side < 1) throw InvalidBank("bank block side is zero");
  if (bank.variant_count < 1) throw InvalidBank("bank has no variants");
  const std::size_t pixels =
      static_cast<std::size_t>(bank.block_side) * bank.block_side;
  if (bank.blocks.size() !=
      static_cast<std::size_t>(kProbabilityCount) * bank.variant_count) {
    throw InvalidBank("bank is missing blocks: expected " +
                      std::to_string(kProbabilityCount * bank.variant_count) +
                      ", found " + std::to_string(bank.blocks.size()));
  }
  for (const auto& b : bank.blocks) {
    if (b.side != bank.block_side || b.values.size() != pixels) {
      throw InvalidBank("bank block has the wrong size");
    }
  }
}

CodewordPlane inject_luma(const CodewordPlane& q, int bit_depth,
                          const RegionPartition& part, const SlopeProfile& prof,
                          const PatternBank& bank, const InjectionConfig& cfg) {
  check_luma_depth(bit_depth);
  check_bank(bank);
  cfg.validate();
  std::vector<std::int8_t> k_of(1u << bit_depth, -1);
  std::vector<float> gain_of(1u << bit_depth, 0.0f);
  for (std::size_t t = 0; t < k_of.size(); ++t) {
    const PatternChoice c =
        select_pattern(static_cast<Codeword>(t), part, prof, cfg);
    if (c.k && c.gain != 0.0) {
      k_of[t] = static_cast<std::int8_t>(*c.k);
      gain_of[t] = static_cast<float>(c.gain);
    }
  }
  return inject_with_tables(q, bit_depth, bank, cfg, k_of, gain_of);
}

CodewordPlane inject_chroma(const CodewordPlane& plane, int bit_depth,
                            const PatternBank& bank, const InjectionConfig& cfg) {
  check_bit_depth(bit_depth);
  cfg.validate();
  if (cfg.chroma.mode == ChromaMode::kOff || cfg.chroma_gain() == 0.0) {
    return plane;
  }
  check_bank(bank);
  std::vector<std::int8_t> k_of(1u << bit_depth,
                                static_cast<std::int8_t>(cfg.chroma.k));
  std::vector<float> gain_of(1u << bit_depth,
                             static_cast<float>(cfg.chroma_gain()));
  return inject_with_tables(plane, bit_depth, bank, cfg, k_of, gain_of);
}

PlanarImage inject_frame(const PlanarImage& q, const Blut& blut,
                         const PatternBank& bank, const InjectionConfig& cfg) {
  check_luma_depth(q.bit_depth());
  const RegionPartition part = partition(blut);
  const SlopeProfile prof = slopes(blut, part);
  return PlanarImage(
      {inject_luma(q.luma(), q.bit_depth(), part, prof, bank, cfg),
       inject_chroma(q.plane(Channel::kCb), q.bit_depth(), bank, cfg),
       inject_chroma(q.plane(Channel::kCr), q.bit_depth(), bank, cfg)},
      q.bit_depth());
}

HdrImage apply_blut(const PlanarImage& img, const Blut& blut) {
  check_luma_depth(img.bit_depth());
  std::array<Plane<float>, 3> planes;
  const double scale = 1.0 / static_cast<double>(1u << img.bit_depth());
  for (Channel c : kChannels) {
    const auto& src = img.plane(c);
    Plane<float> out(src.width(), src.height());
    auto in = src.values();
    auto dst = out.values();
    for (std::size_t i = 0; i < in.size(); ++i) {
      const double v = c == Channel::kY ? blut[in[i]] : in[i] * scale;
      // Keep float rounding from landing on 1.0.
      dst[i] = std::min(static_cast<float>(v), std::nextafter(1.0f, 0.0f));
    }
    planes[static_cast<int>(c)] = std::move(out);
  }
  return HdrImage(std::move(planes));
}

namespace serial {

CodewordPlane inject_luma(const CodewordPlane& q, int bit_depth,
                          const RegionPartition& part, const SlopeProfile& prof,
                          const PatternBank& bank, const InjectionConfig& cfg) {
  check_luma_depth(bit_depth);
  check_bank(bank);
  cfg.validate();
  const int variant = frame_variant(bank, cfg);
  const TileOffset off = frame_offset(cfg, bank.block_side);
  const int side = bank.block_side;
  CodewordPlane out = q;
  for (int y = 0; y < q.height(); ++y) {
    for (int x = 0; x < q.width(); ++x) {
      const Codeword t = q.at(x, y);
      const PatternChoice c = select_pattern(t, part, prof, cfg);
      if (!c.k) continue;
      const NoiseBlock& block = bank.block(*c.k, variant);
      const float n = block.at((x + off.dx) % side, (y + off.dy) % side);
      const float gain = static_cast<float>(c.gain);
      out.at(x, y) = clamp_codeword(t + gain * static_cast<double>(n), bit_depth);
    }
  }
  return out;
}

CodewordPlane inject_chroma(const CodewordPlane& plane, int bit_depth,
                            const PatternBank& bank, const InjectionConfig& cfg) {
  check_bit_depth(bit_depth);
  cfg.validate();
  if (cfg.chroma.mode == ChromaMode::kOff) return plane;
  check_bank(bank);
  const int variant = frame_variant(bank, cfg);
  const TileOffset off = frame_offset(cfg, bank.block_side);
  const int side = bank.block_side;
  const NoiseBlock& block = bank.block(cfg.chroma.k, variant);
  const float gain = static_cast<float>(cfg.chroma_gain());
  CodewordPlane out = plane;
  for (int y = 0; y < plane.height(); ++y) {
    for (int x = 0; x < plane.width(); ++x) {
      const float n = block.at((x + off.dx) % side, (y + off.dy) % side);
      out.at(x, y) = clamp_codeword(
          plane.at(x, y) + gain * static_cast<double>(n), bit_depth);
    }
  }
  return out;
}

PlanarImage inject_frame(const PlanarImage& q, const Blut& blut,
                         const PatternBank& bank, const InjectionConfig& cfg) {
  check_luma_depth(q.bit_depth());
  const RegionPartition part = partition(blut);
  const SlopeProfile prof = slopes(blut, part);
  return PlanarImage(
      {serial::inject_luma(q.luma(), q.bit_depth(), part, prof, bank, cfg),
       serial::inject_chroma(q.plane(Channel::kCb), q.bit_depth(), bank, cfg),
       serial::inject_chroma(q.plane(Channel::kCr), q.bit_depth(), bank, cfg)},
      q.bit_depth());
}

}  // namespace serial

}  // namespace cmgn
