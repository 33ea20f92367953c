#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "cmgn/image.hpp"
#include "cmgn/markov_noise.hpp"

namespace cmgn {

enum class BlockKind : std::uint8_t { kCircular, kCurved };

// Square block of noise samples in codeword units.
struct NoiseBlock {
  int side = 0;
  std::vector<float> values;  // row-major side x side
  BlockKind kind = BlockKind::kCircular;
  double p = 0.0;
  std::uint64_t seed = 0;

  float at(int x, int y) const {
    return values[static_cast<std::size_t>(y) * side + x];
  }
  Plane<float> to_plane() const;
};

struct Site {
  int x = 0;
  int y = 0;
  bool operator==(const Site&) const = default;
};

// Voronoi sites inside one (side/2) x (side/2) quadrant.
struct SiteSet {
  int quadrant_side = 0;
  std::vector<Site> sites;
};

// Nearest-site index per pixel of a quadrant.
struct CellMap {
  int side = 0;
  int cell_count = 0;
  std::vector<std::int32_t> cells;  // row-major

  std::int32_t at(int x, int y) const {
    return cells[static_cast<std::size_t>(y) * side + x];
  }
};

// Circle layout of a circular block: radii block_side/sqrt(2) - v for
// v = 0 .. count-1, where count = ceil(block_side / sqrt(2)) keeps every
// radius positive (142 circles for a 200-pixel block).
int circle_count(int block_side);

// Chain samples laid on each circle, outermost first:
// max(1, round(2 * pi * r_v)).
std::vector<int> circle_sample_counts(int block_side);

// 2*pi * sum over the circles of (block_side/sqrt(2) - v): the chain length
// needed to cover a block.
double required_length(int block_side);

// Lays one continuous Markov-Gaussian chain (seeded with `seed`) along the
// concentric circles centered on the block, outermost first, each circle
// starting at angle 0 and running counter-clockwise with equal angular
// steps. Samples land on the nearest pixel, later samples overwrite earlier
// ones, and pixels no sample reached copy their nearest reached pixel
// (Euclidean distance, ties to the earliest in scan order).
NoiseBlock rasterize_circular(int block_side, const MarkovParams& params,
                              std::uint64_t seed);

// Unassigned-pixel count of the raw circle raster, before hole filling.
std::size_t circular_hole_count(int block_side);

// `count` distinct sites drawn uniformly over the quadrant grid.
SiteSet random_sites(int quadrant_side, int count, std::uint64_t seed);

// Nearest site per pixel, ties to the lowest site index. Bucketed search,
// rows in parallel.
CellMap voronoi_assign(int quadrant_side, const SiteSet& sites);

// For every cell, the source quadrant feeding each destination quadrant.
// Quadrants are numbered 0 top-left, 1 top-right, 2 bottom-left,
// 3 bottom-right.
using QuadrantChoices = std::vector<std::array<std::uint8_t, 4>>;

QuadrantChoices random_quadrant_choices(int cell_count, std::uint64_t seed);
QuadrantChoices identity_quadrant_choices(int cell_count);

NoiseBlock curve_block(const NoiseBlock& circular, const CellMap& cells,
                       const QuadrantChoices& choices);

// Splits the block into quadrants sharing one Voronoi tessellation of
// `sites` and refills each (quadrant, cell) from an independently, uniformly
// chosen co-located cell (with replacement).
NoiseBlock curve_block(const NoiseBlock& circular, const SiteSet& sites,
                       std::uint64_t seed);

// Subtracts the block mean so the stored pattern is globally zero-mean.
void center_block(NoiseBlock& block);

inline constexpr int kProbabilityCount = 10;

// 0.545 + 0.045 k, computed as (545 + 45 k) / 1000 so each value is the
// double nearest its decimal.
double transition_probability(int k);

struct BankOptions {
  int block_side = 200;
  int site_count = 300;
  int variants = 8;
  MarkovParams chain;  // p is overridden per probability index
  std::uint64_t master_seed = 0;

  void validate() const;
};

// Seeds of one bank block.
struct BlockSeeds {
  std::uint64_t sub_seed = 0;
  std::uint64_t sites = 0;
  std::uint64_t chain = 0;
  std::uint64_t swap = 0;
};
BlockSeeds block_seeds(std::uint64_t master_seed, int k, int variant);

struct PatternBank {
  int block_side = 0;
  int variant_count = 0;
  std::uint64_t master_seed = 0;
  // Generation options when built in-process; the file format does not carry
  // site count or state parameters.
  std::optional<BankOptions> options;
  std::vector<NoiseBlock> blocks;  // k-major: index k * variant_count + v

  const NoiseBlock& block(int k, int variant) const {
    return blocks[static_cast<std::size_t>(k) * variant_count + variant];
  }
  double probability(int k) const { return block(k, 0).p; }
};

// Builds one curved, mean-centered block per (k, variant) from seeds derived
// from (master_seed, k, variant). Blocks are generated in parallel; the result
// does not depend on the thread count.
PatternBank build_bank(const BankOptions& options);

NoiseBlock build_bank_block(const BankOptions& options, int k, int variant);

}  // namespace cmgn
