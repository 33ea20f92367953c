#include "cmgn/pattern_gen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <unordered_set>

#include "cmgn/errors.hpp"

namespace cmgn {

namespace {

double half_diagonal(int block_side) {
  return static_cast<double>(block_side) / std::numbers::sqrt2;
}

void check_block_side(int block_side) {
  if (block_side < 2) {
    throw InvalidArgument("block side must be at least 2, got " +
                          std::to_string(block_side));
  }
}

// Fills every unassigned pixel from its nearest assigned one. Reads only the
// original mask, so rows are independent.
void fill_holes(int side, std::vector<float>& values,
                const std::vector<std::uint8_t>& assigned) {
  std::vector<float> source = values;
#pragma omp parallel for schedule(dynamic, 8)
  for (int y = 0; y < side; ++y) {
    for (int x = 0; x < side; ++x) {
      const std::size_t idx = static_cast<std::size_t>(y) * side + x;
      if (assigned[idx]) continue;
      long best_d2 = std::numeric_limits<long>::max();
      std::size_t best_idx = 0;
      for (int ring = 1; ring < 2 * side; ++ring) {
        if (static_cast<long>(ring) * ring > best_d2) break;
        const int y_lo = std::max(0, y - ring), y_hi = std::min(side - 1, y + ring);
        const int x_lo = std::max(0, x - ring), x_hi = std::min(side - 1, x + ring);
        for (int yy = y_lo; yy <= y_hi; ++yy) {
          const bool edge_row = yy == y - ring || yy == y + ring;
          const int step = edge_row ? 1 : 2 * ring;
          for (int xx = edge_row ? x_lo : x - ring; xx <= x_hi; xx += step) {
            if (xx < x_lo) continue;
            const std::size_t j = static_cast<std::size_t>(yy) * side + xx;
            if (!assigned[j]) continue;
            const long dx = xx - x, dy = yy - y;
            const long d2 = dx * dx + dy * dy;
            if (d2 < best_d2 || (d2 == best_d2 && j < best_idx)) {
              best_d2 = d2;
              best_idx = j;
            }
          }
        }
      }
      values[idx] = source[best_idx];
    }
  }
}

// Walks the circles and calls place(pixel_index, sample_index) for every
// sample that lands inside the block.
template <typename Place>
void walk_circles(int block_side, Place&& place) {
  const double hd = half_diagonal(block_side);
  const double center = (block_side - 1) / 2.0;
  const auto counts = circle_sample_counts(block_side);
  std::size_t sample = 0;
  for (std::size_t v = 0; v < counts.size(); ++v) {
    const double r = hd - static_cast<double>(v);
    const int n = counts[v];
    for (int j = 0; j < n; ++j, ++sample) {
      const double theta = 2.0 * std::numbers::pi * j / n;
      // Counter-clockwise on screen: y grows downward.
      const double fx = center + r * std::cos(theta);
      const double fy = center - r * std::sin(theta);
      const int px = static_cast<int>(std::floor(fx + 0.5));
      const int py = static_cast<int>(std::floor(fy + 0.5));
      if (px < 0 || py < 0 || px >= block_side || py >= block_side) continue;
      place(static_cast<std::size_t>(py) * block_side + px, sample);
    }
  }
}

}  // namespace

Plane<float> NoiseBlock::to_plane() const {
  Plane<float> p(side, side);
  std::copy(values.begin(), values.end(), p.values().begin());
  return p;
}

int circle_count(int block_side) {
  check_block_side(block_side);
  return static_cast<int>(std::ceil(half_diagonal(block_side)));
}

std::vector<int> circle_sample_counts(int block_side) {
  const int count = circle_count(block_side);
  const double hd = half_diagonal(block_side);
  std::vector<int> n(count);
  for (int v = 0; v < count; ++v) {
    const double r = hd - v;
    n[v] = std::max(1, static_cast<int>(std::lround(2.0 * std::numbers::pi * r)));
  }
  return n;
}

double required_length(int block_side) {
  const int count = circle_count(block_side);
  const double hd = half_diagonal(block_side);
  double sum = 0.0;
  for (int v = 0; v < count; ++v) sum += hd - v;
  return 2.0 * std::numbers::pi * sum;
}

NoiseBlock rasterize_circular(int block_side, const MarkovParams& params,
                              std::uint64_t seed) {
  check_block_side(block_side);
  if (block_side % 2 != 0) {
    throw InvalidArgument("block side must be even so quadrants tile");
  }
  params.validate();
  const auto counts = circle_sample_counts(block_side);
  std::size_t total = 0;
  for (int n : counts) total += static_cast<std::size_t>(n);
  const auto chain = generate_sequence(params, total, seed);

  NoiseBlock block;
  block.side = block_side;
  block.kind = BlockKind::kCircular;
  block.p = params.p;
  block.seed = seed;
  const std::size_t pixels = static_cast<std::size_t>(block_side) * block_side;
  block.values.assign(pixels, 0.0f);
  std::vector<std::uint8_t> assigned(pixels, 0);
  walk_circles(block_side, [&](std::size_t idx, std::size_t sample) {
    block.values[idx] = static_cast<float>(chain[sample]);
    assigned[idx] = 1;
  });
  fill_holes(block_side, block.values, assigned);
  return block;
}

std::size_t circular_hole_count(int block_side) {
  check_block_side(block_side);
  std::vector<std::uint8_t> assigned(
      static_cast<std::size_t>(block_side) * block_side, 0);
  walk_circles(block_side,
               [&](std::size_t idx, std::size_t) { assigned[idx] = 1; });
  return static_cast<std::size_t>(
      std::count(assigned.begin(), assigned.end(), std::uint8_t{0}));
}

SiteSet random_sites(int quadrant_side, int count, std::uint64_t seed) {
  if (quadrant_side < 1) throw InvalidArgument("quadrant side must be positive");
  const std::uint64_t cells =
      static_cast<std::uint64_t>(quadrant_side) * quadrant_side;
  if (count < 1 || static_cast<std::uint64_t>(count) > cells) {
    throw InvalidArgument("site count must be in [1, quadrant area], got " +
                          std::to_string(count));
  }
  // Floyd's algorithm: uniform sample without replacement, in draw order.
  Rng rng(seed);
  std::unordered_set<std::uint64_t> taken;
  SiteSet set;
  set.quadrant_side = quadrant_side;
  set.sites.reserve(count);
  for (std::uint64_t j = cells - count; j < cells; ++j) {
    std::uint64_t t = rng.uniform_int(j + 1);
    if (taken.count(t)) t = j;
    taken.insert(t);
    set.sites.push_back(Site{static_cast<int>(t % quadrant_side),
                             static_cast<int>(t / quadrant_side)});
  }
  return set;
}

CellMap voronoi_assign(int quadrant_side, const SiteSet& sites) {
  if (sites.sites.empty()) throw InvalidArgument("Voronoi needs at least one site");
  if (quadrant_side < 1) throw InvalidArgument("quadrant side must be positive");
  for (const Site& s : sites.sites) {
    if (s.x < 0 || s.y < 0 || s.x >= quadrant_side || s.y >= quadrant_side) {
      throw InvalidArgument("Voronoi site out of bounds");
    }
  }
  const int n = static_cast<int>(sites.sites.size());
  const int per_axis =
      std::max(1, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n)))));
  const int bucket = std::max(1, (quadrant_side + per_axis - 1) / per_axis);
  const int grid = (quadrant_side + bucket - 1) / bucket;

  // Site indices per bucket, ascending.
  std::vector<std::vector<std::int32_t>> buckets(
      static_cast<std::size_t>(grid) * grid);
  for (int i = 0; i < n; ++i) {
    const Site& s = sites.sites[i];
    buckets[static_cast<std::size_t>(s.y / bucket) * grid + s.x / bucket]
        .push_back(i);
  }

  CellMap map;
  map.side = quadrant_side;
  map.cell_count = n;
  map.cells.assign(static_cast<std::size_t>(quadrant_side) * quadrant_side, 0);

#pragma omp parallel for schedule(static)
  for (int y = 0; y < quadrant_side; ++y) {
    const int by = y / bucket;
    for (int x = 0; x < quadrant_side; ++x) {
      const int bx = x / bucket;
      long best_d2 = std::numeric_limits<long>::max();
      std::int32_t best = -1;
      for (int ring = 0; ring < grid; ++ring) {
        if (ring > 0) {
          const long gap = static_cast<long>(ring - 1) * bucket + 1;
          if (gap * gap > best_d2) break;
        }
        for (int gy = by - ring; gy <= by + ring; ++gy) {
          if (gy < 0 || gy >= grid) continue;
          const bool edge_row = gy == by - ring || gy == by + ring;
          for (int gx = bx - ring; gx <= bx + ring;
               gx += (edge_row || ring == 0) ? 1 : 2 * ring) {
            if (gx < 0 || gx >= grid) continue;
            for (std::int32_t i :
                 buckets[static_cast<std::size_t>(gy) * grid + gx]) {
              const long dx = sites.sites[i].x - x;
              const long dy = sites.sites[i].y - y;
              const long d2 = dx * dx + dy * dy;
              if (d2 < best_d2 || (d2 == best_d2 && i < best)) {
                best_d2 = d2;
                best = i;
              }
            }
          }
        }
      }
      map.cells[static_cast<std::size_t>(y) * quadrant_side + x] = best;
    }
  }
  return map;
}

QuadrantChoices random_quadrant_choices(int cell_count, std::uint64_t seed) {
  Rng rng(seed);
  QuadrantChoices choices(cell_count);
  for (auto& c : choices) {
    for (auto& q : c) q = static_cast<std::uint8_t>(rng.uniform_int(4));
  }
  return choices;
}

QuadrantChoices identity_quadrant_choices(int cell_count) {
  return QuadrantChoices(cell_count, {0, 1, 2, 3});
}

NoiseBlock curve_block(const NoiseBlock& circular, const CellMap& cells,
                       const QuadrantChoices& choices) {
  if (circular.side < 2 || circular.side % 2 != 0) {
    throw InvalidArgument("curving needs an even block side, got " +
                          std::to_string(circular.side));
  }
  const int half = circular.side / 2;
  if (cells.side != half) {
    throw InvalidArgument("cell map does not match the quadrant size");
  }
  if (static_cast<int>(choices.size()) != cells.cell_count) {
    throw InvalidArgument("one quadrant choice per cell required");
  }
  constexpr int kOffX[4] = {0, 1, 0, 1};
  constexpr int kOffY[4] = {0, 0, 1, 1};

  NoiseBlock out = circular;
  out.kind = BlockKind::kCurved;
  const int side = circular.side;
  for (int y = 0; y < half; ++y) {
    for (int x = 0; x < half; ++x) {
      const auto& choice = choices[cells.at(x, y)];
      for (int q = 0; q < 4; ++q) {
        const int src = choice[q];
        const int sx = x + kOffX[src] * half, sy = y + kOffY[src] * half;
        const int dx = x + kOffX[q] * half, dy = y + kOffY[q] * half;
        out.values[static_cast<std::size_t>(dy) * side + dx] =
            circular.values[static_cast<std::size_t>(sy) * side + sx];
      }
    }
  }
  return out;
}

NoiseBlock curve_block(const NoiseBlock& circular, const SiteSet& sites,
                       std::uint64_t seed) {
  if (circular.side < 2 || circular.side % 2 != 0) {
    throw InvalidArgument("curving needs an even block side, got " +
                          std::to_string(circular.side));
  }
  const CellMap cells = voronoi_assign(circular.side / 2, sites);
  return curve_block(circular, cells,
                     random_quadrant_choices(cells.cell_count, seed));
}

void center_block(NoiseBlock& block) {
  if (block.values.empty()) return;
  double sum = 0.0;
  for (float v : block.values) sum += v;
  const double mean = sum / static_cast<double>(block.values.size());
  for (float& v : block.values) v = static_cast<float>(v - mean);
}

double transition_probability(int k) {
  if (k < 0 || k >= kProbabilityCount) {
    throw InvalidArgument("probability index must be in [0, 9]");
  }
  return (545.0 + 45.0 * k) / 1000.0;
}

void BankOptions::validate() const {
  if (block_side < 2 || block_side % 2 != 0 || block_side > 65535) {
    throw InvalidArgument("block side must be even and in [2, 65535]");
  }
  if (variants < 1 || variants > 255) {
    throw InvalidArgument("variants must be in [1, 255]");
  }
  const long quadrant_area = static_cast<long>(block_side / 2) * (block_side / 2);
  if (site_count < 1 || site_count > quadrant_area) {
    throw InvalidArgument("site count must be in [1, quadrant area]");
  }
  MarkovParams probe = chain;
  probe.p = 0.5;
  probe.validate();
}

BlockSeeds block_seeds(std::uint64_t master_seed, int k, int variant) {
  BlockSeeds s;
  s.sub_seed = derive_seed(master_seed, static_cast<std::uint64_t>(k),
                           static_cast<std::uint64_t>(variant));
  s.sites = derive_seed(s.sub_seed, 1);
  s.chain = derive_seed(s.sub_seed, 2);
  s.swap = derive_seed(s.sub_seed, 3);
  return s;
}

NoiseBlock build_bank_block(const BankOptions& options, int k, int variant) {
  const BlockSeeds seeds = block_seeds(options.master_seed, k, variant);
  MarkovParams params = options.chain;
  params.p = transition_probability(k);
  const NoiseBlock circular =
      rasterize_circular(options.block_side, params, seeds.chain);
  const SiteSet sites =
      random_sites(options.block_side / 2, options.site_count, seeds.sites);
  NoiseBlock curved = curve_block(circular, sites, seeds.swap);
  curved.seed = seeds.sub_seed;
  center_block(curved);
  return curved;
}

PatternBank build_bank(const BankOptions& options) {
  options.validate();
  PatternBank bank;
  bank.block_side = options.block_side;
  bank.variant_count = options.variants;
  bank.master_seed = options.master_seed;
  bank.options = options;
  const int total = kProbabilityCount * options.variants;
  bank.blocks.resize(total);
#pragma omp parallel for schedule(dynamic, 1)
  for (int i = 0; i < total; ++i) {
    bank.blocks[i] = build_bank_block(options, i / options.variants,
                                      i % options.variants);
  }
  return bank;
}

}  // namespace cmgn
