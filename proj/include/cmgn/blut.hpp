#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace cmgn {

inline constexpr int kBlutSize = 1024;
inline constexpr double kDefaultHighlightThreshold = 0.625;

// Backward look-up table: 10-bit SDR luma codeword -> normalized HDR
// intensity. Entries lie in [0, 1) and never decrease.
class Blut {
 public:
  // Throws InvalidBlut on wrong size, out-of-range or decreasing entries.
  explicit Blut(std::vector<double> entries,
                double highlight_threshold = kDefaultHighlightThreshold);

  double operator[](int t) const { return entries_[t]; }
  std::span<const double> entries() const { return entries_; }
  double highlight_threshold() const { return highlight_threshold_; }

 private:
  std::vector<double> entries_;
  double highlight_threshold_;
};

enum class Region { kDown, kMid, kHigh, kUp };
const char* region_name(Region r);

// Down = [0, y0), Mid = [y0, yh), High = [yh, y1), Up = [y1, 1023].
//
// y0 is the last codeword of the flat prefix, y1 the first of the flat
// suffix, yh the first codeword whose HDR value exceeds the highlight
// threshold clamped into (y0, y1]. A constant table has no usable range and
// partitions as y0 = yh = y1 = 0, i.e. everything in Up.
struct RegionPartition {
  int y0 = 0;
  int yh = 0;
  int y1 = 0;

  Region region(int t) const {
    if (t < y0) return Region::kDown;
    if (t < yh) return Region::kMid;
    if (t < y1) return Region::kHigh;
    return Region::kUp;
  }
};

struct SlopeProfile {
  std::vector<double> slope;  // forward differences, last entry replicated
  double max_slope = 0.0;     // over Mid and High
};

RegionPartition partition(const Blut& blut, double highlight_threshold);
RegionPartition partition(const Blut& blut);

SlopeProfile slopes(const Blut& blut, const RegionPartition& part);
SlopeProfile slopes(const Blut& blut);

// Uniform 10-bin mapping: min(9, floor(10 * slope / max_slope)).
// Throws FlatBlut when max_slope <= 0.
int probability_index(double slope, double max_slope);

Blut parse_blut(const std::string& text);
Blut load_blut(const std::filesystem::path& path);
std::string blut_to_json(const Blut& blut);

// entries[t] = t / 1024.
Blut linear_blut();

// Flat at `low` up to y0, rising along t^gamma (gamma > 1 gives slope that
// strictly increases with t) to `high` at y1, flat afterwards.
Blut clipped_power_blut(int y0, int y1, double low, double high, double gamma);

}  // namespace cmgn
