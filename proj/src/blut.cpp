#include "cmgn/blut.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "cmgn/errors.hpp"
#include "json.hpp"

namespace cmgn {

Blut::Blut(std::vector<double> entries, double highlight_threshold)
    : entries_(std::move(entries)), highlight_threshold_(highlight_threshold) {
  if (entries_.size() != kBlutSize) {
    throw InvalidBlut("BLUT must have exactly 1024 entries, got " +
                      std::to_string(entries_.size()));
  }
  if (!(highlight_threshold > 0.0 && highlight_threshold < 1.0)) {
    throw InvalidBlut("highlight threshold must be in (0, 1)");
  }
  for (int t = 0; t < kBlutSize; ++t) {
    const double v = entries_[t];
    if (!(v >= 0.0 && v < 1.0)) {
      throw InvalidBlut("BLUT entry " + std::to_string(t) + " outside [0, 1)");
    }
    if (t > 0 && v < entries_[t - 1]) {
      throw InvalidBlut("BLUT decreases at codeword " + std::to_string(t));
    }
  }
}

const char* region_name(Region r) {
  switch (r) {
    case Region::kDown:
      return "down";
    case Region::kMid:
      return "mid";
    case Region::kHigh:
      return "high";
    case Region::kUp:
      return "up";
  }
  return "?";
}

RegionPartition partition(const Blut& blut, double highlight_threshold) {
  if (!(highlight_threshold > 0.0 && highlight_threshold < 1.0)) {
    throw InvalidArgument("highlight threshold must be in (0, 1)");
  }
  const auto e = blut.entries();
  // Monotonicity is a constructor invariant of Blut.
  int y0 = 0;
  while (y0 + 1 < kBlutSize && e[y0 + 1] == e[0]) ++y0;
  if (y0 == kBlutSize - 1) return RegionPartition{0, 0, 0};

  int y1 = kBlutSize - 1;
  while (y1 > 0 && e[y1 - 1] == e[kBlutSize - 1]) --y1;

  int yh = y1;
  for (int t = 0; t < kBlutSize; ++t) {
    if (e[t] > highlight_threshold) {
      yh = t;
      break;
    }
  }
  yh = std::clamp(yh, y0 + 1, y1);
  return RegionPartition{y0, yh, y1};
}

RegionPartition partition(const Blut& blut) {
  return partition(blut, blut.highlight_threshold());
}

SlopeProfile slopes(const Blut& blut, const RegionPartition& part) {
  SlopeProfile prof;
  prof.slope.resize(kBlutSize);
  const auto e = blut.entries();
  for (int t = 0; t + 1 < kBlutSize; ++t) prof.slope[t] = e[t + 1] - e[t];
  prof.slope[kBlutSize - 1] = prof.slope[kBlutSize - 2];
  for (int t = part.y0; t < part.y1; ++t) {
    prof.max_slope = std::max(prof.max_slope, prof.slope[t]);
  }
  return prof;
}

SlopeProfile slopes(const Blut& blut) { return slopes(blut, partition(blut)); }

int probability_index(double slope, double max_slope) {
  if (!(max_slope > 0.0)) {
    throw FlatBlut("BLUT has no positive slope; skip injection");
  }
  const double bin = std::floor(10.0 * std::max(slope, 0.0) / max_slope);
  return static_cast<int>(std::min(9.0, bin));
}

Blut parse_blut(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidBlut(std::string("BLUT is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("entries") || !j["entries"].is_array()) {
    throw InvalidBlut("BLUT document needs an \"entries\" array");
  }
  std::vector<double> entries;
  entries.reserve(kBlutSize);
  for (const auto& v : j["entries"]) {
    if (!v.is_number()) throw InvalidBlut("BLUT entries must be numbers");
    entries.push_back(v.get<double>());
  }
  double threshold = kDefaultHighlightThreshold;
  if (j.contains("highlight_threshold")) {
    if (!j["highlight_threshold"].is_number()) {
      throw InvalidBlut("highlight_threshold must be a number");
    }
    threshold = j["highlight_threshold"].get<double>();
  }
  return Blut(std::move(entries), threshold);
}

Blut load_blut(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open BLUT " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_blut(ss.str());
}

std::string blut_to_json(const Blut& blut) {
  nlohmann::json j;
  j["entries"] = std::vector<double>(blut.entries().begin(), blut.entries().end());
  j["highlight_threshold"] = blut.highlight_threshold();
  return j.dump() + "\n";
}

Blut linear_blut() {
  std::vector<double> e(kBlutSize);
  for (int t = 0; t < kBlutSize; ++t) e[t] = t / 1024.0;
  return Blut(std::move(e));
}

Blut clipped_power_blut(int y0, int y1, double low, double high, double gamma) {
  if (y0 < 0 || y1 >= kBlutSize || y0 >= y1) {
    throw InvalidArgument("clipped BLUT needs 0 <= y0 < y1 <= 1023");
  }
  std::vector<double> e(kBlutSize);
  for (int t = 0; t < kBlutSize; ++t) {
    const int c = std::clamp(t, y0, y1);
    const double u = static_cast<double>(c - y0) / (y1 - y0);
    e[t] = low + (high - low) * std::pow(u, gamma);
  }
  return Blut(std::move(e));
}

}  // namespace cmgn
