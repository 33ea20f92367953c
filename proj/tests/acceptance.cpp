// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
// failure.

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cmgn/bank_io.hpp"
#include "cmgn/blut.hpp"
#include "cmgn/cli.hpp"
#include "cmgn/errors.hpp"
#include "cmgn/image.hpp"
#include "cmgn/image_io.hpp"
#include "cmgn/injector.hpp"
#include "cmgn/markov_noise.hpp"
#include "cmgn/metrics.hpp"
#include "cmgn/pattern_gen.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace cmgn {
namespace {

// Collects failed checks for one criterion.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    if (!ok) ++failed_;
  }
  void note(const std::string& s) { notes_.push_back(s); }
  bool ok() const { return failed_ == 0; }
  std::string summary() const {
    std::string s;
    for (const auto& n : notes_) s += (s.empty() ? "" : "; ") + n;
    for (const auto& f : failures_) s += (s.empty() ? "" : "; ") + ("FAILED " + f);
    return s;
  }

 private:
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
  int failed_ = 0;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

const PatternBank& default_bank() {
  static const PatternBank bank = [] {
    BankOptions opts;
    opts.master_seed = 2024;
    return build_bank(opts);
  }();
  return bank;
}

PlanarImage random_image(int w, int h, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::array<CodewordPlane, 3> planes;
  for (auto& p : planes) {
    p = CodewordPlane(w, h);
    for (auto& v : p.values()) v = static_cast<Codeword>(gen() % 1024);
  }
  return PlanarImage(std::move(planes), 10);
}

void markov_fidelity(Check& c) {
  const auto t0 = std::chrono::steady_clock::now();
  const MarkovParams defaults;
  for (int k = 0; k < kProbabilityCount; ++k) {
    MarkovParams params = defaults;
    params.p = transition_probability(k);
    MarkovChain chain(params, 1000 + k);
    const long n = 1'000'000;
    long stays = 0, in_state0 = 0;
    double sum[2] = {0, 0}, sum2[2] = {0, 0};
    long count[2] = {0, 0};
    int prev = -1;
    for (long i = 0; i < n; ++i) {
      const double v = chain.next();
      const int s = chain.state();
      if (prev >= 0 && s == prev) ++stays;
      prev = s;
      in_state0 += s == 0;
      sum[s] += v;
      sum2[s] += v * v;
      ++count[s];
    }
    const std::string tag = "p=" + fmt("%.3f", params.p);
    const double stay = static_cast<double>(stays) / (n - 1);
    const double occ = static_cast<double>(in_state0) / n;
    c.expect(std::abs(stay - params.p) <= 0.01, tag + " stay " + fmt("%.4f", stay));
    c.expect(std::abs(occ - 0.5) <= 0.01, tag + " occupancy " + fmt("%.4f", occ));
    const double mus[2] = {defaults.mu0, defaults.mu1};
    const double sds[2] = {defaults.sigma0, defaults.sigma1};
    for (int s = 0; s < 2; ++s) {
      const double m = sum[s] / count[s];
      const double sd = std::sqrt(sum2[s] / count[s] - m * m);
      c.expect(std::abs(m - mus[s]) <= 0.02, tag + " mean " + fmt("%.4f", m));
      c.expect(std::abs(sd - sds[s]) <= 0.02, tag + " std " + fmt("%.4f", sd));
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  c.expect(secs < 10.0, "runtime " + fmt("%.2f s", secs));
  c.note("10 x 1e6 steps in " + fmt("%.2f s", secs));
}

void probability_exactness(Check& c) {
  const PatternBank& bank = default_bank();
  for (int k = 0; k < kProbabilityCount; ++k) {
    const double expected = 0.545 + 0.045 * k;
    for (int v = 0; v < bank.variant_count; ++v) {
      c.expect(std::abs(bank.block(k, v).p - expected) <= 1e-15,
               "k=" + std::to_string(k) + " p " + fmt("%.17g", bank.block(k, v).p));
    }
  }
  c.expect(bank.probability(6) == 0.815, "k=6 is not 0.815");
  c.note("k=6 -> " + fmt("%.3f", bank.probability(6)));
}

void length_conformance(Check& c) {
  const double got = required_length(200);
  const double want = oracle::direct_length(200, 142);
  c.expect(circle_count(200) == 142, "R = " + std::to_string(circle_count(200)));
  const double ulp = std::nextafter(want, INFINITY) - want;
  c.expect(std::abs(got - want) <= 4 * ulp, "L = " + fmt("%.17g", got));
  c.note("R=142, L=" + fmt("%.10f", got) + (got == want ? " (bit-equal)" : ""));
}

void rasterization_totality(Check& c) {
  const MarkovParams params;
  const std::uint64_t seed = 42;
  long total = 0;
  for (int n : circle_sample_counts(200)) total += n;
  const auto chain = generate_sequence(params, total, seed);
  const std::set<float> samples(chain.begin(), chain.end());

  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const NoiseBlock one = rasterize_circular(200, params, seed);
  omp_set_num_threads(4);
  const NoiseBlock four = rasterize_circular(200, params, seed);
  omp_set_num_threads(saved);
  const NoiseBlock again = rasterize_circular(200, params, seed);

  std::size_t unassigned = 0;
  for (float v : one.values) unassigned += samples.count(v) == 0;
  c.expect(one.values.size() == 40000, "block size");
  c.expect(unassigned == 0, std::to_string(unassigned) + " unassigned pixels");
  c.expect(one.values == four.values, "1 vs 4 threads differ");
  c.expect(one.values == again.values, "repeat run differs");

  // The same holds for full curved bank blocks.
  BankOptions opts;
  opts.variants = 2;
  opts.master_seed = 8;
  omp_set_num_threads(1);
  const PatternBank a = build_bank(opts);
  omp_set_num_threads(4);
  const PatternBank b = build_bank(opts);
  omp_set_num_threads(saved);
  bool same = true;
  for (std::size_t i = 0; i < a.blocks.size(); ++i) same &= a.blocks[i].values == b.blocks[i].values;
  c.expect(same, "bank blocks depend on thread count");
  c.note(std::to_string(circular_hole_count(200)) + " raw holes filled, 0 unassigned");
}

void voronoi_correctness(Check& c) {
  std::mt19937_64 gen(5);
  const int counts[3] = {1, 2, 300};
  int agree = 0;
  for (int i = 0; i < 100; ++i) {
    const SiteSet sites = random_sites(100, counts[i % 3], gen());
    agree += voronoi_assign(100, sites).cells == oracle::nearest_site(100, sites.sites);
  }
  c.expect(agree == 100, std::to_string(100 - agree) + " instances disagree");

  const NoiseBlock circ = rasterize_circular(200, MarkovParams{}, 77);
  const SiteSet sites = random_sites(100, 300, 78);
  const CellMap cells = voronoi_assign(100, sites);
  const QuadrantChoices choices = random_quadrant_choices(cells.cell_count, 79);
  const NoiseBlock out = curve_block(circ, cells, choices);
  const int off[4][2] = {{0, 0}, {100, 0}, {0, 100}, {100, 100}};

  // Congruence: every quadrant's cell c is the same pixel set up to the
  // quadrant offset, so the full-block label of (x + ox, y + oy) is c.
  std::vector<std::int32_t> full(200 * 200, -1);
  for (int q = 0; q < 4; ++q) {
    for (int y = 0; y < 100; ++y) {
      for (int x = 0; x < 100; ++x) {
        full[(y + off[q][1]) * 200 + x + off[q][0]] = cells.at(x, y);
      }
    }
  }
  bool congruent = true;
  for (int y = 0; y < 100; ++y) {
    for (int x = 0; x < 100; ++x) {
      for (int q = 1; q < 4; ++q) {
        congruent &= full[(y + off[q][1]) * 200 + x + off[q][0]] == full[y * 200 + x];
      }
    }
  }
  c.expect(congruent, "quadrant cells not congruent");

  int mismatched = 0;
  for (int q = 0; q < 4; ++q) {
    for (int cell = 0; cell < cells.cell_count; ++cell) {
      int matches = 0;
      for (int src = 0; src < 4; ++src) {
        bool equal = true;
        for (int y = 0; y < 100 && equal; ++y) {
          for (int x = 0; x < 100 && equal; ++x) {
            if (cells.at(x, y) != cell) continue;
            equal = out.at(x + off[q][0], y + off[q][1]) ==
                    circ.at(x + off[src][0], y + off[src][1]);
          }
        }
        matches += equal;
      }
      mismatched += matches != 1;
    }
  }
  c.expect(mismatched == 0, std::to_string(mismatched) + " cells without a unique source");
  c.note("100/100 instances match brute force, 1200 cells each copy one source");
}

void zero_mean(Check& c) {
  BankOptions opts;
  double worst = 0.0, worst_raw = 0.0;
  double tile_sum = 0.0, tile_min = 1.0;
  const int seeds = 20;
  for (int s = 0; s < seeds; ++s) {
    opts.master_seed = 3000 + s;
    const NoiseBlock block = build_bank_block(opts, 6, 0);
    worst = std::max(worst, std::abs(pattern_stats(block).mean));
    const double frac = tile_mean_fraction(block.to_plane(), 8, 0.5);
    tile_sum += frac;
    tile_min = std::min(tile_min, frac);

    // Uncentered block from the same seeds, for the report only.
    const BlockSeeds bs = block_seeds(opts.master_seed, 6, 0);
    MarkovParams chain = opts.chain;
    chain.p = transition_probability(6);
    const NoiseBlock raw =
        curve_block(rasterize_circular(200, chain, bs.chain),
                    random_sites(100, opts.site_count, bs.sites), bs.swap);
    worst_raw = std::max(worst_raw, std::abs(pattern_stats(raw).mean));
  }
  const double tile_mean = tile_sum / seeds;
  c.expect(worst <= 0.05, "worst |mean| " + fmt("%.4f", worst));
  c.expect(tile_mean >= 0.20, "tile fraction " + fmt("%.3f", tile_mean));
  c.note("worst |block mean| " + fmt("%.2e", worst) + " (uncentered " +
         fmt("%.3f", worst_raw) + "), tiles |mean|>0.5: " + fmt("%.3f", tile_mean) +
         " overall, min block " + fmt("%.3f", tile_min));
}

void identity_and_locality(Check& c) {
  const PlanarImage img = random_image(320, 180, 11);
  const Blut blut = clipped_power_blut(40, 1000, 0.0, 0.99, 2.2);
  InjectionConfig zero;
  zero.gain_base = 0.0;
  c.expect(inject_frame(img, blut, default_bank(), zero) == img, "gain 0 changed pixels");

  InjectionConfig cfg;
  cfg.gain_base = 3.0;
  cfg.frame_index = 5;
  cfg.tile_offset_seed = 17;
  const PlanarImage base = inject_frame(img, blut, default_bank(), cfg);
  std::mt19937_64 gen(12);
  int leaks = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const int px = static_cast<int>(gen() % 320), py = static_cast<int>(gen() % 180);
    std::array<CodewordPlane, 3> planes = {img.luma(), img.plane(Channel::kCb),
                                           img.plane(Channel::kCr)};
    for (auto& p : planes) p.at(px, py) = static_cast<Codeword>((p.at(px, py) + 1 + gen() % 1000) % 1024);
    const PlanarImage out =
        inject_frame(PlanarImage(std::move(planes), 10), blut, default_bank(), cfg);
    for (Channel ch : kChannels) {
      const auto a = base.plane(ch).values(), b = out.plane(ch).values();
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] != b[i] && i != static_cast<std::size_t>(py) * 320 + px) ++leaks;
      }
    }
  }
  c.expect(leaks == 0, std::to_string(leaks) + " pixels changed outside the perturbation");

  std::size_t out_of_range = 0;
  for (Channel ch : kChannels) {
    for (auto v : base.plane(ch).values()) out_of_range += v > 1023;
  }
  c.expect(out_of_range == 0, std::to_string(out_of_range) + " codewords out of range");
  c.note("gain 0 bit-exact, 20 perturbations local, range [0, 1023]");
}

void adaptivity(Check& c) {
  // Quadratic rise: forward differences strictly increase over Mid.
  const Blut blut = clipped_power_blut(64, 960, 0.02, 0.95, 2.0);
  const RegionPartition part = partition(blut);
  const SlopeProfile prof = slopes(blut, part);
  bool increasing = true;
  for (int t = part.y0 + 1; t < part.yh; ++t) increasing &= prof.slope[t] > prof.slope[t - 1];
  c.expect(increasing, "test BLUT slope is not strictly increasing over Mid");

  const InjectionConfig cfg;
  int prev = -1, violations = 0, first = -1, last = -1;
  for (int t = part.y0; t < part.y1; ++t) {
    const PatternChoice ch = select_pattern(static_cast<Codeword>(t), part, prof, cfg);
    if (!ch.k) {
      ++violations;
      continue;
    }
    if (*ch.k < prev) ++violations;
    if (first < 0) first = *ch.k;
    last = *ch.k;
    prev = *ch.k;
  }
  c.expect(violations == 0, std::to_string(violations) + " non-monotone codewords");

  // Every codeword, repeated down the rows.
  CodewordPlane luma(1024, 64);
  for (int y = 0; y < 64; ++y) {
    for (int x = 0; x < 1024; ++x) luma.at(x, y) = static_cast<Codeword>(x);
  }
  const PlanarImage img({luma, CodewordPlane(1024, 64, 512), CodewordPlane(1024, 64, 512)}, 10);
  InjectionConfig strong;
  strong.gain_base = 4.0;
  const PlanarImage out = inject_frame(img, blut, default_bank(), strong);
  std::size_t changed = 0, touched_mid = 0;
  for (int y = 0; y < 64; ++y) {
    for (int x = 0; x < 1024; ++x) {
      const Region r = part.region(x);
      const bool diff = out.luma().at(x, y) != luma.at(x, y);
      if (r == Region::kDown || r == Region::kUp) changed += diff;
      if (r == Region::kMid) touched_mid += diff;
    }
  }
  c.expect(changed == 0, std::to_string(changed) + " Down/Up pixels changed");
  c.expect(touched_mid > 0, "Mid pixels untouched");
  c.note("k rises " + std::to_string(first) + " -> " + std::to_string(last) +
         " over [" + std::to_string(part.y0) + ", " + std::to_string(part.y1) +
         "), Down/Up bit-unchanged");
}

void debanding_proxy(Check& c) {
  const PlanarImage ramp = make_ramp_image(1024, 256, 10);
  const PlanarImage q = quantize_codewords(ramp, 2);
  const PlanarImage d = inject_frame(q, linear_blut(), default_bank(), InjectionConfig{});
  const BandingReport before = banding_index(q.luma(), true);
  BandingOptions opts;
  opts.threshold = before.threshold;
  const BandingReport after = banding_index(d.luma(), true, opts);
  c.expect(before.distinct_codewords == 256,
           "quantized distinct " + std::to_string(before.distinct_codewords));
  c.expect(after.distinct_codewords > 512,
           "dithered distinct " + std::to_string(after.distinct_codewords));
  c.expect(2 * after.step_count <= before.step_count,
           "steps " + std::to_string(before.step_count) + " -> " +
               std::to_string(after.step_count));
  c.note("distinct " + std::to_string(before.distinct_codewords) + " -> " +
         std::to_string(after.distinct_codewords) + ", steps " +
         std::to_string(before.step_count) + " -> " + std::to_string(after.step_count));
}

void offline_online_split(Check& c) {
  TempDir dir;
  const auto bank_path = dir.path() / "bank.cmgn";
  const auto t0 = std::chrono::steady_clock::now();
  save_bank(default_bank(), bank_path);
  const PatternBank bank = load_bank(bank_path);
  const double load_secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const PlanarImage frame = quantize_codewords(random_image(1920, 1080, 3), 2);
  const Blut blut = clipped_power_blut(32, 980, 0.0, 0.98, 2.0);
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  double best = 1e9;
  for (int f = 0; f < 3; ++f) {
    InjectionConfig cfg;
    cfg.frame_index = f;
    const auto s = std::chrono::steady_clock::now();
    const PlanarImage out = inject_frame(frame, blut, bank, cfg);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - s).count();
    best = std::min(best, secs);
    c.expect(secs < 1.0, "frame " + std::to_string(f) + " took " + fmt("%.3f s", secs));
    c.expect(out.width() == 1920, "output size");
  }
  omp_set_num_threads(saved);
  c.note("bank reload " + fmt("%.3f s", load_secs) + ", 1920x1080 frame " +
         fmt("%.3f s", best) + " on 1 thread");
}

void serialization(Check& c) {
  const PatternBank& bank = default_bank();
  const auto bytes = serialize_bank(bank);
  const PatternBank back = parse_bank(bytes);
  bool exact = back.blocks.size() == bank.blocks.size();
  for (std::size_t i = 0; exact && i < bank.blocks.size(); ++i) {
    exact = std::memcmp(back.blocks[i].values.data(), bank.blocks[i].values.data(),
                        bank.blocks[i].values.size() * sizeof(float)) == 0 &&
            back.blocks[i].p == bank.blocks[i].p && back.blocks[i].seed == bank.blocks[i].seed;
  }
  c.expect(exact && serialize_bank(back) == bytes, "round trip not bit-exact");

  const std::vector<std::function<void(std::vector<unsigned char>&)>> corruptions = {
      [](auto& b) { b[0] = 'X'; },
      [](auto& b) { b[4] = 2; },
      [](auto& b) { b.resize(b.size() / 2); },
      [](auto& b) { b.resize(kBankHeaderSize - 3); },
      [](auto& b) { b.push_back(1); },
      [](auto& b) { b[kBankHeaderSize] = 3; },
      [](auto& b) { b[kBankHeaderSize + 3] ^= 0x40; },
      [](auto& b) { b[kBankHeaderSize + 21] = 0xff; b[kBankHeaderSize + 20] = 0xff; b[kBankHeaderSize + 19] = 0xff; },
  };
  int rejected = 0;
  for (const auto& corrupt : corruptions) {
    auto bad = bytes;
    corrupt(bad);
    try {
      parse_bank(bad);
    } catch (const CorruptBank& e) {
      rejected += std::string(e.what()).find("offset") != std::string::npos;
    }
  }
  c.expect(rejected == static_cast<int>(corruptions.size()),
           std::to_string(corruptions.size() - rejected) + " corruptions accepted");

  // genbank through the command line, twice with different thread counts.
  TempDir dir;
  std::vector<std::vector<unsigned char>> files;
  for (const char* threads : {"1", "3"}) {
    const std::string out = (dir.path() / (std::string("b") + threads + ".cmgn")).string();
    const char* argv[] = {"cmgn", "--threads", threads, "genbank", "--out", out.c_str(),
                          "--block-side", "64", "--sites", "40", "--variants", "2",
                          "--seed", "9"};
    std::ostringstream o, e;
    c.expect(cli::run(14, argv, o, e) == 0, "genbank failed: " + e.str());
    files.push_back(read_file_bytes(out));
  }
  c.expect(files[0] == files[1], "genbank output depends on thread count");
  c.note("bit-exact round trip, " + std::to_string(rejected) + "/" +
         std::to_string(corruptions.size()) + " corruptions rejected with offsets");
}

}  // namespace
}  // namespace cmgn

int main() {
  using Criterion = std::pair<const char*, void (*)(cmgn::Check&)>;
  const Criterion criteria[] = {
      {"markov chain fidelity", cmgn::markov_fidelity},
      {"transition probability exactness", cmgn::probability_exactness},
      {"required chain length", cmgn::length_conformance},
      {"rasterization totality and determinism", cmgn::rasterization_totality},
      {"voronoi correctness and cell swapping", cmgn::voronoi_correctness},
      {"zero-mean blocks with local bias", cmgn::zero_mean},
      {"injection identity, locality, range", cmgn::identity_and_locality},
      {"slope-adaptive pattern selection", cmgn::adaptivity},
      {"de-banding proxy on a ramp", cmgn::debanding_proxy},
      {"offline/online split and frame time", cmgn::offline_online_split},
      {"bank serialization", cmgn::serialization},
  };
  int failed = 0;
  int index = 1;
  for (const auto& [name, fn] : criteria) {
    cmgn::Check check;
    try {
      fn(check);
    } catch (const std::exception& e) {
      check.expect(false, std::string("exception: ") + e.what());
    }
    std::printf("%s %2d %-42s %s\n", check.ok() ? "PASS" : "FAIL", index++, name,
                check.summary().c_str());
    std::fflush(stdout);
    failed += !check.ok();
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed,
              std::size(criteria));
  return failed == 0 ? 0 : 1;
}
