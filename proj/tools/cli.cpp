#include "cmgn/cli.hpp"

#include <omp.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cmgn/bank_io.hpp"
#include "cmgn/baselines.hpp"
#include "cmgn/blut.hpp"
#include "cmgn/errors.hpp"
#include "cmgn/image_io.hpp"
#include "cmgn/injector.hpp"
#include "cmgn/metrics.hpp"
#include "json.hpp"

namespace cmgn::cli {

namespace fs = std::filesystem;

namespace {

struct GenbankArgs {
  std::string out;
  BankOptions opts;
};

struct QuantizeArgs {
  std::string in, out;
  int drop_bits = 2;
};

struct InjectArgs {
  std::string in, out, bank, blut, emit_hdr;
  std::string method = "curved";
  std::string chroma = "fixed";
  double gain = 1.0;
  std::uint64_t frame = 0;
  std::uint64_t tile_seed = 0;
  double sigma = BaselineConfig{}.sigma;
  int kernel_radius = BaselineConfig{}.kernel_radius;
  std::uint64_t noise_seed = 0;
};

struct MeasureArgs {
  std::string in, ref, csv;
  bool not_smooth = false;
  std::optional<double> threshold;
};

struct DemoArgs {
  std::string out;
  std::uint64_t seed = 0;
  int width = 1024;
  int height = 256;
  int block_side = 200;
  int sites = 300;
  int variants = 2;
};

nlohmann::json report_json(const BandingReport& r) {
  return {{"step_count", r.step_count},
          {"step_energy", r.step_energy},
          {"distinct_codewords", r.distinct_codewords},
          {"noise_power", r.noise_power},
          {"quantization_step", r.quantization_step},
          {"threshold", r.threshold}};
}

const char* plane_label(Channel c) {
  switch (c) {
    case Channel::kY:
      return "y";
    case Channel::kCb:
      return "cb";
    case Channel::kCr:
      return "cr";
  }
  return "?";
}

double mse(const CodewordPlane& a, const CodewordPlane& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw InvalidArgument("reference image dimensions differ");
  }
  double acc = 0.0;
  auto av = a.values();
  auto bv = b.values();
  for (std::size_t i = 0; i < av.size(); ++i) {
    const double d = static_cast<double>(av[i]) - bv[i];
    acc += d * d;
  }
  return acc / static_cast<double>(av.size());
}

std::string csv_header() {
  return "image,plane,step_count,step_energy,distinct_codewords,noise_power,"
         "quantization_step,threshold,mse\n";
}

std::string csv_row(const std::string& image, Channel c, const BandingReport& r,
                    std::optional<double> err) {
  std::ostringstream os;
  os.precision(10);
  os << image << ',' << plane_label(c) << ',' << r.step_count << ','
     << r.step_energy << ',' << r.distinct_codewords << ',' << r.noise_power
     << ',' << r.quantization_step << ',' << r.threshold << ',';
  if (err) os << *err;
  os << '\n';
  return os.str();
}

// Threshold comes from the reference when one is given, so both images are
// judged at the same jump size.
BandingOptions measure_options(const CodewordPlane* ref,
                               std::optional<double> threshold) {
  BandingOptions opts;
  if (threshold) {
    opts.threshold = threshold;
  } else if (ref != nullptr) {
    opts.threshold = inferred_quantization_step(*ref) / 2.0;
  }
  return opts;
}

void stage_text(StagedWrite& staged, const fs::path& path, const std::string& text) {
  write_file_bytes(staged.stage(path),
                   std::vector<unsigned char>(text.begin(), text.end()));
}

int do_genbank(const GenbankArgs& a, std::ostream& out) {
  const PatternBank bank = build_bank(a.opts);
  save_bank(bank, a.out);
  out << "wrote " << bank.blocks.size() << " blocks (" << bank.block_side << "x"
      << bank.block_side << ", " << bank.variant_count << " variants) to "
      << a.out << "\n";
  return kOk;
}

int do_quantize(const QuantizeArgs& a, std::ostream& out) {
  const PlanarImage img = read_image(a.in);
  const PlanarImage q = quantize_codewords(img, a.drop_bits);
  write_image(a.out, q);
  out << "quantized " << a.in << " -> " << a.out << " (drop " << a.drop_bits
      << " bits, " << distinct_codewords(q.luma()) << " luma codewords)\n";
  return kOk;
}

PlanarImage run_baseline(const PlanarImage& q, const InjectArgs& a) {
  BaselineConfig cfg;
  cfg.sigma = a.gain * a.sigma;
  cfg.kernel_radius = a.kernel_radius;
  cfg.seed = derive_seed(a.noise_seed, a.frame);
  const bool lpf = a.method == "lpf-gaussian";
  auto dither = [&](const CodewordPlane& p, const BaselineConfig& c) {
    return lpf ? lpf_gaussian_dither(p, q.bit_depth(), c)
               : gaussian_dither(p, q.bit_depth(), c);
  };
  std::array<CodewordPlane, 3> planes;
  planes[0] = dither(q.luma(), cfg);
  for (Channel c : {Channel::kCb, Channel::kCr}) {
    if (a.chroma == "off") {
      planes[static_cast<int>(c)] = q.plane(c);
      continue;
    }
    BaselineConfig cc = cfg;
    cc.sigma = 0.5 * cfg.sigma;
    cc.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(c));
    planes[static_cast<int>(c)] = dither(q.plane(c), cc);
  }
  return PlanarImage(std::move(planes), q.bit_depth());
}

int do_inject(const InjectArgs& a, std::ostream& out) {
  const PlanarImage q = read_image(a.in);
  std::optional<Blut> blut;
  if (!a.blut.empty()) blut = load_blut(a.blut);

  PlanarImage d;
  if (a.method == "curved") {
    if (a.bank.empty() || !blut) {
      throw InvalidArgument("--method curved needs --bank and --blut");
    }
    const PatternBank bank = load_bank(a.bank);
    InjectionConfig cfg;
    cfg.gain_base = a.gain;
    cfg.frame_index = a.frame;
    cfg.tile_offset_seed = a.tile_seed;
    cfg.chroma.mode = a.chroma == "off" ? ChromaMode::kOff : ChromaMode::kFixed;
    d = inject_frame(q, *blut, bank, cfg);
  } else {
    d = run_baseline(q, a);
  }

  StagedWrite staged;
  stage_image(staged, a.out, d);
  if (!a.emit_hdr.empty()) {
    if (!blut) throw InvalidArgument("--emit-hdr needs --blut");
    stage_hdr_image(staged, a.emit_hdr, apply_blut(d, *blut));
  }
  staged.commit();
  out << "injected (" << a.method << ") " << a.in << " -> " << a.out << "\n";
  return kOk;
}

int do_blut_inspect(const std::string& path, std::ostream& out) {
  const Blut blut = load_blut(path);
  const RegionPartition part = partition(blut);
  const SlopeProfile prof = slopes(blut, part);
  nlohmann::json j;
  j["y0"] = part.y0;
  j["yh"] = part.yh;
  j["y1"] = part.y1;
  j["highlight_threshold"] = blut.highlight_threshold();
  j["max_slope"] = prof.max_slope;
  nlohmann::json spans = nlohmann::json::object();
  for (Region r : {Region::kDown, Region::kMid, Region::kHigh, Region::kUp}) {
    int lo = -1, hi = -1;
    for (int t = 0; t < kBlutSize; ++t) {
      if (part.region(t) != r) continue;
      if (lo < 0) lo = t;
      hi = t;
    }
    spans[region_name(r)] = lo < 0 ? nlohmann::json(nullptr)
                                   : nlohmann::json::array({lo, hi});
  }
  j["regions"] = spans;
  std::vector<int> bins(kProbabilityCount, 0);
  int skipped = 0;
  const InjectionConfig cfg;
  for (int t = 0; t < kBlutSize; ++t) {
    const PatternChoice c = select_pattern(static_cast<Codeword>(t), part, prof, cfg);
    if (c.k) {
      ++bins[*c.k];
    } else {
      ++skipped;
    }
  }
  j["bin_codeword_counts"] = bins;
  j["uninjected_codewords"] = skipped;
  std::vector<double> probs;
  for (int k = 0; k < kProbabilityCount; ++k) probs.push_back(transition_probability(k));
  j["bin_probabilities"] = probs;
  out << j.dump(2) << "\n";
  return kOk;
}

int do_measure(const MeasureArgs& a, std::ostream& out) {
  const PlanarImage img = read_image(a.in);
  std::optional<PlanarImage> ref;
  if (!a.ref.empty()) ref = read_image(a.ref);
  nlohmann::json j;
  std::string csv = csv_header();
  for (Channel c : kChannels) {
    const CodewordPlane* ref_plane = ref ? &ref->plane(c) : nullptr;
    const BandingReport r =
        banding_index(img.plane(c), !a.not_smooth, measure_options(ref_plane, a.threshold));
    nlohmann::json pj = report_json(r);
    std::optional<double> err;
    if (ref_plane) {
      err = mse(img.plane(c), *ref_plane);
      pj["mse"] = *err;
      const BandingReport rr =
          banding_index(*ref_plane, !a.not_smooth, measure_options(ref_plane, a.threshold));
      pj["ref"] = report_json(rr);
    }
    j[plane_label(c)] = pj;
    csv += csv_row(a.in, c, r, err);
  }
  if (!a.csv.empty()) {
    StagedWrite staged;
    stage_text(staged, a.csv, csv);
    staged.commit();
  }
  out << j.dump(2) << "\n";
  return kOk;
}

int do_demo(const DemoArgs& a, std::ostream& out) {
  const fs::path dir = a.out;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  const PlanarImage ramp = make_ramp_image(a.width, a.height, 10);
  const PlanarImage q = quantize_codewords(ramp, 2);
  const Blut blut = linear_blut();
  BankOptions bo;
  bo.block_side = a.block_side;
  bo.site_count = a.sites;
  bo.variants = a.variants;
  bo.master_seed = a.seed;
  const PatternBank bank = build_bank(bo);

  InjectionConfig cfg;
  cfg.tile_offset_seed = a.seed;
  std::map<std::string, PlanarImage> results;
  results["curved"] = inject_frame(q, blut, bank, cfg);
  InjectArgs ia;
  ia.noise_seed = a.seed;
  ia.method = "gaussian";
  results["gaussian"] = run_baseline(q, ia);
  ia.method = "lpf-gaussian";
  results["lpf-gaussian"] = run_baseline(q, ia);

  StagedWrite staged;
  stage_image(staged, dir / "ramp", ramp);
  stage_image(staged, dir / "quantized", q);
  stage_text(staged, dir / "blut.json", blut_to_json(blut));
  write_file_bytes(staged.stage(dir / "bank.cmgn"), serialize_bank(bank));
  const BandingOptions opts = measure_options(&q.luma(), std::nullopt);
  std::string csv = csv_header();
  csv += csv_row("quantized", Channel::kY, banding_index(q.luma(), true, opts),
                 mse(q.luma(), ramp.luma()));
  for (const auto& [name, img] : results) {
    stage_image(staged, dir / name, img);
    stage_hdr_image(staged, dir / (name + ".hdr"), apply_blut(img, blut));
    csv += csv_row(name, Channel::kY, banding_index(img.luma(), true, opts),
                   mse(img.luma(), ramp.luma()));
  }
  stage_text(staged, dir / "metrics.csv", csv);
  staged.commit();
  out << csv;
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Curved Markov-Gaussian dithering for quantized SDR images"};
  app.require_subcommand(1);
  app.fallthrough();
  int threads = 0;
  app.add_option("--threads", threads, "Cap on worker threads (0: runtime default)")
      ->check(CLI::NonNegativeNumber);

  GenbankArgs gb;
  auto* genbank = app.add_subcommand("genbank", "Generate the offline pattern bank");
  genbank->add_option("--out", gb.out, "Bank file to write")->required();
  genbank->add_option("--block-side", gb.opts.block_side, "Block side in pixels")
      ->capture_default_str();
  genbank->add_option("--sites", gb.opts.site_count, "Voronoi sites per quadrant")
      ->capture_default_str();
  genbank->add_option("--variants", gb.opts.variants, "Variants per probability")
      ->capture_default_str();
  genbank->add_option("--seed", gb.opts.master_seed, "Master seed")->capture_default_str();
  genbank->add_option("--mu0", gb.opts.chain.mu0)->capture_default_str();
  genbank->add_option("--sigma0", gb.opts.chain.sigma0)->capture_default_str();
  genbank->add_option("--mu1", gb.opts.chain.mu1)->capture_default_str();
  genbank->add_option("--sigma1", gb.opts.chain.sigma1)->capture_default_str();

  QuantizeArgs qa;
  auto* quantize = app.add_subcommand("quantize", "Drop low bits to simulate banding");
  quantize->add_option("--in", qa.in, "Input image stem")->required();
  quantize->add_option("--out", qa.out, "Output image stem")->required();
  quantize->add_option("--drop-bits", qa.drop_bits)->capture_default_str();

  InjectArgs ia;
  auto* inject = app.add_subcommand("inject", "Online noise injection");
  inject->add_option("--in", ia.in, "Quantized input image stem")->required();
  inject->add_option("--out", ia.out, "Dithered output image stem")->required();
  inject->add_option("--bank", ia.bank, "Pattern bank (curved method)");
  inject->add_option("--blut", ia.blut, "BLUT JSON (curved method, --emit-hdr)");
  inject->add_option("--gain", ia.gain, "Noise gain s")->capture_default_str();
  inject->add_option("--frame", ia.frame, "Frame index")->capture_default_str();
  inject->add_option("--tile-seed", ia.tile_seed, "Seed of the per-frame tile offsets")
      ->capture_default_str();
  inject->add_option("--method", ia.method)
      ->check(CLI::IsMember({"curved", "gaussian", "lpf-gaussian"}))
      ->capture_default_str();
  inject->add_option("--chroma", ia.chroma)
      ->check(CLI::IsMember({"off", "fixed"}))
      ->capture_default_str();
  inject->add_option("--emit-hdr", ia.emit_hdr, "Also write the BLUT-mapped HDR image");
  inject->add_option("--sigma", ia.sigma, "Baseline noise std")->capture_default_str();
  inject->add_option("--kernel-radius", ia.kernel_radius, "LPF box radius")
      ->capture_default_str();
  inject->add_option("--noise-seed", ia.noise_seed, "Baseline noise seed")
      ->capture_default_str();

  std::string blut_path;
  auto* inspect = app.add_subcommand("blut-inspect", "Print BLUT regions and slope bins");
  inspect->add_option("--blut", blut_path)->required();

  MeasureArgs ma;
  auto* measure = app.add_subcommand("measure", "Banding report per plane");
  measure->add_option("--in", ma.in)->required();
  measure->add_option("--ref", ma.ref, "Reference image; sets the jump threshold");
  measure->add_option("--csv", ma.csv, "Also write a CSV report");
  measure->add_option("--threshold", ma.threshold, "Jump threshold in codewords");
  measure->add_flag("--not-smooth", ma.not_smooth, "Count every jump, not only contours");

  DemoArgs da;
  auto* demo = app.add_subcommand("demo", "Synthetic ramp through all three methods");
  demo->add_option("--out", da.out, "Output directory")->required();
  demo->add_option("--seed", da.seed)->capture_default_str();
  demo->add_option("--variants", da.variants)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  if (threads > 0) omp_set_num_threads(threads);

  try {
    if (*genbank) return do_genbank(gb, out);
    if (*quantize) return do_quantize(qa, out);
    if (*inject) return do_inject(ia, out);
    if (*inspect) return do_blut_inspect(blut_path, out);
    if (*measure) return do_measure(ma, out);
    if (*demo) return do_demo(da, out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  }
  return kUsage;
}

}  // namespace cmgn::cli
