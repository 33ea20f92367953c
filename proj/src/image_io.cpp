#include "cmgn/image_io.hpp"

#include <unistd.h>

#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include "json.hpp"
#include <sstream>

#include "cmgn/errors.hpp"

namespace cmgn {
namespace fs = std::filesystem;

namespace {

const char* channel_suffix(Channel c) {
  switch (c) {
    case Channel::kY:
      return ".y.pgm";
    case Channel::kCb:
      return ".cb.pgm";
    case Channel::kCr:
      return ".cr.pgm";
  }
  return "";
}

std::vector<unsigned char> encode_pgm16(const CodewordPlane& plane) {
  std::string header = "P5\n" + std::to_string(plane.width()) + " " +
                       std::to_string(plane.height()) + "\n65535\n";
  std::vector<unsigned char> bytes(header.begin(), header.end());
  bytes.reserve(bytes.size() + plane.size() * 2);
  for (Codeword v : plane.values()) {
    bytes.push_back(static_cast<unsigned char>(v >> 8));
    bytes.push_back(static_cast<unsigned char>(v & 0xff));
  }
  return bytes;
}

// Parses one whitespace-delimited header integer, skipping '#' comments.
long parse_header_int(const std::vector<unsigned char>& b, std::size_t& pos,
                      const fs::path& path) {
  for (;;) {
    while (pos < b.size() && std::isspace(b[pos])) ++pos;
    if (pos < b.size() && b[pos] == '#') {
      while (pos < b.size() && b[pos] != '\n') ++pos;
      continue;
    }
    break;
  }
  long value = 0;
  std::size_t start = pos;
  while (pos < b.size() && std::isdigit(b[pos]) && pos - start < 9) {
    value = value * 10 + (b[pos] - '0');
    ++pos;
  }
  if (pos == start) throw IoError("malformed PGM header in " + path.string());
  return value;
}

std::string json_text(const PlanarImage& img) {
  nlohmann::json j = {{"width", img.width()},
                      {"height", img.height()},
                      {"bit_depth", img.bit_depth()}};
  return j.dump(2) + "\n";
}

}  // namespace

void write_file_bytes(const fs::path& path,
                      const std::vector<unsigned char>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

std::vector<unsigned char> read_file_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

StagedWrite::~StagedWrite() {
  if (committed_) return;
  std::error_code ec;
  for (const auto& [tmp, final_path] : files_) fs::remove(tmp, ec);
}

fs::path StagedWrite::stage(const fs::path& final_path) {
  fs::path tmp = final_path;
  tmp += ".tmp." + std::to_string(::getpid()) + "." +
         std::to_string(files_.size());
  files_.emplace_back(tmp, final_path);
  return tmp;
}

void StagedWrite::commit() {
  for (const auto& [tmp, final_path] : files_) {
    std::error_code ec;
    fs::rename(tmp, final_path, ec);
    if (ec) {
      throw IoError("cannot rename " + tmp.string() + " to " +
                    final_path.string() + ": " + ec.message());
    }
  }
  committed_ = true;
}

void write_pgm16(const fs::path& path, const CodewordPlane& plane) {
  write_file_bytes(path, encode_pgm16(plane));
}

CodewordPlane read_pgm16(const fs::path& path) {
  const auto b = read_file_bytes(path);
  if (b.size() < 2 || b[0] != 'P' || b[1] != '5') {
    throw IoError(path.string() + " is not a binary PGM (P5)");
  }
  std::size_t pos = 2;
  const long w = parse_header_int(b, pos, path);
  const long h = parse_header_int(b, pos, path);
  const long maxval = parse_header_int(b, pos, path);
  if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 65535) {
    throw IoError("unsupported PGM geometry in " + path.string());
  }
  if (pos >= b.size() || !std::isspace(b[pos])) {
    throw IoError("malformed PGM header in " + path.string());
  }
  ++pos;
  const std::size_t bytes_per = maxval > 255 ? 2 : 1;
  const std::size_t need = static_cast<std::size_t>(w) * h * bytes_per;
  if (b.size() - pos < need) throw IoError("truncated PGM " + path.string());
  CodewordPlane plane(static_cast<int>(w), static_cast<int>(h));
  auto values = plane.values();
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = bytes_per == 2
                    ? static_cast<Codeword>((b[pos + 2 * i] << 8) | b[pos + 2 * i + 1])
                    : static_cast<Codeword>(b[pos + i]);
  }
  return plane;
}

fs::path plane_path(const fs::path& stem, Channel c) {
  fs::path p = stem;
  p += channel_suffix(c);
  return p;
}

fs::path sidecar_path(const fs::path& stem) {
  fs::path p = stem;
  p += ".json";
  return p;
}

void write_image(const fs::path& stem, const PlanarImage& img) {
  StagedWrite staged;
  stage_image(staged, stem, img);
  staged.commit();
}

void stage_image(StagedWrite& staged, const fs::path& stem,
                 const PlanarImage& img) {
  for (Channel c : kChannels) {
    write_pgm16(staged.stage(plane_path(stem, c)), img.plane(c));
  }
  const std::string text = json_text(img);
  write_file_bytes(staged.stage(sidecar_path(stem)),
                   std::vector<unsigned char>(text.begin(), text.end()));
}

PlanarImage read_image(const fs::path& stem) {
  const auto raw = read_file_bytes(sidecar_path(stem));
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(raw.begin(), raw.end());
  } catch (const nlohmann::json::exception& e) {
    throw IoError("bad sidecar " + sidecar_path(stem).string() + ": " + e.what());
  }
  int width = 0, height = 0, bit_depth = 0;
  try {
    width = meta.at("width").get<int>();
    height = meta.at("height").get<int>();
    bit_depth = meta.at("bit_depth").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw IoError("bad sidecar " + sidecar_path(stem).string() + ": " + e.what());
  }
  std::array<CodewordPlane, 3> planes;
  for (Channel c : kChannels) {
    auto& p = planes[static_cast<int>(c)];
    p = read_pgm16(plane_path(stem, c));
    if (p.width() != width || p.height() != height) {
      throw IoError(plane_path(stem, c).string() +
                    " does not match sidecar dimensions");
    }
  }
  return PlanarImage(std::move(planes), bit_depth);
}

Codeword export_hdr_sample(float v) {
  const double scaled = std::floor(static_cast<double>(v) * 65536.0);
  if (scaled <= 0.0) return 0;
  if (scaled >= 65535.0) return 65535;
  return static_cast<Codeword>(scaled);
}

void write_hdr_image(const fs::path& stem, const HdrImage& img) {
  StagedWrite staged;
  stage_hdr_image(staged, stem, img);
  staged.commit();
}

void stage_hdr_image(StagedWrite& staged, const fs::path& stem,
                     const HdrImage& img) {
  std::array<CodewordPlane, 3> planes;
  for (Channel c : kChannels) {
    const auto& src = img.plane(c);
    CodewordPlane out(src.width(), src.height());
    auto dst = out.values();
    auto in = src.values();
    for (std::size_t i = 0; i < in.size(); ++i) dst[i] = export_hdr_sample(in[i]);
    planes[static_cast<int>(c)] = std::move(out);
  }
  stage_image(staged, stem, PlanarImage(std::move(planes), 16));
}

}  // namespace cmgn
