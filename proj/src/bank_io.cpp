#include "cmgn/bank_io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <string>

#include "cmgn/errors.hpp"
#include "cmgn/image_io.hpp"

namespace cmgn {

namespace {

class Writer {
 public:
  explicit Writer(std::vector<unsigned char>& out) : out_(out) {}

  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v) { le(v, 2); }
  void u32(std::uint32_t v) { le(v, 4); }
  void u64(std::uint64_t v) { le(v, 8); }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

 private:
  void le(std::uint64_t v, int bytes) {
    for (int i = 0; i < bytes; ++i) out_.push_back(static_cast<unsigned char>(v >> (8 * i)));
  }
  std::vector<unsigned char>& out_;
};

class Reader {
 public:
  explicit Reader(std::span<const unsigned char> in) : in_(in) {}

  std::size_t offset() const { return pos_; }
  std::size_t remaining() const { return in_.size() - pos_; }

  std::uint8_t u8(const char* field) { return static_cast<std::uint8_t>(le(1, field)); }
  std::uint16_t u16(const char* field) { return static_cast<std::uint16_t>(le(2, field)); }
  std::uint32_t u32(const char* field) { return static_cast<std::uint32_t>(le(4, field)); }
  std::uint64_t u64(const char* field) { return le(8, field); }
  float f32(const char* field) { return std::bit_cast<float>(u32(field)); }
  double f64(const char* field) { return std::bit_cast<double>(u64(field)); }

 private:
  std::uint64_t le(int bytes, const char* field) {
    if (remaining() < static_cast<std::size_t>(bytes)) {
      throw CorruptBank(std::string("truncated bank file while reading ") + field,
                        pos_);
    }
    std::uint64_t v = 0;
    for (int i = 0; i < bytes; ++i) {
      v |= static_cast<std::uint64_t>(in_[pos_ + i]) << (8 * i);
    }
    pos_ += bytes;
    return v;
  }

  std::span<const unsigned char> in_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<unsigned char> serialize_bank(const PatternBank& bank) {
  if (bank.block_side < 1 || bank.block_side > 65535 || bank.variant_count < 1 ||
      bank.variant_count > 255 ||
      bank.blocks.size() !=
          static_cast<std::size_t>(kProbabilityCount) * bank.variant_count) {
    throw InvalidBank("bank geometry cannot be serialized");
  }
  const std::size_t pixels =
      static_cast<std::size_t>(bank.block_side) * bank.block_side;
  std::vector<unsigned char> out;
  out.reserve(kBankHeaderSize + bank.blocks.size() * (18 + pixels * 4));
  Writer w(out);
  for (char c : {'C', 'M', 'G', 'N'}) w.u8(static_cast<std::uint8_t>(c));
  w.u16(kBankVersion);
  w.u16(static_cast<std::uint16_t>(bank.block_side));
  w.u8(kProbabilityCount);
  w.u8(static_cast<std::uint8_t>(bank.variant_count));
  w.u64(bank.master_seed);
  for (int k = 0; k < kProbabilityCount; ++k) {
    for (int v = 0; v < bank.variant_count; ++v) {
      const NoiseBlock& b = bank.block(k, v);
      if (b.side != bank.block_side || b.values.size() != pixels) {
        throw InvalidBank("block (" + std::to_string(k) + ", " +
                          std::to_string(v) + ") has the wrong size");
      }
      w.u8(static_cast<std::uint8_t>(k));
      w.u8(static_cast<std::uint8_t>(v));
      w.f64(b.p);
      w.u64(b.seed);
      for (float f : b.values) w.f32(f);
    }
  }
  return out;
}

PatternBank parse_bank(std::span<const unsigned char> bytes) {
  Reader r(bytes);
  char magic[4];
  for (char& c : magic) c = static_cast<char>(r.u8("magic"));
  if (std::memcmp(magic, "CMGN", 4) != 0) {
    throw CorruptBank("bad magic, not a pattern bank", 0);
  }
  const std::size_t version_at = r.offset();
  const std::uint16_t version = r.u16("version");
  if (version != kBankVersion) {
    throw CorruptBank("unsupported bank version " + std::to_string(version) +
                          " (supported: " + std::to_string(kBankVersion) + ")",
                      version_at);
  }
  const std::size_t side_at = r.offset();
  const std::uint16_t side = r.u16("block_side");
  if (side == 0) throw CorruptBank("block side is zero", side_at);
  const std::size_t count_at = r.offset();
  const std::uint8_t prob_count = r.u8("probability_count");
  if (prob_count != kProbabilityCount) {
    throw CorruptBank("probability count must be 10, found " +
                          std::to_string(prob_count),
                      count_at);
  }
  const std::size_t variants_at = r.offset();
  const std::uint8_t variants = r.u8("variant_count");
  if (variants == 0) throw CorruptBank("variant count is zero", variants_at);

  PatternBank bank;
  bank.block_side = side;
  bank.variant_count = variants;
  bank.master_seed = r.u64("master_seed");

  const std::size_t pixels = static_cast<std::size_t>(side) * side;
  const std::size_t record = 1 + 1 + 8 + 8 + 4 * pixels;
  const std::size_t expected =
      kBankHeaderSize + record * kProbabilityCount * variants;
  if (bytes.size() < expected) {
    throw CorruptBank("truncated bank file: expected " + std::to_string(expected) +
                          " bytes, found " + std::to_string(bytes.size()),
                      bytes.size());
  }

  bank.blocks.reserve(static_cast<std::size_t>(kProbabilityCount) * variants);
  for (int k = 0; k < kProbabilityCount; ++k) {
    for (int v = 0; v < variants; ++v) {
      const std::size_t at = r.offset();
      const int rk = r.u8("k");
      const int rv = r.u8("variant");
      if (rk != k || rv != v) {
        throw CorruptBank("block record out of order: expected (" +
                              std::to_string(k) + ", " + std::to_string(v) +
                              "), found (" + std::to_string(rk) + ", " +
                              std::to_string(rv) + ")",
                          at);
      }
      NoiseBlock b;
      b.side = side;
      b.kind = BlockKind::kCurved;
      const std::size_t p_at = r.offset();
      b.p = r.f64("p");
      if (b.p != transition_probability(k)) {
        throw CorruptBank("block probability does not match index " +
                              std::to_string(k),
                          p_at);
      }
      b.seed = r.u64("sub_seed");
      b.values.resize(pixels);
      for (float& f : b.values) {
        const std::size_t at_sample = r.offset();
        f = r.f32("sample");
        if (!std::isfinite(f)) throw CorruptBank("non-finite noise sample", at_sample);
      }
      bank.blocks.push_back(std::move(b));
    }
  }
  if (r.remaining() != 0) {
    throw CorruptBank("trailing bytes after last block", r.offset());
  }
  return bank;
}

void save_bank(const PatternBank& bank, const std::filesystem::path& path) {
  const auto bytes = serialize_bank(bank);
  StagedWrite staged;
  write_file_bytes(staged.stage(path), bytes);
  staged.commit();
}

PatternBank load_bank(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  return parse_bank(bytes);
}

}  // namespace cmgn
