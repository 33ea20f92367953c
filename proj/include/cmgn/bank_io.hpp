#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "cmgn/pattern_gen.hpp"

namespace cmgn {

// Bank file, little-endian:
//   "CMGN"  u16 version (1)  u16 block_side  u8 probability_count (10)
//   u8 variant_count  u64 master_seed
//   then per (k, variant), k-major:
//     u8 k  u8 variant  f64 p  u64 sub_seed  block_side^2 x f32 (row-major)
inline constexpr std::uint16_t kBankVersion = 1;
inline constexpr std::size_t kBankHeaderSize = 4 + 2 + 2 + 1 + 1 + 8;

std::vector<unsigned char> serialize_bank(const PatternBank& bank);

// Throws CorruptBank carrying the byte offset of the first bad field. Never
// returns a partially filled bank.
PatternBank parse_bank(std::span<const unsigned char> bytes);

void save_bank(const PatternBank& bank, const std::filesystem::path& path);
PatternBank load_bank(const std::filesystem::path& path);

}  // namespace cmgn
