#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "cmgn/image.hpp"

namespace cmgn {

// Images on disk are a stem plus four files:
//   <stem>.y.pgm  <stem>.cb.pgm  <stem>.cr.pgm   binary P5, maxval 65535,
//                                                big-endian 16-bit samples
//   <stem>.json                                  {"width", "height", "bit_depth"}
// HDR images use the same layout at bit depth 16 with samples
// floor(value * 65536).

void write_pgm16(const std::filesystem::path& path, const CodewordPlane& plane);
CodewordPlane read_pgm16(const std::filesystem::path& path);

std::filesystem::path plane_path(const std::filesystem::path& stem, Channel c);
std::filesystem::path sidecar_path(const std::filesystem::path& stem);

class StagedWrite;

void write_image(const std::filesystem::path& stem, const PlanarImage& img);
void stage_image(StagedWrite& staged, const std::filesystem::path& stem,
                 const PlanarImage& img);
PlanarImage read_image(const std::filesystem::path& stem);

void write_hdr_image(const std::filesystem::path& stem, const HdrImage& img);
void stage_hdr_image(StagedWrite& staged, const std::filesystem::path& stem,
                     const HdrImage& img);
Codeword export_hdr_sample(float v);

// Writes every file to a temporary sibling first and renames them into place
// only after all writes succeeded. Uncommitted temporaries are removed.
class StagedWrite {
 public:
  StagedWrite() = default;
  StagedWrite(const StagedWrite&) = delete;
  StagedWrite& operator=(const StagedWrite&) = delete;
  ~StagedWrite();

  // Returns the temporary path to write to.
  std::filesystem::path stage(const std::filesystem::path& final_path);
  void commit();

 private:
  std::vector<std::pair<std::filesystem::path, std::filesystem::path>> files_;
  bool committed_ = false;
};

void write_file_bytes(const std::filesystem::path& path,
                      const std::vector<unsigned char>& bytes);
std::vector<unsigned char> read_file_bytes(const std::filesystem::path& path);

}  // namespace cmgn
