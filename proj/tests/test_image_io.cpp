#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "cmgn/errors.hpp"
#include "cmgn/image_io.hpp"
#include "test_util.hpp"

namespace cmgn {
namespace {

namespace fs = std::filesystem;

TEST(ImageIoTest, PgmLayoutIsBigEndianMaxval65535) {
  TempDir dir;
  CodewordPlane p(2, 1);
  p.at(0, 0) = 0x0102;
  p.at(1, 0) = 0xfffe;
  write_pgm16(dir.path() / "a.pgm", p);
  const auto bytes = read_file_bytes(dir.path() / "a.pgm");
  const std::string header = "P5\n2 1\n65535\n";
  ASSERT_EQ(bytes.size(), header.size() + 4);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + header.size()), header);
  EXPECT_EQ(bytes[header.size() + 0], 0x01);
  EXPECT_EQ(bytes[header.size() + 1], 0x02);
  EXPECT_EQ(bytes[header.size() + 2], 0xff);
  EXPECT_EQ(bytes[header.size() + 3], 0xfe);
  EXPECT_EQ(read_pgm16(dir.path() / "a.pgm"), p);
}

TEST(ImageIoTest, ImageRoundTripWithSidecar) {
  TempDir dir;
  const PlanarImage img = make_ramp_image(64, 3, 10);
  write_image(dir.path() / "ramp", img);
  EXPECT_TRUE(fs::exists(dir.path() / "ramp.y.pgm"));
  EXPECT_TRUE(fs::exists(dir.path() / "ramp.cb.pgm"));
  EXPECT_TRUE(fs::exists(dir.path() / "ramp.cr.pgm"));
  EXPECT_TRUE(fs::exists(dir.path() / "ramp.json"));
  EXPECT_EQ(read_image(dir.path() / "ramp"), img);
  for (const auto& e : fs::directory_iterator(dir.path())) {
    EXPECT_EQ(e.path().string().find(".tmp."), std::string::npos);
  }
}

TEST(ImageIoTest, ReadsEightBitPgmAndComments) {
  TempDir dir;
  const std::string text = "P5\n# comment\n2 1\n255\n";
  std::vector<unsigned char> bytes(text.begin(), text.end());
  bytes.push_back(7);
  bytes.push_back(200);
  write_file_bytes(dir.path() / "b.pgm", bytes);
  const CodewordPlane p = read_pgm16(dir.path() / "b.pgm");
  EXPECT_EQ(p.at(0, 0), 7);
  EXPECT_EQ(p.at(1, 0), 200);
}

TEST(ImageIoTest, TruncatedPgmIsIoError) {
  TempDir dir;
  const std::string text = "P5\n4 4\n65535\nabc";
  write_file_bytes(dir.path() / "t.pgm",
                   std::vector<unsigned char>(text.begin(), text.end()));
  EXPECT_THROW(read_pgm16(dir.path() / "t.pgm"), IoError);
  EXPECT_THROW(read_pgm16(dir.path() / "missing.pgm"), IoError);
}

TEST(ImageIoTest, SidecarBitDepthIsValidated) {
  TempDir dir;
  write_image(dir.path() / "x", make_ramp_image(1024, 1, 10));
  const std::string meta = R"({"width": 1024, "height": 1, "bit_depth": 8})";
  write_file_bytes(dir.path() / "x.json",
                   std::vector<unsigned char>(meta.begin(), meta.end()));
  EXPECT_THROW(read_image(dir.path() / "x"), InvalidArgument);
}

TEST(ImageIoTest, HdrExportFloorsScaledValues) {
  EXPECT_EQ(export_hdr_sample(0.0f), 0);
  EXPECT_EQ(export_hdr_sample(0.5f), 32768);
  EXPECT_EQ(export_hdr_sample(std::nextafter(1.0f, 0.0f)), 65535);
  EXPECT_EQ(export_hdr_sample(1.5f / 65536.0f), 1);
}

TEST(StagedWriteTest, UncommittedFilesAreRemoved) {
  TempDir dir;
  {
    StagedWrite staged;
    write_file_bytes(staged.stage(dir.path() / "out.bin"), {1, 2, 3});
  }
  EXPECT_TRUE(fs::is_empty(dir.path()));
}

}  // namespace
}  // namespace cmgn
